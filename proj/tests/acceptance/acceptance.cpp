/*
Copyright 2026 bekktail developers
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/


// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "bekktail/assumptions.hpp"
#include "bekktail/fixtures.hpp"
#include "bekktail/model.hpp"
#include "bekktail/random.hpp"
#include "bekktail/simulate.hpp"
#include "bekktail/stationarity.hpp"
#include "bekktail/structure.hpp"
#include "bekktail/tail_estimator.hpp"
#include "bekktail/tail_solver.hpp"

using namespace bekk;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

bool within_rel(double x, double target, double rel) { return std::abs(x - target) <= rel * std::abs(target); }

ModelSpec diag_spec(double a, double b) { return make_spec(2, 1, 1, {mat2(a, 0, 0, b)}); }

std::vector<ComponentTailDiagnostics> ensemble_hill(const ModelSpec& spec, long n, int replicas, std::uint64_t seed) {
    SimConfig sim;
    sim.seed = seed;
    sim.burn_in = 10000;
    sim.n_samples = n;
    sim.replicas = replicas;
    return component_tail_report(spec, sim, nullptr);
}

// --- criteria ---------------------------------------------------------------

Outcome c1() {
    const double b = nelson_bound();
    // Compared at 4 significant digits.
    char s[32];
    std::snprintf(s, sizeof s, "%.3f", b);
    return {std::string(s) == "3.562" && std::abs(b - 3.5622) < 5e-4, fmt("bound %.6f", b)};
}

Outcome c2() {
    const double a = solve_component_tail_index(1.0);
    bool ok = std::abs(a - 2.0) < 1e-10;
    double worst = 0.0;
    CounterStream rng = CounterStream::derive(2024, 0);
    for (int i = 0; i < 20; ++i) {
        const double sigma = 0.05 + 3.0 * rng.uniform();
        worst = std::max(worst, std::abs(gaussian_abs_moment(2.0, sigma) - sigma * sigma) / std::max(1.0, sigma * sigma));
    }
    ok = ok && worst < 1e-12;
    return {ok, fmt("alpha(1) - 2 = %.2e, worst second-moment error %.2e", a - 2.0, worst)};
}

Outcome c3() {
    const auto dg = ensemble_hill(scalar_arch(1.0), 1000000, 1000, 3);
    const auto& h = dg[0];
    const bool ok = h.hill.alpha_hat >= 1.75 && h.hill.alpha_hat <= 2.25 && h.p_hat >= 0.45 && h.p_hat <= 0.55;
    return {ok, fmt("alpha_hat %.4f (k=%ld), p_hat %.4f", h.hill.alpha_hat, h.hill.k, h.p_hat)};
}

Outcome c4() {
    const double theory = solve_component_tail_index(1.26491);
    const auto dg = ensemble_hill(fixture("5.3").spec, 1000000, 1000, 4);
    const double a1 = dg[0].hill.alpha_hat, a2 = dg[1].hill.alpha_hat;
    const bool ok = within_rel(a1, theory, 0.15) && within_rel(a2, theory, 0.15) &&
                    std::abs(a1 - a2) <= 0.10 * std::max(a1, a2);
    return {ok, fmt("theory %.4f, hill %.4f / %.4f", theory, a1, a2)};
}

Outcome c5() {
    const Fixture fx = fixture("6.4");
    const double alpha2 = solve_component_tail_index(std::hypot(0.4, 1.1));
    const double alpha1 = solve_component_tail_index(std::hypot(0.4, 0.5));
    const double target1 = std::min(alpha1, alpha2);
    const auto dg = ensemble_hill(fx.spec, 1000000, 1000, 5);
    const StructureDecomposition dec = simultaneous_triangularize_2d(fx.spec.A);
    const ForwardConstant fc = forward_constant_triangular(fx.spec, dec, alpha2);
    bool plateau = fc.w_s.size() >= 6;
    for (std::size_t s = fc.w_s.size() - 5; plateau && s < fc.w_s.size(); ++s)
        plateau = std::abs(fc.w_s[s] - fc.w_s[s - 1]) < 0.01 * std::abs(fc.w_s[s - 1]);
    const bool ok = within_rel(dg[1].hill.alpha_hat, alpha2, 0.15) && within_rel(dg[0].hill.alpha_hat, target1, 0.15) &&
                    plateau && fc.c1_tilde > 0.0;
    return {ok, fmt("alpha2 %.4f hill2 %.4f, min %.4f hill1 %.4f, w_s tail %.4f plateau %d, c1~ %.4f", alpha2,
                    dg[1].hill.alpha_hat, target1, dg[0].hill.alpha_hat, fc.w_s.back(), int(plateau), fc.c1_tilde)};
}

Outcome c6() {
    const auto dg = ensemble_hill(diag_spec(0.6, 1.2), 1000000, 1000, 6);
    const HillEstimate& h1 = dg[0].hill;
    const HillEstimate& h2 = dg[1].hill;
    // |D_22| > |D_11| so component 2 has the smaller index.
    const bool ok = h2.ci_high < h1.ci_low;
    return {ok, fmt("comp1 [%.3f, %.3f], comp2 [%.3f, %.3f]", h1.ci_low, h1.ci_high, h2.ci_low, h2.ci_high)};
}

Outcome c7() {
    const ModelSpec spec = diag_spec(0.6, 1.2);
    const LyapunovReport r = lyapunov_estimate(spec, 2000, 200, 7);
    const double cf = *lyapunov_closed_form(spec);
    const LyapunovReport s3 = lyapunov_estimate(scalar_arch(std::sqrt(3.0)), 2000, 200, 7);
    const LyapunovReport s4 = lyapunov_estimate(scalar_arch(2.0), 2000, 200, 7);
    const bool ok = std::abs(r.gamma_hat - cf) <= 3.0 * r.stderr_ && s3.verdict == StationarityVerdict::Stationary &&
                    s4.verdict == StationarityVerdict::NonStationary;
    return {ok, fmt("gamma %.5f vs %.5f (se %.5f); a^2=3 %s, a^2=4 %s", r.gamma_hat, cf, r.stderr_,
                    std::string(to_string(s3.verdict)).c_str(), std::string(to_string(s4.verdict)).c_str())};
}

Outcome c8() {
    const SpectralTailEstimate s = solve_spectral_tail_index(scalar_arch(1.0));
    const SpectralTailEstimate d = solve_spectral_tail_index(diag_spec(0.5, 1.2));
    const double cf = std::min(solve_component_tail_index(0.5), solve_component_tail_index(1.2));
    const bool ok = s.alpha >= 1.9 && s.alpha <= 2.1 && within_rel(d.alpha, cf, 0.10);
    return {ok, fmt("scalar %.4f, diagonal %.4f vs %.4f", s.alpha, d.alpha, cf)};
}

Outcome c9() {
    const auto v5 = check_all_assumptions(fixture("7.5").spec);
    bool ok = v5.size() == 4;
    std::string d = "7.5:";
    for (const auto& v : v5) {
        ok = ok && v.status == AssumptionStatus::Holds;
        d += " " + std::string(to_string(v.status));
    }
    const ModelSpec s6 = fixture("7.6").spec;
    const auto np = check_nonparallel_trajectory(s6);
    const auto det = check_det_nondegenerate(s6);
    ok = ok && np.status == AssumptionStatus::Holds && det.status == AssumptionStatus::Holds;
    d += "; 7.6: nonparallel " + std::string(to_string(np.status)) + ", det " + std::string(to_string(det.status));
    return {ok, d};
}

Outcome c10() {
    SimConfig sim;
    sim.seed = 10;
    sim.burn_in = 10000;
    sim.n_samples = 10000000;
    sim.replicas = 1000;
    const SimBatch batch = simulate_ensemble(scalar_arch(1.0), sim);
    std::vector<double> x(batch.samples.data(), batch.samples.data() + batch.samples.rows());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    std::vector<double> scaled;
    for (int t = 8; t <= 20; ++t) {
        const auto above = static_cast<double>(x.end() - std::upper_bound(x.begin(), x.end(), double(t)));
        scaled.push_back(double(t) * t * above / n);
    }
    std::nth_element(scaled.begin(), scaled.begin() + scaled.size() / 2, scaled.end());
    const double med = scaled[scaled.size() / 2];
    const GoldieEstimate g = goldie_constant(ScalarSre{1.0, 1.0}, 2.0, 1000000, 10);
    return {within_rel(med, g.value, 0.30), fmt("median x^2 P(X>x) %.4f, c+ %.4f (se %.4f)", med, g.value, g.stderr_)};
}

// Simulation-free property checks; the unit suites cover each in depth.
Outcome c11() {
    int failures = 0;
    std::string first;
    auto require = [&](bool cond, const std::string& what) {
        if (!cond && failures++ == 0) first = what;
    };
    CounterStream rng = CounterStream::derive(11, 0);

    for (double sigma = 0.4; sigma < 1.85; sigma += 0.05) {
        const double a = solve_component_tail_index(sigma);
        require(std::abs(gaussian_abs_moment(a, sigma) - 1.0) < 1e-10, fmt("moment identity at sigma %.2f", sigma));
        require(moment_log_derivative(a, sigma) > 0.0, fmt("m_alpha sign at sigma %.2f", sigma));
    }
    for (int i = 0; i < 200; ++i) {
        const double sigma = 0.1 + 3.0 * rng.uniform();
        const double a = 20.0 * rng.uniform(), b = 20.0 * rng.uniform();
        const double mid = log_gaussian_abs_moment(0.5 * (a + b), sigma);
        require(mid <= 0.5 * (log_gaussian_abs_moment(a, sigma) + log_gaussian_abs_moment(b, sigma)) + 1e-12,
                "log-convexity");
    }
    for (const std::string& id : {"5.2", "5.3", "5.4", "5.6", "6.4"}) {
        const ModelSpec spec = fixture(id).spec;
        const StructureDecomposition dec = classify_structure(spec.A);
        require(dec.kind != StructureKind::General, "structure " + id);
        double err = 0.0;
        for (std::size_t j = 0; j < spec.A.size(); ++j)
            err = std::max(err, (dec.P * spec.A[j] * dec.P_inv - dec.transformed[j]).cwiseAbs().maxCoeff());
        require(err <= dec.tol && (dec.P * dec.P_inv - Matrix::Identity(spec.d, spec.d)).cwiseAbs().maxCoeff() < 1e-10,
                "reconstruction " + id);
    }
    for (const std::string& id : fixture_ids()) {
        const ModelSpec spec = fixture(id).spec;
        Vector x(spec.companion_dim());
        for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = 2.0 * rng.normal();
        Matrix h = spec.C;
        for (int i = 1; i <= spec.q; ++i)
            for (int j = 1; j <= spec.l; ++j) {
                const Vector v = spec.coef(i, j) * x.segment((i - 1) * spec.d, spec.d);
                h += v * v.transpose();
            }
        require((h - one_step_covariance(spec, x)).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + h.cwiseAbs().maxCoeff()),
                "one-step covariance " + id);
    }
    for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
        const long n = 100000;
        std::vector<double> xs(n);
        CounterStream p = CounterStream::derive(11, static_cast<std::uint64_t>(alpha * 10));
        for (double& v : xs) v = std::pow(1.0 - p.uniform(), -1.0 / alpha);
        const HillEstimate h = hill_estimator(xs, default_hill_k(n));
        require(std::abs(h.alpha_hat - alpha) <= 2.0 * alpha / std::sqrt(double(h.k)), fmt("Hill on Pareto(%.1f)", alpha));
    }
    return {failures == 0, failures == 0 ? "all properties hold" : fmt("%d failures, first: %s", failures, first.c_str())};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"nelson bound", c1},          {"root exactness", c2},           {"scalar Hill", c3},
        {"equal-index ordering", c4},  {"triangular tails and constants", c5},
        {"diagonal heterogeneity", c6}, {"Lyapunov consistency", c7},   {"spectral solver", c8},
        {"assumption checkers", c9},   {"Goldie constant coherence", c10}, {"property suites", c11},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        std::printf("criterion %2zu %-32s %s  (%.1fs) %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                    secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
