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


#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "bekktail/fixtures.hpp"
#include "bekktail/random.hpp"
#include "bekktail/simulate.hpp"
#include "bekktail/tail_estimator.hpp"
#include "common.hpp"

using namespace bekk;
using testutil::throws_code;

namespace {

std::vector<double> pareto(double alpha, long n, std::uint64_t seed, bool random_sign = false) {
    CounterStream s = CounterStream::derive(seed, 0);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) {
        v = std::pow(1.0 - s.uniform(), -1.0 / alpha);
        if (random_sign && s.uniform() < 0.5) v = -v;
    }
    return x;
}

SimBatch batch_of(const std::vector<double>& x) {
    SimBatch b;
    b.samples.resize(static_cast<Eigen::Index>(x.size()), 1);
    for (std::size_t i = 0; i < x.size(); ++i) b.samples(static_cast<Eigen::Index>(i), 0) = x[i];
    return b;
}

}  // namespace

TEST_CASE("Hill matches the order-statistic formula") {
    std::vector<double> x = pareto(1.3, 5000, 17, true);
    const HillEstimate h = hill_estimator(x, 300);
    for (double& v : x) v = std::abs(v);
    std::sort(x.begin(), x.end(), std::greater<>());
    double s = 0.0;
    for (int i = 0; i < 300; ++i) s += std::log(x[i] / x[300]);
    CHECK(h.alpha_hat == doctest::Approx(300.0 / s).epsilon(1e-12));
    CHECK(h.threshold == x[300]);
}

// The 2-sigma band holds with probability ~95%, so it is checked as a coverage
// rate over independent samples rather than on one draw.
TEST_CASE("Hill on exact Pareto samples") {
    const int reps = 40;
    for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
        for (long k : {1000L, default_hill_k(100000)}) {
            int inside = 0;
            double mean = 0.0;
            for (int r = 0; r < reps; ++r) {
                const HillEstimate e = hill_estimator(pareto(alpha, 100000, 1000 * r + static_cast<std::uint64_t>(alpha * 4)), k);
                if (std::abs(e.alpha_hat - alpha) <= 2.0 * alpha / std::sqrt(double(k))) ++inside;
                mean += e.alpha_hat / reps;
            }
            CHECK(inside >= 34);
            CHECK(std::abs(mean - alpha) <= 3.0 * alpha / std::sqrt(double(k) * reps));
        }
    }
}

TEST_CASE("Hill band invariants") {
    const HillEstimate h = hill_estimator(pareto(1.5, 5000, 2, true), 200);
    CHECK(h.k == 200);
    CHECK(h.n == 5000);
    CHECK(h.ci_low < h.alpha_hat);
    CHECK(h.alpha_hat < h.ci_high);
    CHECK(h.ci_high - h.alpha_hat == doctest::Approx(1.96 * h.alpha_hat / std::sqrt(200.0)));
    CHECK(h.threshold > 0.0);
}

TEST_CASE("Hill input errors") {
    CHECK(throws_code([] { hill_estimator(std::vector<double>(100, 3.0), 10); }, ErrorCode::InsufficientData));
    const bool small_k = throws_code([] { hill_estimator(pareto(2.0, 100, 1), 4); }, ErrorCode::InvalidArgument) ||
                         throws_code([] { hill_estimator(pareto(2.0, 100, 1), 4); }, ErrorCode::InsufficientData);
    CHECK(small_k);
    CHECK(throws_code([] { hill_estimator(pareto(2.0, 10, 1), 10); }, ErrorCode::InsufficientData));
}

TEST_CASE("default k") {
    CHECK(default_hill_k(1000000) == static_cast<long>(std::floor(1.5 * std::pow(1e6, 0.55))));
    CHECK(default_hill_k(100000) == static_cast<long>(std::floor(1.5 * std::pow(1e5, 0.55))));
}

TEST_CASE("light tails drift along the Hill curve") {
    CounterStream s = CounterStream::derive(5, 0);
    std::vector<double> x(100000);
    for (double& v : x) v = -std::log(1.0 - s.uniform());
    const auto curve = hill_curve(x, 20);
    REQUIRE(curve.size() >= 10);
    for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].first > curve[i - 1].first);
    CHECK(curve.front().second > 1.5 * curve.back().second);
}

TEST_CASE("verdict rule") {
    HillEstimate h;
    h.alpha_hat = 2.0;
    h.k = 400;
    // half width 1.96 * 2 / 20 = 0.196, plus 15% of theory
    CHECK(tail_verdict(h, 2.3) == TailVerdict::Consistent);
    CHECK(tail_verdict(h, 1.6) == TailVerdict::Consistent);
    CHECK(tail_verdict(h, 3.0) == TailVerdict::Inconsistent);
    CHECK(tail_verdict(h, std::nullopt) == TailVerdict::NoTheory);
}

TEST_CASE("sample diagnostics on a symmetric Pareto") {
    const std::vector<double> x = pareto(2.5, 200000, 9, true);
    const auto diags = diagnose_samples(batch_of(x), 1, nullptr);
    REQUIRE(diags.size() == 1);
    const ComponentTailDiagnostics& d = diags[0];
    const double k = double(d.hill.k);
    CHECK(std::abs(d.p_hat - 0.5) <= 3.0 * std::sqrt(0.25 / k));
    CHECK(std::abs(d.survival_slope + d.hill.alpha_hat) <= 0.25 * d.hill.alpha_hat);
    CHECK(d.survival_points.size() == 30);
    CHECK(d.verdict == TailVerdict::NoTheory);
    CHECK(d.hill_curve.size() >= 10);
    const auto again = diagnose_samples(batch_of(x), 1, nullptr);
    CHECK(again[0].hill.alpha_hat == d.hill.alpha_hat);

    std::ostringstream hc, sv;
    write_hill_curve_csv(diags, hc);
    write_survival_csv(diags, sv);
    CHECK(hc.str().rfind("k,alpha_hat,component\n", 0) == 0);
    CHECK(sv.str().rfind("log_x,log_sf,component\n", 0) == 0);
}

TEST_CASE("simulated diagnostics are symmetric and reproducible") {
    SimConfig sim;
    sim.seed = 2;
    sim.burn_in = 2000;
    sim.n_samples = 200000;
    sim.replicas = 200;
    const auto a = component_tail_report(fixture("5.3").spec, sim, nullptr);
    const auto b = component_tail_report(fixture("5.3").spec, sim, nullptr);
    REQUIRE(a.size() == 2);
    for (int c = 0; c < 2; ++c) {
        CHECK(a[c].hill.alpha_hat == b[c].hill.alpha_hat);
        CHECK(std::abs(a[c].p_hat - 0.5) <= 3.0 * std::sqrt(0.25 / double(a[c].hill.k)));
    }
}

TEST_CASE("angular histogram") {
    SUBCASE("isotropic Gaussian is flat") {
        CounterStream s = CounterStream::derive(3, 0);
        RowMatrix x(200000, 2);
        for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = s.normal();
        const AngularHistogram h = angular_histogram(x, 0.9);
        CHECK(h.mass.size() == 36);
        CHECK(std::accumulate(h.mass.begin(), h.mass.end(), 0.0) == doctest::Approx(1.0));
        for (double m : h.mass) CHECK(std::abs(m - 1.0 / 36.0) < 4.0 * std::sqrt((1.0 / 36.0) / double(h.exceedances)));
    }
    SUBCASE("heavier axis dominates") {
        SimConfig sim;
        sim.seed = 4;
        sim.burn_in = 2000;
        sim.n_samples = 200000;
        sim.replicas = 200;
        const SimBatch b = simulate_ensemble(make_spec(2, 1, 1, {mat2(0.6, 0, 0, 1.2)}), sim);
        const AngularHistogram h = angular_histogram(b.samples, 0.995);
        const double vertical = h.mass[8] + h.mass[9] + h.mass[26] + h.mass[27];
        const double horizontal = h.mass[35] + h.mass[0] + h.mass[17] + h.mass[18];
        CHECK(vertical > 0.5);
        CHECK(vertical > 5.0 * horizontal);
    }
    SUBCASE("higher dimension uses faces and sums to one") {
        SimConfig sim;
        sim.seed = 5;
        sim.burn_in = 500;
        sim.n_samples = 20000;
        sim.replicas = 20;
        const SimBatch b = simulate_ensemble(fixture("7.5").spec, sim);
        const AngularHistogram h = angular_histogram(b.samples, 0.95);
        CHECK(h.mass.size() == 8);
        CHECK(std::accumulate(h.mass.begin(), h.mass.end(), 0.0) == doctest::Approx(1.0));
    }
    SUBCASE("too few exceedances") {
        RowMatrix x = RowMatrix::Ones(1000, 2);
        x(0, 0) = 2.0;
        CHECK(throws_code([&] { angular_histogram(x, 0.9); }, ErrorCode::InsufficientData));
    }
}
