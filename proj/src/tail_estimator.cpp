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


#include "bekktail/tail_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>

namespace bekk {

namespace {

std::vector<double> abs_sorted_desc(std::span<const double> sample) {
    std::vector<double> a(sample.size());
    std::transform(sample.begin(), sample.end(), a.begin(), [](double v) { return std::fabs(v); });
    std::sort(a.begin(), a.end(), std::greater<>());
    return a;
}

HillEstimate hill_from_sorted(const std::vector<double>& desc, long k) {
    const auto n = static_cast<long>(desc.size());
    if (k < 5) throw Error(ErrorCode::InsufficientData, "Hill estimator needs k >= 5");
    if (k >= n) throw Error(ErrorCode::InsufficientData, "Hill estimator needs k < n");
    const double thr = desc[static_cast<std::size_t>(k)];
    if (!(thr > 0.0)) throw Error(ErrorCode::InsufficientData, "fewer than k+1 positive observations");
    const double log_thr = std::log(thr);
    double s = 0.0;
    for (long i = 0; i < k; ++i) s += std::log(desc[static_cast<std::size_t>(i)]) - log_thr;
    if (!(s > 0.0)) throw Error(ErrorCode::InsufficientData, "zero log-spacings above the threshold");
    HillEstimate h;
    h.k = k;
    h.n = n;
    h.threshold = thr;
    h.alpha_hat = static_cast<double>(k) / s;
    const double half = 1.96 * h.alpha_hat / std::sqrt(static_cast<double>(k));
    h.ci_low = h.alpha_hat - half;
    h.ci_high = h.alpha_hat + half;
    return h;
}

std::vector<long> k_grid(long n, int points) {
    const long k_hi = std::max<long>(6, std::min(n - 1, 4 * default_hill_k(n)));
    const long k_lo = std::min<long>(5, k_hi);
    std::vector<long> ks;
    for (int i = 0; i < points; ++i) {
        const double f = points == 1 ? 1.0 : static_cast<double>(i) / (points - 1);
        const long k = std::lround(std::exp(std::log(static_cast<double>(k_lo)) * (1.0 - f) +
                                            std::log(static_cast<double>(k_hi)) * f));
        if (ks.empty() || k > ks.back()) ks.push_back(k);
    }
    return ks;
}

std::vector<std::pair<long, double>> curve_from_sorted(const std::vector<double>& desc, int points) {
    std::vector<std::pair<long, double>> out;
    for (long k : k_grid(static_cast<long>(desc.size()), points)) {
        try {
            out.emplace_back(k, hill_from_sorted(desc, k).alpha_hat);
        } catch (const Error&) {
        }
    }
    return out;
}

}  // namespace

long default_hill_k(long n) noexcept {
    return static_cast<long>(std::floor(1.5 * std::pow(static_cast<double>(n), 0.55)));
}

HillEstimate hill_estimator(std::span<const double> sample, long k) {
    return hill_from_sorted(abs_sorted_desc(sample), k);
}

std::vector<std::pair<long, double>> hill_curve(std::span<const double> sample, int points) {
    return curve_from_sorted(abs_sorted_desc(sample), points);
}

std::string_view to_string(TailVerdict v) noexcept {
    switch (v) {
        case TailVerdict::Consistent: return "Consistent";
        case TailVerdict::Inconsistent: return "Inconsistent";
        case TailVerdict::NoTheory: return "NoTheory";
    }
    return "NoTheory";
}

TailVerdict tail_verdict(const HillEstimate& hill, std::optional<double> theory_alpha, double tol) noexcept {
    if (!theory_alpha) return TailVerdict::NoTheory;
    const double band = 1.96 * hill.alpha_hat / std::sqrt(static_cast<double>(hill.k)) + tol * *theory_alpha;
    return std::fabs(hill.alpha_hat - *theory_alpha) <= band ? TailVerdict::Consistent : TailVerdict::Inconsistent;
}

std::vector<ComponentTailDiagnostics> diagnose_samples(const SimBatch& batch, int components,
                                                       const TailReport* theory) {
    const long n = batch.samples.rows();
    if (components < 1 || components > batch.samples.cols())
        throw Error(ErrorCode::DimensionMismatch, "component count exceeds batch width");
    std::vector<ComponentTailDiagnostics> out;
    for (int c = 0; c < components; ++c) {
        const Vector col = batch.samples.col(c);
        const std::vector<double> desc = abs_sorted_desc(std::span<const double>(col.data(), col.size()));
        ComponentTailDiagnostics dg;
        dg.component = c;
        dg.hill = hill_from_sorted(desc, std::min(default_hill_k(n), n - 1));
        dg.hill_curve = curve_from_sorted(desc, 20);

        long above = 0, pos = 0;
        for (Eigen::Index r = 0; r < col.size(); ++r) {
            if (std::fabs(col(r)) > dg.hill.threshold) {
                ++above;
                if (col(r) > 0.0) ++pos;
            }
        }
        dg.p_hat = above > 0 ? static_cast<double>(pos) / static_cast<double>(above) : 0.5;

        // 30 log-spaced thresholds between the 90% quantile and the 100th largest |x|.
        const double x_lo = desc[static_cast<std::size_t>(std::min<long>(n - 1, n / 10))];
        const double x_hi = desc[static_cast<std::size_t>(std::min<long>(n - 1, 99))];
        if (x_lo > 0.0 && x_hi > x_lo) {
            const std::vector<double> asc(desc.rbegin(), desc.rend());
            for (int i = 0; i < 30; ++i) {
                const double lx = std::log(x_lo) + (std::log(x_hi) - std::log(x_lo)) * i / 29.0;
                const auto cnt = static_cast<long>(asc.end() - std::upper_bound(asc.begin(), asc.end(), std::exp(lx)));
                if (cnt > 0) dg.survival_points.push_back({lx, std::log(static_cast<double>(cnt) / n)});
            }
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            int m = 0;
            for (const SurvivalPoint& p : dg.survival_points) {
                if (p.log_x < std::log(dg.hill.threshold)) continue;
                sx += p.log_x;
                sy += p.log_sf;
                sxx += p.log_x * p.log_x;
                sxy += p.log_x * p.log_sf;
                ++m;
            }
            if (m >= 2 && m * sxx - sx * sx > 0.0) dg.survival_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        }
        if (theory && static_cast<std::size_t>(c) < theory->per_component.size())
            dg.theory_alpha = theory->per_component[static_cast<std::size_t>(c)].alpha;
        dg.verdict = tail_verdict(dg.hill, dg.theory_alpha);
        if (batch.single_path) dg.warning = "single-path draws are dependent; Hill band is optimistic";
        out.push_back(std::move(dg));
    }
    return out;
}

std::vector<ComponentTailDiagnostics> component_tail_report(const ModelSpec& spec, const SimConfig& sim,
                                                            const TailReport* theory) {
    return diagnose_samples(simulate_ensemble(spec, sim), spec.d, theory);
}

AngularHistogram angular_histogram(const RowMatrix& samples, double threshold_quantile) {
    const auto dim = static_cast<int>(samples.cols());
    if (dim < 2) throw Error(ErrorCode::InvalidArgument, "angular histogram needs dimension >= 2");
    if (!(threshold_quantile >= 0.0 && threshold_quantile < 1.0))
        throw Error(ErrorCode::InvalidArgument, "threshold quantile must lie in [0, 1)");
    const Vector norms = samples.rowwise().norm();
    std::vector<double> sorted(norms.data(), norms.data() + norms.size());
    std::sort(sorted.begin(), sorted.end());
    const auto qi = static_cast<std::size_t>(std::floor(threshold_quantile * static_cast<double>(sorted.size())));
    AngularHistogram h;
    h.dim = dim;
    h.threshold = sorted.empty() ? 0.0 : sorted[std::min(qi, sorted.size() - 1)];
    const int bins = dim == 2 ? 36 : 2 * dim;
    h.mass.assign(static_cast<std::size_t>(bins), 0.0);
    for (Eigen::Index r = 0; r < samples.rows(); ++r) {
        if (!(norms(r) > h.threshold)) continue;
        int b = 0;
        if (dim == 2) {
            double ang = std::atan2(samples(r, 1), samples(r, 0));
            if (ang < 0.0) ang += 2.0 * std::numbers::pi;
            b = std::min(35, static_cast<int>(ang / (2.0 * std::numbers::pi) * 36.0));
        } else {
            Eigen::Index k = 0;
            samples.row(r).cwiseAbs().maxCoeff(&k);
            b = 2 * static_cast<int>(k) + (samples(r, k) < 0.0 ? 1 : 0);
        }
        h.mass[static_cast<std::size_t>(b)] += 1.0;
        ++h.exceedances;
    }
    if (h.exceedances < 200)
        throw Error(ErrorCode::InsufficientData,
                    "angular histogram needs at least 200 exceedances, got " + std::to_string(h.exceedances));
    for (double& m : h.mass) m /= static_cast<double>(h.exceedances);
    return h;
}

void write_hill_curve_csv(const std::vector<ComponentTailDiagnostics>& diags, std::ostream& out) {
    out << "k,alpha_hat,component\n";
    const auto old = out.precision(17);
    for (const ComponentTailDiagnostics& d : diags)
        for (const auto& [k, a] : d.hill_curve) out << k << ',' << a << ',' << d.component + 1 << '\n';
    out.precision(old);
}

void write_survival_csv(const std::vector<ComponentTailDiagnostics>& diags, std::ostream& out) {
    out << "log_x,log_sf,component\n";
    const auto old = out.precision(17);
    for (const ComponentTailDiagnostics& d : diags)
        for (const SurvivalPoint& p : d.survival_points)
            out << p.log_x << ',' << p.log_sf << ',' << d.component + 1 << '\n';
    out.precision(old);
}

}  // namespace bekk
