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

#include "bekktail/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/KroneckerProduct>

#include "bekktail/parallel.hpp"
#include "bekktail/random.hpp"
#include "bekktail/simulate.hpp"
#include "bekktail/special.hpp"

namespace bekk {

namespace {
constexpr int kRenormEvery = 10;
constexpr double kTinyNorm = 1e-300;
}  // namespace

std::string_view to_string(StationarityVerdict v) noexcept {
    switch (v) {
        case StationarityVerdict::Stationary: return "Stationary";
        case StationarityVerdict::NonStationary: return "NonStationary";
        case StationarityVerdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

StationarityVerdict lyapunov_verdict(double gamma_hat, double stderr_) noexcept {
    if (gamma_hat + 2.0 * stderr_ < 0.0) return StationarityVerdict::Stationary;
    if (gamma_hat - 2.0 * stderr_ > 0.0) return StationarityVerdict::NonStationary;
    return StationarityVerdict::Inconclusive;
}

std::vector<double> lyapunov_replica_values(const ModelSpec& spec, int n_horizon, int replicas, std::uint64_t seed) {
    if (n_horizon < 1 || replicas < 1)
        throw Error(ErrorCode::InvalidArgument, "n_horizon and replicas must be positive");
    const CompanionTemplate tmpl = build_companion_template(spec);
    std::vector<double> values(static_cast<std::size_t>(replicas));
    parallel_for(values.size(), [&](std::size_t r) {
        CounterStream stream = CounterStream::derive(seed, r);
        Matrix product = Matrix::Identity(tmpl.dim, tmpl.dim);
        double log_norm = 0.0;
        for (int t = 1; t <= n_horizon; ++t) {
            const Coefficients c = draw_coefficients(tmpl, stream);
            product = (c.M * product).eval();
            if (t % kRenormEvery == 0 || t == n_horizon) {
                const double norm = std::max(operator_norm(product), kTinyNorm);
                log_norm += std::log(norm);
                product /= norm;
            }
        }
        values[r] = log_norm / n_horizon;
    });
    return values;
}

LyapunovReport lyapunov_estimate(const ModelSpec& spec, int n_horizon, int replicas, std::uint64_t seed) {
    const std::vector<double> values = lyapunov_replica_values(spec, n_horizon, replicas, seed);
    LyapunovReport rep;
    rep.n_horizon = n_horizon;
    rep.replicas = replicas;
    const double n = static_cast<double>(values.size());
    rep.gamma_hat = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - rep.gamma_hat) * (v - rep.gamma_hat);
        rep.stderr_ = std::sqrt(ss / (n - 1.0) / n);
    }
    rep.closed_form = lyapunov_closed_form(spec);
    rep.verdict = lyapunov_verdict(rep.gamma_hat, rep.stderr_);
    return rep;
}

std::optional<double> lyapunov_closed_form(const ModelSpec& spec, const StructureDecomposition& dec) {
    if (spec.q != 1 || dec.kind == StructureKind::General) return std::nullopt;
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < spec.d; ++k) {
        double s2 = 0.0;
        for (const Matrix& t : dec.transformed) s2 += t(k, k) * t(k, k);
        const double g = s2 > 0.0 ? 0.5 * std::log(s2) + kMeanLogAbsNormal : -std::numeric_limits<double>::infinity();
        best = std::max(best, g);
    }
    return best;
}

std::optional<double> lyapunov_closed_form(const ModelSpec& spec) {
    if (spec.q != 1) return std::nullopt;
    return lyapunov_closed_form(spec, classify_structure(spec.lag_coefficients(1)));
}

KroneckerCondition kronecker_condition(const ModelSpec& spec) {
    const CompanionTemplate tmpl = build_companion_template(spec);
    Matrix moment = Eigen::kroneckerProduct(tmpl.deterministic_part, tmpl.deterministic_part).eval();
    for (std::size_t s = 0; s < tmpl.random_slots.size(); ++s) {
        const Matrix placed = tmpl.placement(s);
        moment += Eigen::kroneckerProduct(placed, placed).eval();
    }
    KroneckerCondition out;
    out.rho = spectral_radius(moment);
    out.sufficient = out.rho < 1.0;
    return out;
}

double nelson_bound() noexcept { return 2.0 * std::exp(kEulerGamma); }

}  // namespace bekk
