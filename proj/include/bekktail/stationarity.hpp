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

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "bekktail/model.hpp"
#include "bekktail/structure.hpp"

namespace bekk {

enum class StationarityVerdict { Stationary, NonStationary, Inconclusive };

std::string_view to_string(StationarityVerdict v) noexcept;

struct LyapunovReport {
    double gamma_hat = 0.0;
    double stderr_ = 0.0;
    int n_horizon = 0;
    int replicas = 0;
    std::optional<double> closed_form;
    StationarityVerdict verdict = StationarityVerdict::Inconclusive;
};

/// Stationary iff gamma + 2 se < 0, NonStationary iff gamma - 2 se > 0.
StationarityVerdict lyapunov_verdict(double gamma_hat, double stderr_) noexcept;

/// Monte Carlo top Lyapunov exponent of the companion products. Each replica
/// multiplies n_horizon random companion matrices, dividing out the operator
/// 2-norm every 10 steps and accumulating its log.
LyapunovReport lyapunov_estimate(const ModelSpec& spec, int n_horizon = 2000, int replicas = 200,
                                 std::uint64_t seed = 1);

/// Per-replica values of (1/n) log ||M_n ... M_1||, exposed for diagnostics.
std::vector<double> lyapunov_replica_values(const ModelSpec& spec, int n_horizon, int replicas, std::uint64_t seed);

/// max_k log sigma_k + E log|z| when the lag-one coefficients are
/// diagonal, simultaneously diagonalizable or 2-d triangularizable, where
/// sigma_k^2 = sum_j (T_j)_kk^2 over the transformed matrices.
std::optional<double> lyapunov_closed_form(const ModelSpec& spec, const StructureDecomposition& dec);
std::optional<double> lyapunov_closed_form(const ModelSpec& spec);

struct KroneckerCondition {
    double rho = 0.0;
    bool sufficient = false;
};

/// rho(E[M (x) M]) with E[M (x) M] = Mbar (x) Mbar + sum_s S_s (x) S_s.
KroneckerCondition kronecker_condition(const ModelSpec& spec);

/// 2 exp(Euler gamma) = exp(-psi(1) + log 2), the scalar ARCH(1) threshold on a^2.
double nelson_bound() noexcept;

}  // namespace bekk
