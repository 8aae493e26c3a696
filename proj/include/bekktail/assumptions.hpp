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
#include <string>
#include <string_view>
#include <vector>

#include "bekktail/model.hpp"

namespace bekk {

enum class AssumptionName { IrreducibilityDensity, IrreducibilityNonParallel, ProximalityDensity, DetNondegenerate };
enum class AssumptionStatus { Holds, Fails, Undetermined };

std::string_view to_string(AssumptionName n) noexcept;
std::string_view to_string(AssumptionStatus s) noexcept;

/// Every checker verifies a sufficient condition; `addresses` names the
/// hypothesis it bears on.
struct AssumptionVerdict {
    AssumptionName name = AssumptionName::IrreducibilityDensity;
    AssumptionStatus status = AssumptionStatus::Undetermined;
    std::optional<std::string> witness;
    std::string detail;
    std::string addresses;
};

inline constexpr double kPdTol = 1e-8;

/// Minimizes lambda_min(sum_ij (A_ij x_i)(A_ij x_i)') over the unit sphere of
/// R^{dq} (axis starts plus 200 random starts, projected gradient descent).
AssumptionVerdict check_irreducibility_density(const ModelSpec& spec, std::uint64_t seed = 1);

/// Random trajectories x_n = M_n ... M_1 x of the companion products must
/// each reach a state whose images A_ij x_i span R^d. For d = 2, q = 1,
/// l = 2 that means A1 x_n and A2 x_n nonzero and non-parallel, and the
/// directions where they are parallel are added as starts. Never Fails.
AssumptionVerdict check_nonparallel_trajectory(const ModelSpec& spec, int trials = 100, int horizon = 50,
                                               std::uint64_t seed = 1);

/// Rank of the l x d^2 matrix of vectorized coefficients per lag; Holds iff
/// every lag has rank d^2. For q = 1, l >= 2 a randomized search for a draw
/// with a simple dominant real eigenvalue is reported as extra evidence.
AssumptionVerdict check_proximality_density(const ModelSpec& spec, std::uint64_t seed = 1);

/// det(sum_j m_j A_qj) is a polynomial in m; Holds when it is nonzero at one
/// Gaussian draw or one of 10 fixed rational points.
AssumptionVerdict check_det_nondegenerate(const ModelSpec& spec, std::uint64_t seed = 1);

std::vector<AssumptionVerdict> check_all_assumptions(const ModelSpec& spec, std::uint64_t seed = 1);

}  // namespace bekk
