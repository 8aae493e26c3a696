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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bekktail/errors.hpp"

namespace bekk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// BEKK-ARCH(q,0,l) parameterization
///
///   X_t = H_t^{1/2} Z_t,   H_t = C + sum_{i<=q} sum_{j<=l} A_ij X_{t-i} X_{t-i}' A_ij'.
///
/// Coefficients are stored lag-major: `A[(i-1)*l + (j-1)]` holds A_ij.
struct ModelSpec {
    int d = 0;
    int q = 0;
    int l = 0;
    Matrix C;
    std::vector<Matrix> A;

    [[nodiscard]] const Matrix& coef(int lag, int index) const {
        return A[static_cast<std::size_t>((lag - 1) * l + (index - 1))];
    }
    [[nodiscard]] int companion_dim() const noexcept { return d * q; }
    /// Coefficients of one lag, in index order.
    [[nodiscard]] std::vector<Matrix> lag_coefficients(int lag) const;
};

/// One random coefficient of the companion matrix: A_ij occupies the block at
/// block-row 0, block-column (lag-1), scaled by m_{i,j,t}.
struct RandomSlot {
    int lag = 1;
    int index = 1;
    int row_offset = 0;
    int col_offset = 0;
};

/// Companion form V_t = M_t V_{t-1} + Q_t of the BEKK recursion.
struct CompanionTemplate {
    int d = 0;
    int dim = 0;
    Matrix deterministic_part;
    std::vector<RandomSlot> random_slots;  // lag-major, then index
    std::vector<Matrix> slot_matrices;     // A_ij per slot, same order
    Matrix noise_cov;                      // dim x dim, C in the top-left block
    Matrix noise_chol;                     // d x d lower Cholesky factor of C

    /// dim x dim matrix with A_ij placed at its slot and zeros elsewhere.
    [[nodiscard]] Matrix placement(std::size_t slot) const;
    /// deterministic_part + sum_s normals[s] * placement(s).
    [[nodiscard]] Matrix assemble(const std::vector<double>& normals) const;
};

/// Symmetrizes C, checks shapes, positive definiteness (plain Cholesky, no
/// regularization) and that some coefficient is nonzero.
ModelSpec validate_spec(ModelSpec raw);

CompanionTemplate build_companion_template(const ModelSpec& spec);

/// H_t given the stacked state (x_{t-1}', ..., x_{t-q}')'.
Matrix one_step_covariance(const ModelSpec& spec, const Vector& state);

/// Strict parse of the JSON model config; unknown keys are rejected.
/// The result is validated.
ModelSpec parse_model_config(std::string_view json_text);
ModelSpec load_model_config(const std::string& path);
std::string model_config_json(const ModelSpec& spec);

/// 64-bit FNV-1a digest over (d, q, l, C, A) in canonical order, as hex.
std::string spec_hash(const ModelSpec& spec);

}  // namespace bekk
