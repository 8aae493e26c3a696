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

#include <string>
#include <string_view>
#include <vector>

#include "bekktail/model.hpp"

namespace bekk {

enum class StructureKind { AlreadyDiagonal, SimDiagonalizable, SimTriangularizable2D, General };

std::string_view to_string(StructureKind kind) noexcept;

/// A similarity P such that P A_j P^{-1} is diagonal (or upper triangular)
/// for every coefficient A_j of a lag-one model.
///
/// Columns of `P_inv` are unit-norm eigenvectors with their first nonzero
/// component positive. `transformed` holds the cleaned matrices (the
/// off-pattern entries set to zero) and `residual` the largest norm of what
/// was discarded, so `residual <= tol` is the honest reconstruction bound.
struct StructureDecomposition {
    StructureKind kind = StructureKind::General;
    Matrix P;
    Matrix P_inv;
    std::vector<Matrix> transformed;
    double residual = 0.0;
    double tol = 0.0;
    std::string note;
};

/// 1e-8 * (1 + max_j ||A_j||), operator 2-norm.
double structure_tolerance(const std::vector<Matrix>& mats);

double operator_norm(const Matrix& m);

bool check_commuting(const std::vector<Matrix>& mats);

/// Throws ComplexEigenvalues, NotDiagonalizable or
/// NotSimultaneouslyDiagonalizable.
StructureDecomposition simultaneous_diagonalize(const std::vector<Matrix>& mats);

/// d = 2 only. Throws NoCommonRealEigenvector when the collection has no
/// shared real eigen-direction.
StructureDecomposition simultaneous_triangularize_2d(const std::vector<Matrix>& mats);

double spectral_radius(const Matrix& m);

/// Full classification of a lag-one coefficient collection: diagonal, then
/// simultaneous diagonalization, then 2-d triangularization, else General.
StructureDecomposition classify_structure(const std::vector<Matrix>& mats);

}  // namespace bekk
