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

#include "bekktail/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bekktail/random.hpp"

namespace bekk {

namespace {

constexpr std::uint64_t kStructureSeed = 0x5EEDBEEFULL;
constexpr int kMaxRetries = 5;

double max_norm(const std::vector<Matrix>& mats) {
    double n = 0.0;
    for (const Matrix& m : mats) n = std::max(n, operator_norm(m));
    return n;
}

void canonical_sign(Eigen::Ref<Vector> v) {
    v.normalize();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::fabs(v(i)) > 1e-12) {
            if (v(i) < 0.0) v = -v;
            return;
        }
}

double off_diagonal_norm(const Matrix& m) {
    Matrix off = m;
    off.diagonal().setZero();
    return operator_norm(off);
}

bool is_scalar_identity(const Matrix& m, double tol) {
    const double mean = m.diagonal().mean();
    return operator_norm(m - mean * Matrix::Identity(m.rows(), m.cols())) <= tol;
}

/// Orthonormal basis of the (numerical) null space of m.
Matrix null_space(const Matrix& m, double thresh) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
    return svd.matrixV().rightCols(m.cols() - rank);
}

enum class BlockFailure { None, Complex, Defective, NotJoint };

/// Returns a basis V (columns) of R^k diagonalizing every matrix in `mats`,
/// recursing into eigenspaces of a generic combination whenever the
/// combination has repeated eigenvalues.
std::optional<Matrix> diagonalize_block(const std::vector<Matrix>& mats, double tol, CounterStream& rng,
                                        int depth, BlockFailure& why) {
    const Eigen::Index k = mats.front().rows();
    bool all_scalar = true;
    for (const Matrix& m : mats) all_scalar = all_scalar && is_scalar_identity(m, tol);
    if (all_scalar) return Matrix(Matrix::Identity(k, k));
    if (depth > static_cast<int>(k) + 2) {
        why = BlockFailure::NotJoint;
        return std::nullopt;
    }

    for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
        Matrix combo = Matrix::Zero(k, k);
        for (const Matrix& m : mats) combo += rng.normal() * m;
        const double scale = 1.0 + operator_norm(combo);

        Eigen::EigenSolver<Matrix> es(combo, false);
        const Eigen::VectorXcd ev = es.eigenvalues();
        std::vector<double> values;
        bool complex = false;
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            if (std::fabs(ev(i).imag()) > 1e-7 * scale) complex = true;
            values.push_back(ev(i).real());
        }
        if (complex) {
            why = BlockFailure::Complex;
            continue;
        }
        std::sort(values.begin(), values.end());

        // Cluster eigenvalues that agree to ~sqrt(eps); a defective block
        // splits by about that much.
        std::vector<std::pair<double, int>> clusters;
        for (double v : values) {
            if (!clusters.empty() && std::fabs(v - clusters.back().first / clusters.back().second) <= 1e-6 * scale) {
                clusters.back().first += v;
                ++clusters.back().second;
            } else {
                clusters.emplace_back(v, 1);
            }
        }

        Matrix basis(k, 0);
        bool ok = true;
        for (const auto& [sum, count] : clusters) {
            const double lambda = sum / count;
            Matrix w = null_space(combo - lambda * Matrix::Identity(k, k), 1e-7 * scale);
            if (w.cols() < count) {
                why = BlockFailure::Defective;
                ok = false;
                break;
            }
            w = w.leftCols(count).eval();
            if (count > 1) {
                // Restrict every matrix to the eigenspace and diagonalize there.
                std::vector<Matrix> restricted;
                for (const Matrix& m : mats) {
                    const Matrix r = w.transpose() * m * w;
                    if (operator_norm(m * w - w * r) > 1e-6 * (1.0 + operator_norm(m))) {
                        why = BlockFailure::NotJoint;
                        ok = false;
                        break;
                    }
                    restricted.push_back(r);
                }
                if (!ok) break;
                auto inner = diagonalize_block(restricted, tol, rng, depth + 1, why);
                if (!inner) {
                    ok = false;
                    break;
                }
                w = (w * *inner).eval();
            }
            Matrix grown(k, basis.cols() + w.cols());
            grown << basis, w;
            basis = std::move(grown);
        }
        if (!ok) continue;

        Eigen::FullPivLU<Matrix> lu(basis);
        if (!lu.isInvertible()) {
            why = BlockFailure::Defective;
            continue;
        }
        const Matrix inv = lu.inverse();
        bool diagonal = true;
        for (const Matrix& m : mats) diagonal = diagonal && off_diagonal_norm(inv * m * basis) <= tol;
        if (diagonal) return basis;
        why = BlockFailure::NotJoint;
    }
    return std::nullopt;
}

bool has_complex_eigenvalues(const Matrix& m) {
    const double scale = 1.0 + operator_norm(m);
    Eigen::EigenSolver<Matrix> es(m, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (std::fabs(es.eigenvalues()(i).imag()) > 1e-7 * scale) return true;
    return false;
}

bool is_defective(const Matrix& m) {
    std::vector<Matrix> one{m};
    CounterStream rng = CounterStream::derive(kStructureSeed, 1);
    BlockFailure why = BlockFailure::None;
    return !diagonalize_block(one, structure_tolerance(one), rng, 0, why);
}

/// Real eigen-directions of a 2x2 matrix; a discriminant within rounding of
/// zero is treated as an exact double root so that defective matrices give
/// their eigenvector to full precision.
std::vector<Vector> real_eigenvectors_2x2(const Matrix& m) {
    const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    const double half_diff = 0.5 * (a - d);
    const double disc = half_diff * half_diff + b * c;
    const double scale2 = 1.0 + m.squaredNorm();
    std::vector<double> roots;
    if (disc < -1e-14 * scale2) return {};
    if (std::fabs(disc) <= 1e-14 * scale2) {
        roots.push_back(0.5 * (a + d));
    } else {
        const double s = std::sqrt(disc);
        roots.push_back(0.5 * (a + d) + s);
        roots.push_back(0.5 * (a + d) - s);
    }
    std::vector<Vector> out;
    for (double lambda : roots) {
        Matrix shifted = m - lambda * Matrix::Identity(2, 2);
        const Vector r0 = shifted.row(0).transpose();
        const Vector r1 = shifted.row(1).transpose();
        const Vector r = r0.norm() >= r1.norm() ? r0 : r1;
        if (r.norm() <= 1e-14 * std::sqrt(scale2)) {
            // lambda * I: every direction is an eigenvector.
            out.push_back(Vector::Unit(2, 0));
            out.push_back(Vector::Unit(2, 1));
            continue;
        }
        Vector v(2);
        v << -r(1), r(0);
        canonical_sign(v);
        out.push_back(v);
    }
    return out;
}

double cross2(const Vector& x, const Vector& y) { return x(0) * y(1) - x(1) * y(0); }

}  // namespace

std::string_view to_string(StructureKind kind) noexcept {
    switch (kind) {
        case StructureKind::AlreadyDiagonal: return "AlreadyDiagonal";
        case StructureKind::SimDiagonalizable: return "SimDiagonalizable";
        case StructureKind::SimTriangularizable2D: return "SimTriangularizable2D";
        case StructureKind::General: return "General";
    }
    return "General";
}

double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double structure_tolerance(const std::vector<Matrix>& mats) { return 1e-8 * (1.0 + max_norm(mats)); }

bool check_commuting(const std::vector<Matrix>& mats) {
    const double tol = structure_tolerance(mats);
    for (std::size_t i = 0; i < mats.size(); ++i)
        for (std::size_t j = i + 1; j < mats.size(); ++j) {
            const double bound = tol * (1.0 + operator_norm(mats[i]) * operator_norm(mats[j]));
            if (operator_norm(mats[i] * mats[j] - mats[j] * mats[i]) > bound) return false;
        }
    return true;
}

StructureDecomposition simultaneous_diagonalize(const std::vector<Matrix>& mats) {
    if (mats.empty()) throw Error(ErrorCode::InvalidArgument, "empty coefficient collection");
    const double tol = structure_tolerance(mats);
    for (const Matrix& m : mats)
        if (has_complex_eigenvalues(m))
            throw Error(ErrorCode::ComplexEigenvalues, "a coefficient matrix has non-real eigenvalues");
    if (mats.size() >= 2 && !check_commuting(mats))
        throw Error(ErrorCode::NotSimultaneouslyDiagonalizable, "coefficient matrices do not commute");

    CounterStream rng = CounterStream::derive(kStructureSeed, 0);
    BlockFailure why = BlockFailure::None;
    auto basis = diagonalize_block(mats, tol, rng, 0, why);
    if (!basis) {
        for (const Matrix& m : mats)
            if (is_defective(m)) throw Error(ErrorCode::NotDiagonalizable, "a coefficient matrix is defective");
        if (why == BlockFailure::Complex)
            throw Error(ErrorCode::ComplexEigenvalues, "generic combination has non-real eigenvalues");
        throw Error(ErrorCode::NotSimultaneouslyDiagonalizable, "no common eigenbasis found");
    }

    const Eigen::Index d = basis->rows();
    for (Eigen::Index c = 0; c < d; ++c) canonical_sign(basis->col(c));
    Matrix p = basis->inverse();

    // Order eigenvector columns by (D_1, D_2, ...) diagonal values.
    std::vector<Vector> diags;
    for (const Matrix& m : mats) diags.push_back((p * m * *basis).diagonal());
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        for (const Vector& dg : diags) {
            if (std::fabs(dg(x) - dg(y)) > tol) return dg(x) < dg(y);
        }
        return false;
    });
    Matrix p_inv(d, d);
    for (Eigen::Index c = 0; c < d; ++c) p_inv.col(c) = basis->col(order[static_cast<std::size_t>(c)]);
    p = p_inv.inverse();

    StructureDecomposition dec;
    dec.kind = StructureKind::SimDiagonalizable;
    dec.P = p;
    dec.P_inv = p_inv;
    dec.tol = tol;
    for (const Matrix& m : mats) {
        const Matrix t = p * m * p_inv;
        dec.residual = std::max(dec.residual, off_diagonal_norm(t));
        dec.transformed.push_back(Matrix(t.diagonal().asDiagonal()));
    }
    return dec;
}

StructureDecomposition simultaneous_triangularize_2d(const std::vector<Matrix>& mats) {
    if (mats.empty()) throw Error(ErrorCode::InvalidArgument, "empty coefficient collection");
    for (const Matrix& m : mats)
        if (m.rows() != 2 || m.cols() != 2)
            throw Error(ErrorCode::DimensionMismatch, "2-d triangularization requires 2x2 matrices");
    const double tol = structure_tolerance(mats);

    std::vector<Vector> candidates;
    for (const Matrix& m : mats)
        for (Vector& v : real_eigenvectors_2x2(m)) candidates.push_back(std::move(v));
    CounterStream rng = CounterStream::derive(kStructureSeed, 2);
    Matrix combo = Matrix::Zero(2, 2);
    for (const Matrix& m : mats) combo += rng.normal() * m;
    for (Vector& v : real_eigenvectors_2x2(combo)) candidates.push_back(std::move(v));

    for (const Vector& v : candidates) {
        bool invariant = true;
        for (const Matrix& m : mats)
            invariant = invariant && std::fabs(cross2(m * v, v)) <= tol * (1.0 + operator_norm(m));
        if (!invariant) continue;

        Matrix p_inv(2, 2);
        p_inv << v(0), -v(1), v(1), v(0);
        const Matrix p = p_inv.inverse();
        StructureDecomposition dec;
        dec.kind = StructureKind::SimTriangularizable2D;
        dec.P = p;
        dec.P_inv = p_inv;
        dec.tol = tol;
        for (const Matrix& m : mats) {
            Matrix t = p * m * p_inv;
            dec.residual = std::max(dec.residual, std::fabs(t(1, 0)));
            t(1, 0) = 0.0;
            dec.transformed.push_back(t);
        }
        return dec;
    }
    throw Error(ErrorCode::NoCommonRealEigenvector, "coefficient matrices share no real eigenvector");
}

double spectral_radius(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "spectral radius of a non-square matrix");
    if (m.size() == 0) return 0.0;
    Eigen::EigenSolver<Matrix> es(m, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

StructureDecomposition classify_structure(const std::vector<Matrix>& mats) {
    const double tol = structure_tolerance(mats);
    const Eigen::Index d = mats.front().rows();

    bool diagonal = true;
    for (const Matrix& m : mats) diagonal = diagonal && off_diagonal_norm(m) <= tol;
    if (diagonal) {
        StructureDecomposition dec;
        dec.kind = StructureKind::AlreadyDiagonal;
        dec.P = Matrix::Identity(d, d);
        dec.P_inv = Matrix::Identity(d, d);
        dec.tol = tol;
        for (const Matrix& m : mats) {
            dec.residual = std::max(dec.residual, off_diagonal_norm(m));
            dec.transformed.push_back(Matrix(m.diagonal().asDiagonal()));
        }
        return dec;
    }

    std::string why;
    try {
        return simultaneous_diagonalize(mats);
    } catch (const Error& e) {
        why = std::string(to_string(e.code()));
    }
    if (d == 2) {
        try {
            StructureDecomposition dec = simultaneous_triangularize_2d(mats);
            dec.note = "not simultaneously diagonalizable (" + why + ")";
            return dec;
        } catch (const Error& e) {
            why += ", " + std::string(to_string(e.code()));
        }
    }
    StructureDecomposition dec;
    dec.kind = StructureKind::General;
    dec.P = Matrix::Identity(d, d);
    dec.P_inv = Matrix::Identity(d, d);
    dec.tol = tol;
    dec.note = d > 2 ? "no simultaneous diagonalization (" + why + "); triangularization is only attempted for d = 2"
                     : "neither simultaneously diagonalizable nor triangularizable (" + why + ")";
    return dec;
}

}  // namespace bekk
