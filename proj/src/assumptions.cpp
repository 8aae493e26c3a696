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


#include "bekktail/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "bekktail/random.hpp"
#include "bekktail/structure.hpp"

namespace bekk {

namespace {

constexpr std::uint64_t kIrrTag = 0x1A2B3C4D5E6F7081ULL;
constexpr std::uint64_t kParTag = 0x2B3C4D5E6F708192ULL;
constexpr std::uint64_t kProxTag = 0x3C4D5E6F708192A3ULL;
constexpr std::uint64_t kDetTag = 0x4D5E6F708192A3B4ULL;

std::string vec_text(const Vector& v) {
    std::ostringstream os;
    os.precision(6);
    os << '(';
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
    os << ')';
    return os.str();
}

Vector random_unit(CounterStream& st, Eigen::Index n) {
    Vector v(n);
    do {
        for (Eigen::Index i = 0; i < n; ++i) v(i) = st.normal();
    } while (v.norm() < 1e-12);
    return v.normalized();
}

// Columns A_ij x_i of the top block row applied to x.
Matrix loading_matrix(const ModelSpec& spec, const Vector& x) {
    Matrix g(spec.d, spec.q * spec.l);
    for (int i = 0; i < spec.q; ++i)
        for (int j = 0; j < spec.l; ++j)
            g.col(i * spec.l + j) = spec.coef(i + 1, j + 1) * x.segment(i * spec.d, spec.d);
    return g;
}

struct MinEig {
    double value;
    Eigen::VectorXd u;
};

MinEig min_eig(const Matrix& cov) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

double lambda_min_at(const ModelSpec& spec, const Vector& x) {
    const Matrix g = loading_matrix(spec, x);
    return min_eig(g * g.transpose()).value;
}

}  // namespace

std::string_view to_string(AssumptionName n) noexcept {
    switch (n) {
        case AssumptionName::IrreducibilityDensity: return "IrreducibilityDensity";
        case AssumptionName::IrreducibilityNonParallel: return "IrreducibilityNonParallel";
        case AssumptionName::ProximalityDensity: return "ProximalityDensity";
        case AssumptionName::DetNondegenerate: return "DetNondegenerate";
    }
    return "Unknown";
}

std::string_view to_string(AssumptionStatus s) noexcept {
    switch (s) {
        case AssumptionStatus::Holds: return "Holds";
        case AssumptionStatus::Fails: return "Fails";
        case AssumptionStatus::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

AssumptionVerdict check_irreducibility_density(const ModelSpec& spec, std::uint64_t seed) {
    AssumptionVerdict v;
    v.name = AssumptionName::IrreducibilityDensity;
    v.addresses = "irreducibility: positive density of the top block row applied to every x != 0";
    const int n = spec.d * spec.q;
    double scale = 0.0;
    for (const Matrix& a : spec.A) scale += a.squaredNorm();
    const double lip = 2.0 * scale;

    std::vector<Vector> starts;
    for (int k = 0; k < n; ++k) starts.push_back(Vector::Unit(n, k));
    CounterStream st(mix64(seed ^ kIrrTag));
    for (int s = 0; s < 200; ++s) starts.push_back(random_unit(st, n));

    double best = std::numeric_limits<double>::infinity();
    Vector best_x = starts.front();
    for (Vector x : starts) {
        double f = lambda_min_at(spec, x);
        double step = 1.0 / lip;
        for (int it = 0; it < 300 && f > 0.0; ++it) {
            const Matrix g = loading_matrix(spec, x);
            const MinEig me = min_eig(g * g.transpose());
            Vector grad = Vector::Zero(n);
            for (int i = 0; i < spec.q; ++i)
                for (int j = 0; j < spec.l; ++j) {
                    const Matrix& a = spec.coef(i + 1, j + 1);
                    const double c = me.u.dot(g.col(i * spec.l + j));
                    grad.segment(i * spec.d, spec.d) += 2.0 * c * (a.transpose() * me.u);
                }
            grad -= grad.dot(x) * x;
            if (grad.norm() < 1e-15 * lip) break;
            bool improved = false;
            for (int bt = 0; bt < 30; ++bt) {
                const Vector cand = (x - step * grad).normalized();
                const double fc = lambda_min_at(spec, cand);
                if (fc < f) {
                    x = cand;
                    f = fc;
                    step *= 1.5;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!improved) break;
        }
        if (f < best) {
            best = f;
            best_x = x;
        }
    }
    std::ostringstream os;
    os << "min lambda_min over the sphere = " << best << " (scale " << scale << ", pd_tol " << kPdTol << ")";
    if (best > kPdTol * scale) {
        v.status = AssumptionStatus::Holds;
        v.detail = os.str() + "; numerically certified";
    } else if (best < 1e-14 * scale) {
        v.status = AssumptionStatus::Fails;
        v.witness = "x = " + vec_text(best_x);
        v.detail = os.str() + "; covariance singular at the witness";
    } else {
        v.status = AssumptionStatus::Undetermined;
        v.detail = os.str() + "; minimum below pd_tol but not exactly zero";
    }
    return v;
}

AssumptionVerdict check_nonparallel_trajectory(const ModelSpec& spec, int trials, int horizon, std::uint64_t seed) {
    AssumptionVerdict v;
    v.name = AssumptionName::IrreducibilityNonParallel;
    v.addresses = "irreducibility: trajectories escape the states whose images A_ij x_i fail to span R^d";
    v.status = AssumptionStatus::Undetermined;
    const int n = spec.d * spec.q;
    const bool planar = spec.d == 2 && spec.q == 1 && spec.l == 2;
    double scale = 0.0;
    for (const Matrix& a : spec.A) scale = std::max(scale, operator_norm(a));
    if (spec.q * spec.l < spec.d) {
        v.detail = "always parallel: fewer random images than dimensions";
        return v;
    }

    std::vector<Vector> starts;
    std::size_t n_structured = 0;
    if (planar) {
        const Matrix& a1 = spec.A[0];
        const Matrix& a2 = spec.A[1];
        // det[A1 x | A2 x] = x' K x
        const Matrix outer = a1.row(0).transpose() * a2.row(1) - a1.row(1).transpose() * a2.row(0);
        const Matrix K = 0.5 * (outer + outer.transpose());
        if (K.norm() <= 1e-12 * scale * scale) {
            v.detail = "always parallel: det[A1 x | A2 x] vanishes identically";
            return v;
        }
        const double k00 = K(0, 0), k01 = K(0, 1), k11 = K(1, 1);
        const double kt = 1e-14 * K.norm();
        if (std::fabs(k11) > kt) {
            const double disc = k01 * k01 - k00 * k11;
            if (disc >= -kt * K.norm()) {
                const double r = std::sqrt(std::max(0.0, disc));
                for (double t : {(-k01 + r) / k11, (-k01 - r) / k11})
                    starts.push_back(Vector{{1.0, t}}.normalized());
            }
        } else {
            starts.push_back(Vector::Unit(2, 1));
            if (std::fabs(k01) > kt) starts.push_back(Vector{{1.0, -k00 / (2.0 * k01)}}.normalized());
        }
        n_structured = starts.size();
        for (std::size_t s = 0; s < n_structured; ++s) starts.push_back(-starts[s]);
        n_structured *= 2;
    } else {
        for (int k = 0; k < n; ++k) starts.push_back(Vector::Unit(n, k));
        n_structured = starts.size();
    }
    CounterStream init(mix64(seed ^ kParTag));
    for (int t = 0; t < trials; ++t) starts.push_back(random_unit(init, n));

    // Two images: both nonzero and |det| > tol |y1| |y2|. More images: the
    // smallest singular value of [A_ij x_i] relative to the largest.
    auto spans = [&](const Vector& x) {
        const Matrix g = loading_matrix(spec, x);
        if (planar) {
            const double n1 = g.col(0).norm(), n2 = g.col(1).norm();
            if (n1 <= 1e-12 * scale || n2 <= 1e-12 * scale) return false;
            return std::fabs(g(0, 0) * g(1, 1) - g(1, 0) * g(0, 1)) > 1e-10 * n1 * n2;
        }
        Eigen::JacobiSVD<Matrix> svd(g);
        const auto sv = svd.singularValues();
        return sv(0) > 1e-12 * scale && sv(sv.size() - 1) > 1e-10 * sv(0);
    };
    const CompanionTemplate tmpl = build_companion_template(spec);
    int worst_escape = 0;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        CounterStream st = CounterStream::derive(mix64(seed ^ kParTag) + 1, s);
        Vector x = starts[s];
        int escaped = -1;
        for (int step = 0; step <= horizon; ++step) {
            if (spans(x)) {
                escaped = step;
                break;
            }
            std::vector<double> normals(tmpl.random_slots.size());
            for (double& z : normals) z = st.normal();
            x = tmpl.assemble(normals) * x;
            const double nx = x.norm();
            if (!(nx > 0.0)) break;
            x /= nx;
        }
        if (escaped < 0) {
            v.detail = "start " + vec_text(starts[s]) + " did not escape within " + std::to_string(horizon) + " steps";
            return v;
        }
        worst_escape = std::max(worst_escape, escaped);
    }
    v.status = AssumptionStatus::Holds;
    v.detail = std::to_string(starts.size()) + " starts (" + std::to_string(n_structured) +
               " structured) all reach spanning images; slowest after " + std::to_string(worst_escape) + " step(s)";
    return v;
}

AssumptionVerdict check_proximality_density(const ModelSpec& spec, std::uint64_t seed) {
    AssumptionVerdict v;
    v.name = AssumptionName::ProximalityDensity;
    v.addresses = "proximality: full Lebesgue density of each lag's random matrix";
    const int d2 = spec.d * spec.d;
    std::ostringstream os;
    int worst_rank = d2, worst_lag = 0;
    for (int i = 1; i <= spec.q; ++i) {
        Matrix vecs(spec.l, d2);
        for (int j = 1; j <= spec.l; ++j) vecs.row(j - 1) = spec.coef(i, j).reshaped().transpose();
        Eigen::JacobiSVD<Matrix> svd(vecs);
        const auto sv = svd.singularValues();
        const double top = sv.size() ? sv(0) : 0.0;
        int rank = 0;
        for (Eigen::Index k = 0; k < sv.size(); ++k)
            if (sv(k) > 1e-10 * std::max(top, 1e-300)) ++rank;
        if (rank < worst_rank) {
            worst_rank = rank;
            worst_lag = i;
        }
    }
    if (worst_rank == d2) {
        v.status = AssumptionStatus::Holds;
        os << "every lag spans all " << d2 << " matrix directions";
    } else {
        v.status = AssumptionStatus::Fails;
        v.witness = "rank " + std::to_string(worst_rank) + " of " + std::to_string(d2);
        os << "lag " << worst_lag << " coefficients have rank " << worst_rank << " of " << d2;
    }
    if (spec.q == 1 && spec.l >= 2) {
        CounterStream st(mix64(seed ^ kProxTag));
        double best_gap = -1.0;
        for (int draw = 0; draw < 1000; ++draw) {
            Matrix m = Matrix::Zero(spec.d, spec.d);
            for (const Matrix& a : spec.A) m += st.normal() * a;
            Eigen::EigenSolver<Matrix> es(m, false);
            std::vector<std::complex<double>> ev(es.eigenvalues().data(),
                                                 es.eigenvalues().data() + es.eigenvalues().size());
            std::sort(ev.begin(), ev.end(), [](auto a, auto b) { return std::abs(a) > std::abs(b); });
            const double r1 = std::abs(ev[0]);
            if (!(r1 > 0.0) || std::fabs(ev[0].imag()) > 1e-12 * r1) continue;
            const double gap = ev.size() > 1 ? (r1 - std::abs(ev[1])) / r1 : 1.0;
            best_gap = std::max(best_gap, gap);
        }
        if (best_gap > 1e-8) os << "; proximal draw found, best relative eigen-gap " << best_gap;
        else os << "; no proximal draw in 1000 samples";
    }
    v.detail = os.str();
    return v;
}

AssumptionVerdict check_det_nondegenerate(const ModelSpec& spec, std::uint64_t seed) {
    AssumptionVerdict v;
    v.name = AssumptionName::DetNondegenerate;
    v.addresses = "invertibility: det of the last-lag random matrix is nonzero almost surely";
    const std::vector<Matrix> mats = spec.lag_coefficients(spec.q);
    const double tol = structure_tolerance(mats);
    for (int r = 0; r < spec.d; ++r) {
        bool row_zero = true, col_zero = true;
        for (const Matrix& a : mats) {
            row_zero = row_zero && a.row(r).norm() <= tol;
            col_zero = col_zero && a.col(r).norm() <= tol;
        }
        if (row_zero || col_zero) {
            v.status = AssumptionStatus::Fails;
            v.witness = std::string(row_zero ? "row " : "column ") + std::to_string(r + 1) + " is zero in every A_qj";
            v.detail = "determinant polynomial is identically zero";
            return v;
        }
    }
    std::vector<Vector> points;
    CounterStream st(mix64(seed ^ kDetTag));
    Vector g(spec.l);
    for (int j = 0; j < spec.l; ++j) g(j) = st.normal();
    points.push_back(g);
    for (int k = 0; k < 10; ++k) {
        Vector p(spec.l);
        if (k < spec.l) {
            p = Vector::Unit(spec.l, k);
        } else {
            for (int j = 0; j < spec.l; ++j) p(j) = static_cast<double>(1 + ((k + 3) * (j + 1)) % 7) / (2 + j);
        }
        points.push_back(p);
    }
    double max_norm = 0.0;
    for (const Matrix& a : mats) max_norm = std::max(max_norm, operator_norm(a));
    for (const Vector& p : points) {
        Matrix m = Matrix::Zero(spec.d, spec.d);
        for (int j = 0; j < spec.l; ++j) m += p(j) * mats[static_cast<std::size_t>(j)];
        const double det = m.determinant();
        const double scale = std::pow(p.cwiseAbs().sum() * max_norm, spec.d);
        if (std::fabs(det) > 1e-10 * scale) {
            v.status = AssumptionStatus::Holds;
            std::ostringstream os;
            os << "det = " << det << " at m = " << vec_text(p);
            v.detail = os.str();
            return v;
        }
    }
    v.status = AssumptionStatus::Fails;
    v.witness = "determinant vanished at all 11 evaluation points";
    v.detail = "determinant polynomial appears identically zero";
    return v;
}

std::vector<AssumptionVerdict> check_all_assumptions(const ModelSpec& spec, std::uint64_t seed) {
    return {check_irreducibility_density(spec, seed), check_nonparallel_trajectory(spec, 100, 50, seed),
            check_proximality_density(spec, seed), check_det_nondegenerate(spec, seed)};
}

}  // namespace bekk
