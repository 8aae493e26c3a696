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


#include "bekktail/tail_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bekktail/parallel.hpp"
#include "bekktail/simulate.hpp"
#include "bekktail/special.hpp"

namespace bekk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTieTol = 1e-6;
constexpr double kMinRelTol = 1e-9;
constexpr std::size_t kChunk = 64;

// Marks distinct purposes of the same user seed.
constexpr std::uint64_t kInitTag = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStepTag = 0xC2B2AE3D27D4EB4FULL;
constexpr std::uint64_t kResampleTag = 0x165667B19E3779F9ULL;
constexpr std::uint64_t kFreshTag = 0x27D4EB2F165667C5ULL;
constexpr std::uint64_t kForwardTag = 0x85EBCA77C2B2AE63ULL;

std::uint64_t tagged(std::uint64_t seed, std::uint64_t tag) noexcept { return mix64(seed ^ tag); }

bool same_alpha(double a, double b) noexcept {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::fabs(a - b) <= kMinRelTol * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

struct MinRule {
    ComponentTail tail;
    std::vector<int> minimizers;
};

// Minimum over the transformed coordinates that load on X_i.
MinRule minimum_rule(const StructureDecomposition& dec, int i, const std::vector<double>& alpha_y,
                     const std::vector<std::string>& row_diag) {
    MinRule out;
    const int d = static_cast<int>(alpha_y.size());
    for (int j = 0; j < d; ++j)
        if (std::fabs(dec.P_inv(i, j)) > dec.tol) out.tail.relevant_set.push_back(j);
    if (out.tail.relevant_set.empty()) {
        out.tail.diagnostic = "component has no loading on any transformed coordinate";
        return out;
    }
    for (int j : out.tail.relevant_set) {
        if (std::isnan(alpha_y[static_cast<std::size_t>(j)])) {
            out.tail.diagnostic = "transformed coordinate " + std::to_string(j + 1) + ": " +
                                  row_diag[static_cast<std::size_t>(j)];
            return out;
        }
    }
    double best = kInf;
    for (int j : out.tail.relevant_set) best = std::min(best, alpha_y[static_cast<std::size_t>(j)]);
    if (std::isinf(best)) {
        out.tail.diagnostic = "no transformed coordinate with an index of at most 25";
        return out;
    }
    for (int j : out.tail.relevant_set)
        if (same_alpha(alpha_y[static_cast<std::size_t>(j)], best)) out.minimizers.push_back(j);
    out.tail.alpha = best;
    return out;
}

double vec_norm(const double* v, int n) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += v[k] * v[k];
    return std::sqrt(s);
}

}  // namespace

// ---------------------------------------------------------------------------

double log_gaussian_abs_moment(double alpha, double sigma) {
    if (!(alpha > -1.0)) throw Error(ErrorCode::InvalidArgument, "moment order must exceed -1");
    if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be nonnegative");
    if (alpha == 0.0) return 0.0;
    if (sigma == 0.0) return -kInf;
    return alpha * std::log(sigma) + 0.5 * alpha * kLog2 + std::lgamma(0.5 * (alpha + 1.0)) - 0.5 * kLogPi;
}

double gaussian_abs_moment(double alpha, double sigma) { return std::exp(log_gaussian_abs_moment(alpha, sigma)); }

double moment_log_derivative(double alpha, double sigma) {
    if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
    return std::log(sigma) + 0.5 * (kLog2 + digamma(0.5 * (alpha + 1.0)));
}

double tail_sigma_boundary() noexcept { return std::exp(-kMeanLogAbsNormal); }

double solve_component_tail_index(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw Error(ErrorCode::NoRoot, "no positive root: scale must be positive and finite");
    if (std::log(sigma) + kMeanLogAbsNormal >= 0.0)
        throw Error(ErrorCode::NoRoot, "no positive root: scale at or beyond the stationarity boundary");
    auto f = [sigma](double a) { return log_gaussian_abs_moment(a, sigma); };
    if (f(kAlphaMax) < 0.0) throw Error(ErrorCode::NoRoot, "root exceeds the search limit 25");
    // f is strictly convex with f(0) = 0 and f'(0) < 0, so f < 0 on (0, root).
    double lo = 0.0, hi = kAlphaMax;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm < 0.0) lo = mid;
        else hi = mid;
        if (std::fabs(fm) < 1e-14) {
            lo = hi = mid;
            break;
        }
    }
    double a = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        const double fa = f(a);
        if (std::fabs(fa) < 1e-15) break;
        const double next = a - fa / moment_log_derivative(a, sigma);
        if (!(next > 0.0)) break;
        if (std::fabs(f(next)) >= std::fabs(fa)) break;
        a = next;
    }
    return a;
}

double component_tail_index_or_inf(double sigma) {
    if (sigma == 0.0) return kInf;
    if (sigma > 0.0 && std::log(sigma) + kMeanLogAbsNormal < 0.0 && log_gaussian_abs_moment(kAlphaMax, sigma) < 0.0)
        return kInf;
    return solve_component_tail_index(sigma);
}

std::string_view to_string(TailMethod m) noexcept {
    switch (m) {
        case TailMethod::SimDiag: return "SimDiag";
        case TailMethod::SimDiagRepeated: return "SimDiagRepeated";
        case TailMethod::Triangular2D: return "Triangular2D";
        case TailMethod::SpectralMC: return "SpectralMC";
        case TailMethod::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

std::vector<double> transformed_sigmas(const StructureDecomposition& dec) {
    if (dec.transformed.empty()) return {};
    const auto d = static_cast<int>(dec.transformed.front().rows());
    std::vector<double> out(static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k < d; ++k) {
        double s2 = 0.0;
        for (const Matrix& t : dec.transformed) s2 += t(k, k) * t(k, k);
        out[static_cast<std::size_t>(k)] = std::sqrt(s2);
    }
    return out;
}

namespace {

void solve_rows(const std::vector<double>& sigma, std::vector<double>& alpha_y, std::vector<std::string>& diag) {
    alpha_y.assign(sigma.size(), kNaN);
    diag.assign(sigma.size(), std::string());
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        if (sigma[k] == 0.0) diag[k] = "zero random coefficients (light tail)";
        try {
            alpha_y[k] = component_tail_index_or_inf(sigma[k]);
            if (std::isinf(alpha_y[k]) && sigma[k] > 0.0) diag[k] = "index above 25";
        } catch (const Error& e) {
            diag[k] = std::string(to_string(e.code())) + ": " + e.what();
        }
    }
}

}  // namespace

TailReport tail_indexes_simdiag(const ModelSpec& spec, const StructureDecomposition& dec) {
    if (dec.kind != StructureKind::AlreadyDiagonal && dec.kind != StructureKind::SimDiagonalizable)
        throw Error(ErrorCode::InvalidArgument, "decomposition is not diagonal");
    if (spec.q != 1) throw Error(ErrorCode::InvalidArgument, "closed-form tail indexes need q = 1");
    TailReport rep;
    rep.sigma = transformed_sigmas(dec);
    std::vector<std::string> row_diag;
    solve_rows(rep.sigma, rep.transformed_alpha, row_diag);

    for (int i = 0; i < spec.d; ++i) {
        MinRule mr = minimum_rule(dec, i, rep.transformed_alpha, row_diag);
        ComponentTail& ct = mr.tail;
        if (!ct.alpha) {
            ct.method = TailMethod::Undetermined;
        } else if (mr.minimizers.size() == 1) {
            ct.method = TailMethod::SimDiag;
        } else {
            bool common = spec.l == 1;
            if (common) {
                const double ref = dec.transformed.front()(mr.minimizers.front(), mr.minimizers.front());
                for (int j : mr.minimizers)
                    common = common && std::fabs(dec.transformed.front()(j, j) - ref) <= dec.tol;
            }
            if (common) {
                ct.method = TailMethod::SimDiagRepeated;
            } else {
                ct.method = TailMethod::Undetermined;
                ct.alpha.reset();
                ct.diagnostic = "minimal index attained by several transformed coordinates without a common eigenvalue";
            }
        }
        rep.per_component.push_back(std::move(ct));
    }
    return rep;
}

TailReport tail_indexes_triangular(const ModelSpec& spec, const StructureDecomposition& dec) {
    if (dec.kind != StructureKind::SimTriangularizable2D || spec.d != 2)
        throw Error(ErrorCode::InvalidArgument, "decomposition is not a 2-d triangularization");
    if (spec.q != 1) throw Error(ErrorCode::InvalidArgument, "closed-form tail indexes need q = 1");
    TailReport rep;
    rep.sigma = transformed_sigmas(dec);
    const double s1 = rep.sigma[0], s2 = rep.sigma[1];
    if (std::fabs(s1 - s2) <= kTieTol * std::max(s1, s2))
        throw Error(ErrorCode::TieUndetermined,
                    "diagonal scales coincide (" + std::to_string(s1) + "); equal indexes are not resolved");
    const double a1 = component_tail_index_or_inf(s1);
    const double a2 = component_tail_index_or_inf(s2);
    rep.transformed_alpha = {std::min(a1, a2), a2};
    const std::vector<std::string> row_diag(2);

    for (int i = 0; i < 2; ++i) {
        MinRule mr = minimum_rule(dec, i, rep.transformed_alpha, row_diag);
        ComponentTail& ct = mr.tail;
        ct.method = ct.alpha ? TailMethod::Triangular2D : TailMethod::Undetermined;
        if (ct.alpha && a2 < a1 && ct.relevant_set.size() == 2) {
            ct.alpha.reset();
            ct.method = TailMethod::Undetermined;
            ct.diagnostic = "dependent equal-index Y components";
        }
        rep.per_component.push_back(std::move(ct));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Spectral functional
// ---------------------------------------------------------------------------

double spectral_functional(const ModelSpec& spec, double alpha, int n_horizon, int particles, std::uint64_t seed,
                           double* min_ess) {
    if (n_horizon < 1 || particles < 2)
        throw Error(ErrorCode::InvalidArgument, "spectral functional needs n >= 1 and at least 2 particles");
    const CompanionTemplate tmpl = build_companion_template(spec);
    const int dim = tmpl.dim, d = tmpl.d;
    const std::size_t n_slots = tmpl.random_slots.size();
    const auto N = static_cast<std::size_t>(particles);
    const std::size_t n_chunks = (N + kChunk - 1) / kChunk;

    std::vector<double> x(N * static_cast<std::size_t>(dim)), y(x.size()), logw(N);
    {
        CounterStream init(tagged(seed, kInitTag));
        for (std::size_t p = 0; p < N; ++p) {
            double* xp = x.data() + p * static_cast<std::size_t>(dim);
            double nrm = 0.0;
            while (nrm < 1e-12) {
                for (int k = 0; k < dim; ++k) xp[k] = init.normal();
                nrm = vec_norm(xp, dim);
            }
            for (int k = 0; k < dim; ++k) xp[k] /= nrm;
        }
    }
    std::vector<double> w(N);
    std::vector<std::size_t> idx(N);
    double log_acc = 0.0, ess_min = static_cast<double>(N);
    const std::uint64_t step_key = tagged(seed, kStepTag);

    for (int t = 1; t <= n_horizon; ++t) {
        const std::uint64_t t_key = mix64(step_key + static_cast<std::uint64_t>(t));
        parallel_for(n_chunks, [&](std::size_t c) {
            CounterStream stream = CounterStream::derive(t_key, c);
            std::vector<double> m(n_slots);
            const std::size_t end = std::min(N, (c + 1) * kChunk);
            for (std::size_t p = c * kChunk; p < end; ++p) {
                const double* xp = x.data() + p * static_cast<std::size_t>(dim);
                double* yp = y.data() + p * static_cast<std::size_t>(dim);
                for (double& z : m) z = stream.normal();
                for (int r = 0; r < d; ++r) yp[r] = 0.0;
                for (std::size_t s = 0; s < n_slots; ++s) {
                    const Matrix& a = tmpl.slot_matrices[s];
                    const double* xb = xp + tmpl.random_slots[s].col_offset;
                    for (int r = 0; r < d; ++r) {
                        double acc = 0.0;
                        for (int k = 0; k < d; ++k) acc += a(r, k) * xb[k];
                        yp[r] += m[s] * acc;
                    }
                }
                for (int k = d; k < dim; ++k) yp[k] = xp[k - d];
                const double nrm = vec_norm(yp, dim);
                logw[p] = nrm > 0.0 ? alpha * std::log(nrm) : -kInf;
                if (nrm > 0.0)
                    for (int k = 0; k < dim; ++k) yp[k] /= nrm;
            }
        });
        const double top = *std::max_element(logw.begin(), logw.end());
        if (!std::isfinite(top)) {
            if (min_ess) *min_ess = 0.0;
            return -kInf;
        }
        double sw = 0.0, sw2 = 0.0;
        for (std::size_t p = 0; p < N; ++p) {
            w[p] = std::exp(logw[p] - top);
            sw += w[p];
            sw2 += w[p] * w[p];
        }
        log_acc += top + std::log(sw / static_cast<double>(N));
        ess_min = std::min(ess_min, sw * sw / sw2);

        // Systematic resampling.
        CounterStream rs(mix64(tagged(seed, kResampleTag) + static_cast<std::uint64_t>(t)));
        const double step = sw / static_cast<double>(N);
        double u = rs.uniform() * step, cum = w[0];
        std::size_t j = 0;
        for (std::size_t p = 0; p < N; ++p) {
            while (u > cum && j + 1 < N) cum += w[++j];
            idx[p] = j;
            u += step;
        }
        for (std::size_t p = 0; p < N; ++p)
            std::copy_n(y.data() + idx[p] * static_cast<std::size_t>(dim), dim,
                        x.data() + p * static_cast<std::size_t>(dim));
    }
    if (min_ess) *min_ess = ess_min;
    return log_acc / n_horizon;
}

namespace {

struct RootResult {
    double alpha = 0.0;
    double min_ess = 0.0;
};

RootResult spectral_root(const ModelSpec& spec, int n, int particles, std::uint64_t seed, double growth) {
    auto lambda = [&](double a, double* ess = nullptr) { return spectral_functional(spec, a, n, particles, seed, ess); };
    double lo = 0.1;
    while (lambda(lo) >= 0.0) {
        lo *= 0.5;
        if (lo < 1e-3) throw Error(ErrorCode::NoSignChange, "spectral functional is not negative near zero");
    }
    double hi = lo;
    for (;;) {
        const double next = std::min(hi * growth, kAlphaMax);
        if (lambda(next) > 0.0) {
            hi = next;
            break;
        }
        lo = next;
        hi = next;
        if (next >= kAlphaMax)
            throw Error(ErrorCode::NoSignChange, "no sign change of the spectral functional on (0, 25]");
    }
    while (hi - lo > 1e-4 * (1.0 + lo)) {
        const double mid = 0.5 * (lo + hi);
        if (lambda(mid) < 0.0) lo = mid;
        else hi = mid;
    }
    RootResult r;
    r.alpha = 0.5 * (lo + hi);
    lambda(r.alpha, &r.min_ess);
    return r;
}

}  // namespace

SpectralTailEstimate solve_spectral_tail_index(const ModelSpec& spec, int n_horizon, int particles,
                                               std::uint64_t seed) {
    if (n_horizon < 4) throw Error(ErrorCode::InvalidArgument, "n_horizon must be at least 4");
    SpectralTailEstimate est;
    est.horizons = {n_horizon / 4, n_horizon / 2, n_horizon};
    est.particles = particles;
    double growth = 2.0;
    RootResult last;
    for (int attempt = 0; attempt < 2; ++attempt) {
        est.horizon_roots.clear();
        est.min_ess = kInf;
        for (int n : est.horizons) {
            last = spectral_root(spec, n, est.particles, seed, growth);
            est.horizon_roots.push_back(last.alpha);
            est.min_ess = std::min(est.min_ess, last.min_ess);
        }
        if (est.min_ess >= 100.0) break;
        if (attempt == 0) {
            growth = 1.0 + 0.5 * (growth - 1.0);
            est.particles *= 4;
        }
    }
    est.alpha = est.horizon_roots.back();
    est.low_precision = est.min_ess < 100.0;
    return est;
}

// ---------------------------------------------------------------------------
// Goldie and forward constants
// ---------------------------------------------------------------------------

double gamma_variate(double shape, CounterStream& stream) {
    if (!(shape > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma shape must be positive");
    if (shape < 1.0) {
        const double g = gamma_variate(shape + 1.0, stream);
        return g * std::pow(stream.uniform(), 1.0 / shape);
    }
    const double dd = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * dd);
    for (;;) {
        const double z = stream.normal();
        double v = 1.0 + c * z;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = stream.uniform();
        if (std::log(u) < 0.5 * z * z + dd - dd * v + dd * std::log(v)) return dd * v;
    }
}

GoldieEstimate goldie_constant(const ScalarSre& sre, double alpha, long n_mc, std::uint64_t seed,
                               std::optional<double> m_alpha) {
    if (n_mc < 2) throw Error(ErrorCode::InvalidArgument, "n_mc must be at least 2");
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
    if (!(sre.sigma_a >= 0.0) || !(sre.sigma_b >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "scales must be nonnegative");
    GoldieEstimate out;
    out.n_mc = n_mc;
    if (m_alpha) out.m_alpha = *m_alpha;
    else if (sre.sigma_a > 0.0) out.m_alpha = moment_log_derivative(alpha, sre.sigma_a);
    else throw Error(ErrorCode::InvalidArgument, "m_alpha must be given when sigma_a = 0");

    // Stationary draws: one trajectory per replica; stderr from replica means.
    const int replicas = static_cast<int>(std::clamp<long>(n_mc / 10000, 2, 1000));
    RowMatrix xs;
    if (sre.sigma_a > 0.0 && sre.sigma_b > 0.0) {
        ModelSpec s;
        s.d = s.q = s.l = 1;
        s.C = Matrix::Constant(1, 1, sre.sigma_b * sre.sigma_b);
        s.A = {Matrix::Constant(1, 1, sre.sigma_a)};
        SimConfig cfg;
        cfg.seed = seed;
        cfg.burn_in = 1000;
        cfg.n_samples = n_mc;
        cfg.replicas = replicas;
        xs = simulate_ensemble(validate_spec(s), cfg).samples;
    } else {
        xs.resize(n_mc, 1);
        CounterStream st(tagged(seed, kInitTag));
        for (long k = 0; k < n_mc; ++k) xs(k, 0) = sre.sigma_b * st.normal();
    }

    const long base = n_mc / replicas, extra = n_mc % replicas;
    std::vector<double> sums(static_cast<std::size_t>(replicas)), counts(sums.size());
    const std::uint64_t fresh_key = tagged(seed, kFreshTag);
    parallel_for(sums.size(), [&](std::size_t idx) {
        const auto r = static_cast<long>(idx);
        const long first = r * base + std::min(r, extra);
        const long n = base + (r < extra ? 1 : 0);
        CounterStream st = CounterStream::derive(fresh_key, idx);
        double acc = 0.0;
        for (long k = first; k < first + n; ++k) {
            const double ax = sre.sigma_a * st.normal() * xs(k, 0);
            const double b = sre.sigma_b * st.normal();
            acc += std::pow(std::fabs(ax + b), alpha) - std::pow(std::fabs(ax), alpha);
        }
        sums[idx] = acc;
        counts[idx] = static_cast<double>(n);
    });
    const double total = std::accumulate(sums.begin(), sums.end(), 0.0);
    const double mean = total / static_cast<double>(n_mc);
    double ss = 0.0;
    for (std::size_t r = 0; r < sums.size(); ++r) {
        const double dev = sums[r] / counts[r] - mean;
        ss += counts[r] * dev * dev;
    }
    const double var_mean = ss / static_cast<double>(replicas - 1) / static_cast<double>(n_mc);
    const double scale = 1.0 / (2.0 * alpha * out.m_alpha);
    out.value = mean * scale;
    out.stderr_ = std::sqrt(var_mean) * std::fabs(scale);
    out.nonpositive = !(out.value > 0.0);
    return out;
}

namespace {

struct TriangularRows {
    Vector u11, u12, u22;
};

TriangularRows triangular_rows(const StructureDecomposition& dec) {
    const auto l = static_cast<Eigen::Index>(dec.transformed.size());
    if (l == 0 || dec.transformed.front().rows() != 2)
        throw Error(ErrorCode::InvalidArgument, "forward constant needs a 2-d triangular decomposition");
    TriangularRows r{Vector(l), Vector(l), Vector(l)};
    for (Eigen::Index j = 0; j < l; ++j) {
        const Matrix& u = dec.transformed[static_cast<std::size_t>(j)];
        r.u11(j) = u(0, 0);
        r.u12(j) = u(0, 1);
        r.u22(j) = u(1, 1);
    }
    return r;
}

struct SeriesAccumulator {
    std::vector<double> sum, sumsq;
    explicit SeriesAccumulator(int s_max) : sum(static_cast<std::size_t>(s_max), 0.0), sumsq(sum.size(), 0.0) {}
};

void finish_series(const std::vector<SeriesAccumulator>& parts, long n_mc, std::vector<double>& mean,
                   std::vector<double>& se) {
    const std::size_t s_max = parts.front().sum.size();
    mean.assign(s_max, 0.0);
    se.assign(s_max, 0.0);
    for (std::size_t s = 0; s < s_max; ++s) {
        double a = 0.0, b = 0.0;
        for (const SeriesAccumulator& p : parts) {
            a += p.sum[s];
            b += p.sumsq[s];
        }
        const double n = static_cast<double>(n_mc);
        mean[s] = a / n;
        se[s] = std::sqrt(std::max(0.0, b / n - mean[s] * mean[s]) / (n - 1.0));
    }
}

}  // namespace

std::vector<double> forward_series_plain(const StructureDecomposition& dec, double alpha2, int s_max, long n_mc,
                                         std::uint64_t seed, std::vector<double>* stderr_out) {
    if (s_max < 1 || n_mc < 2) throw Error(ErrorCode::InvalidArgument, "s_max >= 1 and n_mc >= 2 required");
    const TriangularRows rows = triangular_rows(dec);
    const auto l = rows.u11.size();
    const std::size_t n_chunks = static_cast<std::size_t>((n_mc + 4095) / 4096);
    std::vector<SeriesAccumulator> parts(n_chunks, SeriesAccumulator(s_max));
    const std::uint64_t key = tagged(seed, kForwardTag) + 1;
    parallel_for(n_chunks, [&](std::size_t c) {
        CounterStream st = CounterStream::derive(key, c);
        Vector m(l);
        const long end = std::min<long>(n_mc, static_cast<long>(c + 1) * 4096);
        for (long k = static_cast<long>(c) * 4096; k < end; ++k) {
            double S = 0.0, p1 = 1.0;
            for (int s = 1; s <= s_max; ++s) {
                for (Eigen::Index j = 0; j < l; ++j) m(j) = st.normal();
                // S_{s} = M22 S_{s-1} + (M11 products) M12, all at the new time.
                S = rows.u22.dot(m) * S + p1 * rows.u12.dot(m);
                p1 *= rows.u11.dot(m);
                const double v = std::pow(std::fabs(S), alpha2);
                parts[c].sum[static_cast<std::size_t>(s - 1)] += v;
                parts[c].sumsq[static_cast<std::size_t>(s - 1)] += v * v;
            }
        }
    });
    std::vector<double> mean, se;
    finish_series(parts, n_mc, mean, se);
    if (stderr_out) *stderr_out = se;
    return mean;
}

ForwardConstant forward_constant_triangular(const ModelSpec& spec, const StructureDecomposition& dec, double alpha2,
                                            int s_max, long n_mc, std::uint64_t seed) {
    if (spec.d != 2 || spec.q != 1) throw Error(ErrorCode::InvalidArgument, "forward constant needs d = 2, q = 1");
    if (s_max < 1 || n_mc < 2) throw Error(ErrorCode::InvalidArgument, "s_max >= 1 and n_mc >= 2 required");
    const TriangularRows rows = triangular_rows(dec);
    const double sigma1 = rows.u11.norm(), sigma2 = rows.u22.norm(), sigma12 = rows.u12.norm();
    double alpha1 = 0.0;
    try {
        alpha1 = component_tail_index_or_inf(sigma1);
    } catch (const Error&) {
    }
    if (!(alpha1 > alpha2))
        throw Error(ErrorCode::NotApplicable, "forward constant requires alpha1 > alpha2");
    if (!(sigma2 > 0.0)) throw Error(ErrorCode::NotApplicable, "second diagonal coordinate has no random part");

    ForwardConstant out;
    const double kappa = gaussian_abs_moment(alpha2, sigma1);
    const double m12 = gaussian_abs_moment(alpha2, sigma12);
    if (alpha2 <= 1.0) out.envelope = m12 / (1.0 - kappa);
    else out.envelope = std::pow(std::pow(m12, 1.0 / alpha2) / (1.0 - std::pow(kappa, 1.0 / alpha2)), alpha2);

    if (sigma12 == 0.0) {
        out.w_s.assign(static_cast<std::size_t>(s_max), 0.0);
        out.w_s_stderr.assign(static_cast<std::size_t>(s_max), 0.0);
    } else {
        // Under the tilt, the M22 factor at each time t <= -1 has density
        // proportional to |M22|^alpha2 / Z, with Z = E|M22|^alpha2.
        const double log_z = log_gaussian_abs_moment(alpha2, sigma2);
        const Vector e = rows.u22 / sigma2;
        const auto l = rows.u11.size();
        const double shape = 0.5 * (alpha2 + 1.0);
        const std::size_t n_chunks = static_cast<std::size_t>((n_mc + 4095) / 4096);
        std::vector<SeriesAccumulator> parts(n_chunks, SeriesAccumulator(s_max));
        const std::uint64_t key = tagged(seed, kForwardTag);
        parallel_for(n_chunks, [&](std::size_t c) {
            CounterStream st = CounterStream::derive(key, c);
            Vector m(l);
            const long end = std::min<long>(n_mc, static_cast<long>(c + 1) * 4096);
            for (long k = static_cast<long>(c) * 4096; k < end; ++k) {
                double R = 0.0, p1 = 1.0, den = 1.0;
                for (int i = 1; i <= s_max; ++i) {
                    for (Eigen::Index j = 0; j < l; ++j) m(j) = st.normal();
                    if (i > 1) {
                        const double g2 = 2.0 * gamma_variate(shape, st);
                        const double g = (st.uniform() < 0.5 ? -1.0 : 1.0) * std::sqrt(g2);
                        m += (g - e.dot(m)) * e;
                        den *= rows.u22.dot(m);
                    }
                    R += p1 * rows.u12.dot(m) / den;
                    p1 *= rows.u11.dot(m);
                    const double v = std::exp(alpha2 * std::log(std::fabs(R)) + (i - 1) * log_z);
                    parts[c].sum[static_cast<std::size_t>(i - 1)] += v;
                    parts[c].sumsq[static_cast<std::size_t>(i - 1)] += v * v;
                }
            }
        });
        finish_series(parts, n_mc, out.w_s, out.w_s_stderr);
    }

    // Plateau: five successive relative changes below 1%.
    int run = 0;
    out.plateau_at = 0;
    for (int s = 2; s <= s_max; ++s) {
        const double prev = out.w_s[static_cast<std::size_t>(s - 2)];
        const double cur = out.w_s[static_cast<std::size_t>(s - 1)];
        const double rel = prev != 0.0 ? std::fabs(cur - prev) / std::fabs(prev) : (cur == 0.0 ? 0.0 : kInf);
        if (rel < 0.01) {
            if (++run == 5 && out.plateau_at == 0) out.plateau_at = s - 5;
        } else {
            run = 0;
            out.plateau_at = 0;
        }
    }
    out.plateau = run >= 5;
    if (!out.plateau) out.plateau_at = 0;

    const Matrix pcp = dec.P * spec.C * dec.P.transpose();
    out.c2 = goldie_constant({sigma2, std::sqrt(std::max(0.0, pcp(1, 1)))}, alpha2, n_mc, seed);
    out.c1_tilde = out.c2.value * out.w_s.back();
    return out;
}

}  // namespace bekk
