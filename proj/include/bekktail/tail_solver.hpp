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
#include "bekktail/random.hpp"
#include "bekktail/structure.hpp"

namespace bekk {

// ---------------------------------------------------------------------------
// Gaussian moment equation
// ---------------------------------------------------------------------------

/// log E|sigma z|^alpha = alpha log sigma + (alpha/2) log 2 + lgamma((alpha+1)/2) - log(pi)/2.
double log_gaussian_abs_moment(double alpha, double sigma);
double gaussian_abs_moment(double alpha, double sigma);

/// d/dalpha log E|sigma z|^alpha = log sigma + (log 2 + psi((alpha+1)/2)) / 2.
/// At a root of the moment equation this is m_alpha = E|A|^alpha log|A|.
double moment_log_derivative(double alpha, double sigma);

/// exp(-E log|z|) ~ 1.8874: scales at or above it give no positive root.
double tail_sigma_boundary() noexcept;

inline constexpr double kAlphaMax = 25.0;

/// Unique alpha > 0 with E|sigma z|^alpha = 1. Throws NoRoot when sigma is at
/// or beyond the boundary, or the root exceeds kAlphaMax.
double solve_component_tail_index(double sigma);

/// As above, but +infinity for sigma = 0 or a root beyond kAlphaMax (a tail
/// lighter than any resolvable index). Still throws NoRoot at or beyond the
/// boundary.
double component_tail_index_or_inf(double sigma);

// ---------------------------------------------------------------------------
// Structured tail indexes
// ---------------------------------------------------------------------------

enum class TailMethod { SimDiag, SimDiagRepeated, Triangular2D, SpectralMC, Undetermined };

std::string_view to_string(TailMethod m) noexcept;

struct ComponentTail {
    std::optional<double> alpha;
    TailMethod method = TailMethod::Undetermined;
    std::vector<int> relevant_set;  // 0-based transformed-coordinate indices
    std::string diagnostic;
};

struct GoldieEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    double m_alpha = 0.0;
    long n_mc = 0;
    bool nonpositive = false;  // finite-sample artifact; enlarge n_mc
};

struct ForwardConstant {
    std::vector<double> w_s;
    std::vector<double> w_s_stderr;
    GoldieEstimate c2;
    double c1_tilde = 0.0;
    bool plateau = false;
    int plateau_at = 0;        // first s from which 5 successive changes stay below 1%
    double envelope = 0.0;     // geometric upper bound on sup_s w_s
};

struct SpectralTailEstimate {
    double alpha = 0.0;
    std::vector<int> horizons;
    std::vector<double> horizon_roots;
    double min_ess = 0.0;
    int particles = 0;
    bool low_precision = false;
};

struct TailReport {
    std::vector<ComponentTail> per_component;
    std::vector<double> sigma;             // per transformed coordinate
    std::vector<double> transformed_alpha; // alpha^(Y) per transformed coordinate (NaN if none)
    std::optional<GoldieEstimate> c_plus;  // scalar models
    std::optional<ForwardConstant> forward;
    std::optional<SpectralTailEstimate> spectral;
    double balance_p = 0.5;
    double balance_q = 0.5;
    std::vector<std::string> notes;
};

/// Per transformed row k, sigma_k = sqrt(sum_j (T_j)_kk^2).
std::vector<double> transformed_sigmas(const StructureDecomposition& dec);

/// Minimum rule over rows with nonzero P^{-1} entries; repeated minima are
/// resolved only for l = 1 with equal transformed eigenvalues.
TailReport tail_indexes_simdiag(const ModelSpec& spec, const StructureDecomposition& dec);

/// d = 2 triangular route. Throws TieUndetermined when the two diagonal
/// scales agree to 1e-6 (relative) and NoRoot when either has no root.
TailReport tail_indexes_triangular(const ModelSpec& spec, const StructureDecomposition& dec);

// ---------------------------------------------------------------------------
// Monte Carlo routes
// ---------------------------------------------------------------------------

/// Particle estimate of (1/n) log E|M_n...M_1 U|^alpha, U uniform on the
/// sphere, which grows at the same exponential rate as E||M_n...M_1||^alpha.
/// Every step reweights particles by |M x|^alpha, accumulates the log of the
/// mean weight and resamples. `min_ess` receives the smallest effective
/// sample size seen across steps.
double spectral_functional(const ModelSpec& spec, double alpha, int n_horizon, int particles, std::uint64_t seed,
                           double* min_ess = nullptr);

/// Root of alpha -> spectral_functional(alpha) on (0, 25], for horizons
/// n/4, n/2, n; the last one is reported. Throws NoSignChange.
SpectralTailEstimate solve_spectral_tail_index(const ModelSpec& spec, int n_horizon = 200, int particles = 2000,
                                               std::uint64_t seed = 1);

/// A one-dimensional SRE X = A X + B with A = sigma_a m, B = sigma_b b.
struct ScalarSre {
    double sigma_a = 1.0;
    double sigma_b = 1.0;
};

/// c+ = E[|AX+B|^alpha - |AX|^alpha] / (2 alpha m_alpha) with X drawn from
/// the stationary law (simulated ensemble) and (A,B) fresh. When sigma_a = 0
/// the caller must pass m_alpha; X then equals B.
GoldieEstimate goldie_constant(const ScalarSre& sre, double alpha, long n_mc, std::uint64_t seed,
                               std::optional<double> m_alpha = std::nullopt);

/// w_s = E|sum_{i<=s} Pi^(1)_{0,2-i} M12_{1-i} Pi^(2)_{-i,1-s}|^{alpha2} for
/// s = 1..s_max, c2 from the second coordinate's Goldie constant, and
/// c1_tilde = c2 w_{s_max}. Estimated under the alpha2-tilted law of the
/// M22 factors so the estimator variance stays bounded in s.
/// Throws NotApplicable unless alpha1 > alpha2.
ForwardConstant forward_constant_triangular(const ModelSpec& spec, const StructureDecomposition& dec, double alpha2,
                                            int s_max = 30, long n_mc = 200000, std::uint64_t seed = 1);

/// Plain (untilted) Monte Carlo of w_s; test oracle for short horizons.
std::vector<double> forward_series_plain(const StructureDecomposition& dec, double alpha2, int s_max, long n_mc,
                                         std::uint64_t seed, std::vector<double>* stderr_out = nullptr);

/// Gamma(shape, 1) variate from the stream (Marsaglia-Tsang).
double gamma_variate(double shape, CounterStream& stream);

}  // namespace bekk
