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

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bekktail/simulate.hpp"
#include "bekktail/tail_solver.hpp"

namespace bekk {

struct HillEstimate {
    double alpha_hat = 0.0;
    long k = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    long n = 0;
    double threshold = 0.0;  // x_(n-k), the (k+1)-th largest |x|
};

/// Hill estimator on |sample| with the k largest order statistics.
/// Throws InsufficientData when k < 5, k >= n, the threshold is not positive
/// or all log-spacings vanish.
HillEstimate hill_estimator(std::span<const double> sample, long k);

/// floor(1.5 n^0.55)
long default_hill_k(long n) noexcept;

/// (k, alpha_hat) on a log-spaced k grid of `points` values.
std::vector<std::pair<long, double>> hill_curve(std::span<const double> sample, int points = 20);

enum class TailVerdict { Consistent, Inconsistent, NoTheory };

std::string_view to_string(TailVerdict v) noexcept;

inline constexpr double kModelTolerance = 0.15;

/// Consistent iff |alpha_hat - theory| <= 1.96 alpha_hat / sqrt(k) + tol * theory.
TailVerdict tail_verdict(const HillEstimate& hill, std::optional<double> theory_alpha,
                         double tol = kModelTolerance) noexcept;

struct SurvivalPoint {
    double log_x = 0.0;
    double log_sf = 0.0;
};

struct ComponentTailDiagnostics {
    int component = 0;  // 0-based
    HillEstimate hill;
    std::vector<std::pair<long, double>> hill_curve;
    std::vector<SurvivalPoint> survival_points;
    double survival_slope = 0.0;  // least squares over points at or above the Hill threshold
    double p_hat = 0.5;           // #{X > t} / #{|X| > t} at the Hill threshold
    std::optional<double> theory_alpha;
    TailVerdict verdict = TailVerdict::NoTheory;
    std::string warning;
};

/// Diagnostics of the first `components` columns of a batch.
std::vector<ComponentTailDiagnostics> diagnose_samples(const SimBatch& batch, int components,
                                                       const TailReport* theory);

/// Ensemble simulation followed by diagnose_samples on the d observed
/// coordinates.
std::vector<ComponentTailDiagnostics> component_tail_report(const ModelSpec& spec, const SimConfig& sim,
                                                            const TailReport* theory);

struct AngularHistogram {
    int dim = 0;
    double threshold = 0.0;
    long exceedances = 0;
    /// dim = 2: 36 sectors of 10 degrees starting at angle 0, counterclockwise.
    /// dim > 2: 2*dim hypercube faces, bin 2k for +e_k and 2k+1 for -e_k.
    std::vector<double> mass;
};

/// Normalized angular masses of V/|V| over rows with |V| above the
/// empirical `threshold_quantile`. Throws InsufficientData below 200
/// exceedances.
AngularHistogram angular_histogram(const RowMatrix& samples, double threshold_quantile);

/// `k,alpha_hat,component`
void write_hill_curve_csv(const std::vector<ComponentTailDiagnostics>& diags, std::ostream& out);
/// `log_x,log_sf,component`
void write_survival_csv(const std::vector<ComponentTailDiagnostics>& diags, std::ostream& out);

}  // namespace bekk
