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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bekktail/model.hpp"
#include "bekktail/random.hpp"

namespace bekk {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct SimConfig {
    std::uint64_t seed = 1;
    long burn_in = 10000;
    long n_samples = 10000;
    int replicas = 1;
    int thinning = 1;
};

void validate_sim_config(const SimConfig& sim);

/// Retained states V_t, one per row (dq columns).
struct SimBatch {
    RowMatrix samples;
    std::string spec_hash;
    SimConfig config;
    double wall_time = 0.0;
    bool single_path = false;

    [[nodiscard]] Vector column(Eigen::Index c) const { return samples.col(c); }
};

struct Coefficients {
    Matrix M;
    Vector Q;
};

/// One draw of (M_t, Q_t): q*l slot normals in lag-major order, then d
/// normals turned into B_t ~ N(0, C) through the Cholesky factor.
Coefficients draw_coefficients(const CompanionTemplate& tmpl, CounterStream& stream);

/// Same, from explicit normals (q*l + d of them). Used to pin draws in tests.
Coefficients coefficients_from_normals(const CompanionTemplate& tmpl, std::span<const double> normals);

/// Allocation-free one-step iteration of the companion recursion, consuming
/// normals in the same order as draw_coefficients.
class SreStepper {
public:
    explicit SreStepper(const CompanionTemplate& tmpl);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    /// state <- M state + Q. Returns false if the new top block is non-finite
    /// or exceeds the overflow threshold.
    bool step(std::span<double> state, CounterStream& stream);

private:
    int d_;
    int q_;
    int l_;
    int dim_;
    std::vector<double> coef_;  // slot-major, each d*d row-major
    std::vector<double> chol_;  // d*d row-major lower factor
    std::vector<double> top_;
    std::vector<double> m_;
    std::vector<double> xi_;
};

inline constexpr double kOverflowThreshold = 1e300;

/// Single trajectory from V_0 = 0: burn_in steps, then n_samples retained
/// states, keeping every `thinning`-th step. Does not check stationarity.
SimBatch simulate_path(const ModelSpec& spec, const SimConfig& sim);

/// `replicas` independent trajectories, replica r driven by
/// CounterStream::derive(seed, r), each burned in and contributing its share
/// of n_samples (the first n_samples % replicas replicas take one extra).
/// Rows are ordered by replica index.
SimBatch simulate_ensemble(const ModelSpec& spec, const SimConfig& sim);

/// CSV dump: header `t,v1,...,v_dq`, 17 significant digits.
void write_batch_csv(const SimBatch& batch, std::ostream& out);

}  // namespace bekk
