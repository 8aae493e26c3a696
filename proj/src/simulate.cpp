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

#include "bekktail/simulate.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <ostream>

#include "bekktail/parallel.hpp"

namespace bekk {

void validate_sim_config(const SimConfig& sim) {
    if (sim.burn_in < 1) throw Error(ErrorCode::InvalidArgument, "burn_in must be >= 1");
    if (sim.n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n_samples must be >= 1");
    if (sim.replicas < 1) throw Error(ErrorCode::InvalidArgument, "replicas must be >= 1");
    if (sim.thinning < 1) throw Error(ErrorCode::InvalidArgument, "thinning must be >= 1");
    if (sim.replicas > sim.n_samples)
        throw Error(ErrorCode::InvalidArgument, "replicas must not exceed n_samples");
}

Coefficients coefficients_from_normals(const CompanionTemplate& tmpl, std::span<const double> normals) {
    const std::size_t n_slots = tmpl.random_slots.size();
    if (normals.size() != n_slots + static_cast<std::size_t>(tmpl.d))
        throw Error(ErrorCode::DimensionMismatch, "expected q*l + d normals");
    Coefficients out;
    out.M = tmpl.deterministic_part;
    for (std::size_t s = 0; s < n_slots; ++s) {
        const RandomSlot& slot = tmpl.random_slots[s];
        out.M.block(slot.row_offset, slot.col_offset, tmpl.d, tmpl.d) += normals[s] * tmpl.slot_matrices[s];
    }
    Vector xi(tmpl.d);
    for (int i = 0; i < tmpl.d; ++i) xi(i) = normals[n_slots + static_cast<std::size_t>(i)];
    out.Q = Vector::Zero(tmpl.dim);
    out.Q.head(tmpl.d) = tmpl.noise_chol * xi;
    return out;
}

Coefficients draw_coefficients(const CompanionTemplate& tmpl, CounterStream& stream) {
    std::vector<double> normals(tmpl.random_slots.size() + static_cast<std::size_t>(tmpl.d));
    for (double& z : normals) z = stream.normal();
    return coefficients_from_normals(tmpl, normals);
}

SreStepper::SreStepper(const CompanionTemplate& tmpl)
    : d_(tmpl.d),
      q_(tmpl.dim / tmpl.d),
      l_(static_cast<int>(tmpl.random_slots.size()) / (tmpl.dim / tmpl.d)),
      dim_(tmpl.dim),
      top_(static_cast<std::size_t>(tmpl.d)),
      m_(tmpl.random_slots.size()),
      xi_(static_cast<std::size_t>(tmpl.d)) {
    for (const Matrix& a : tmpl.slot_matrices)
        for (int r = 0; r < d_; ++r)
            for (int c = 0; c < d_; ++c) coef_.push_back(a(r, c));
    for (int r = 0; r < d_; ++r)
        for (int c = 0; c < d_; ++c) chol_.push_back(tmpl.noise_chol(r, c));
}

bool SreStepper::step(std::span<double> state, CounterStream& stream) {
    const std::size_t n_slots = m_.size();
    const auto d = static_cast<std::size_t>(d_);
    for (double& z : m_) z = stream.normal();
    for (double& z : xi_) z = stream.normal();

    for (std::size_t r = 0; r < d; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c <= r; ++c) acc += chol_[r * d + c] * xi_[c];
        top_[r] = acc;
    }
    for (std::size_t s = 0; s < n_slots; ++s) {
        const double m = m_[s];
        const double* a = coef_.data() + s * d * d;
        const double* x = state.data() + (s / static_cast<std::size_t>(l_)) * d;
        for (std::size_t r = 0; r < d; ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < d; ++c) acc += a[r * d + c] * x[c];
            top_[r] += m * acc;
        }
    }
    if (q_ > 1) std::memmove(state.data() + d, state.data(), (static_cast<std::size_t>(dim_) - d) * sizeof(double));
    bool finite = true;
    for (std::size_t r = 0; r < d; ++r) {
        state[r] = top_[r];
        finite = finite && std::fabs(top_[r]) <= kOverflowThreshold;
    }
    return finite;
}

namespace {

void run_trajectory(const CompanionTemplate& tmpl, const SimConfig& sim, CounterStream stream, long n_keep,
                    double* out_rows, long replica) {
    SreStepper stepper(tmpl);
    std::vector<double> state(static_cast<std::size_t>(tmpl.dim), 0.0);
    const long total = sim.burn_in + n_keep * sim.thinning;
    long kept = 0;
    for (long t = 1; t <= total; ++t) {
        if (!stepper.step(state, stream)) {
            std::string where = "state overflow (explosive regime) at step " + std::to_string(t);
            if (replica >= 0) where += " of replica " + std::to_string(replica);
            throw Error(ErrorCode::Overflow, where);
        }
        if (t > sim.burn_in && (t - sim.burn_in) % sim.thinning == 0) {
            std::memcpy(out_rows + kept * tmpl.dim, state.data(), state.size() * sizeof(double));
            ++kept;
        }
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SimBatch simulate_path(const ModelSpec& spec, const SimConfig& sim) {
    validate_sim_config(sim);
    const auto start = std::chrono::steady_clock::now();
    const CompanionTemplate tmpl = build_companion_template(spec);
    SimBatch batch;
    batch.samples.resize(sim.n_samples, tmpl.dim);
    batch.spec_hash = spec_hash(spec);
    batch.config = sim;
    batch.single_path = true;
    run_trajectory(tmpl, sim, CounterStream::derive(sim.seed, 0), sim.n_samples, batch.samples.data(), -1);
    batch.wall_time = seconds_since(start);
    return batch;
}

SimBatch simulate_ensemble(const ModelSpec& spec, const SimConfig& sim) {
    validate_sim_config(sim);
    const auto start = std::chrono::steady_clock::now();
    const CompanionTemplate tmpl = build_companion_template(spec);
    SimBatch batch;
    batch.samples.resize(sim.n_samples, tmpl.dim);
    batch.spec_hash = spec_hash(spec);
    batch.config = sim;

    const long base = sim.n_samples / sim.replicas;
    const long extra = sim.n_samples % sim.replicas;
    auto first_row = [&](long r) { return r * base + std::min(r, extra); };
    parallel_for(static_cast<std::size_t>(sim.replicas), [&](std::size_t idx) {
        const auto r = static_cast<long>(idx);
        const long n_keep = base + (r < extra ? 1 : 0);
        run_trajectory(tmpl, sim, CounterStream::derive(sim.seed, idx), n_keep,
                       batch.samples.data() + first_row(r) * tmpl.dim, r);
    });
    batch.wall_time = seconds_since(start);
    return batch;
}

void write_batch_csv(const SimBatch& batch, std::ostream& out) {
    out << 't';
    for (Eigen::Index c = 0; c < batch.samples.cols(); ++c) out << ",v" << (c + 1);
    out << '\n';
    const auto old_precision = out.precision(17);
    for (Eigen::Index r = 0; r < batch.samples.rows(); ++r) {
        out << r;
        for (Eigen::Index c = 0; c < batch.samples.cols(); ++c) out << ',' << batch.samples(r, c);
        out << '\n';
    }
    out.precision(old_precision);
}

}  // namespace bekk
