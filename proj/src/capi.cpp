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


#include "bekktail/bekktail.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "bekktail/fixtures.hpp"
#include "bekktail/parallel.hpp"
#include "bekktail/report.hpp"
#include "bekktail/simulate.hpp"
#include "bekktail/stationarity.hpp"
#include "bekktail/tail_estimator.hpp"
#include "bekktail/tail_solver.hpp"

struct bekk_model {
    bekk::ModelSpec spec;
};

namespace {

thread_local std::string g_last_error;

bekk_status map_code(bekk::ErrorCode c) {
    using bekk::ErrorCode;
    switch (c) {
        case ErrorCode::ParseError: return BEKK_E_PARSE;
        case ErrorCode::ShapeMismatch: return BEKK_E_SHAPE;
        case ErrorCode::NotPositiveDefinite: return BEKK_E_NOT_POSITIVE_DEFINITE;
        case ErrorCode::AllZeroCoefficients: return BEKK_E_ALL_ZERO;
        case ErrorCode::DimensionMismatch: return BEKK_E_DIMENSION;
        case ErrorCode::InvalidArgument: return BEKK_E_INVALID_ARGUMENT;
        case ErrorCode::ComplexEigenvalues: return BEKK_E_COMPLEX_EIGENVALUES;
        case ErrorCode::NotDiagonalizable: return BEKK_E_NOT_DIAGONALIZABLE;
        case ErrorCode::NotSimultaneouslyDiagonalizable: return BEKK_E_NOT_SIM_DIAGONALIZABLE;
        case ErrorCode::NoCommonRealEigenvector: return BEKK_E_NO_COMMON_EIGENVECTOR;
        case ErrorCode::Overflow: return BEKK_E_OVERFLOW;
        case ErrorCode::NoRoot: return BEKK_E_NO_ROOT;
        case ErrorCode::TieUndetermined: return BEKK_E_TIE_UNDETERMINED;
        case ErrorCode::NoSignChange: return BEKK_E_NO_SIGN_CHANGE;
        case ErrorCode::NotApplicable: return BEKK_E_NOT_APPLICABLE;
        case ErrorCode::InsufficientData: return BEKK_E_INSUFFICIENT_DATA;
        case ErrorCode::UnknownExample: return BEKK_E_UNKNOWN_EXAMPLE;
    }
    return BEKK_E_INTERNAL;
}

bekk_status fail(bekk_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <class F>
bekk_status guarded(F&& body) {
    try {
        body();
        g_last_error.clear();
        return BEKK_OK;
    } catch (const bekk::Error& e) {
        return fail(map_code(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(BEKK_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(BEKK_E_INTERNAL, e.what());
    } catch (...) {
        return fail(BEKK_E_INTERNAL, "unknown failure");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool ok, const char* what) {
    if (!ok) throw bekk::Error(bekk::ErrorCode::InvalidArgument, what);
}

bekk::SimConfig to_sim(const bekk_sim_config* cfg) {
    bekk::SimConfig s;
    s.seed = cfg->seed;
    s.burn_in = cfg->burn_in;
    s.n_samples = cfg->n_samples;
    s.replicas = cfg->replicas;
    s.thinning = cfg->thinning;
    return s;
}

bekk::AnalyzeOptions to_options(const bekk_analyze_options* o) {
    bekk::AnalyzeOptions a;
    if (!o) return a;
    a.seed = o->seed;
    a.simulate = o->simulate != 0;
    a.check_assumptions = o->check_assumptions != 0;
    a.require_stationary = o->require_stationary != 0;
    a.samples = o->samples;
    a.replicas = o->replicas;
    a.burn_in = o->burn_in;
    a.lyapunov_horizon = o->lyapunov_horizon;
    a.lyapunov_replicas = o->lyapunov_replicas;
    a.constants_n_mc = o->constants_n_mc;
    a.spectral_horizon = o->spectral_horizon;
    a.spectral_particles = o->spectral_particles;
    if (o->emit_csv_dir) a.emit_csv_dir = o->emit_csv_dir;
    return a;
}

}  // namespace

extern "C" {

const char* bekk_version(void) { return "0.1.0"; }

const char* bekk_status_name(bekk_status status) {
    switch (status) {
        case BEKK_OK: return "OK";
        case BEKK_E_PARSE: return "ParseError";
        case BEKK_E_SHAPE: return "ShapeMismatch";
        case BEKK_E_NOT_POSITIVE_DEFINITE: return "NotPositiveDefinite";
        case BEKK_E_ALL_ZERO: return "AllZeroCoefficients";
        case BEKK_E_DIMENSION: return "DimensionMismatch";
        case BEKK_E_INVALID_ARGUMENT: return "InvalidArgument";
        case BEKK_E_COMPLEX_EIGENVALUES: return "ComplexEigenvalues";
        case BEKK_E_NOT_DIAGONALIZABLE: return "NotDiagonalizable";
        case BEKK_E_NOT_SIM_DIAGONALIZABLE: return "NotSimultaneouslyDiagonalizable";
        case BEKK_E_NO_COMMON_EIGENVECTOR: return "NoCommonRealEigenvector";
        case BEKK_E_OVERFLOW: return "Overflow";
        case BEKK_E_NO_ROOT: return "NoRoot";
        case BEKK_E_TIE_UNDETERMINED: return "TieUndetermined";
        case BEKK_E_NO_SIGN_CHANGE: return "NoSignChange";
        case BEKK_E_NOT_APPLICABLE: return "NotApplicable";
        case BEKK_E_INSUFFICIENT_DATA: return "InsufficientData";
        case BEKK_E_UNKNOWN_EXAMPLE: return "UnknownExample";
        case BEKK_E_IO: return "IoError";
        case BEKK_E_INTERNAL: return "InternalError";
    }
    return "InternalError";
}

const char* bekk_last_error(void) { return g_last_error.c_str(); }

void bekk_set_threads(unsigned n) { bekk::set_worker_threads(n); }

bekk_status bekk_model_from_json(const char* json_text, bekk_model** out) {
    return guarded([&] {
        require(json_text && out, "null argument");
        *out = new bekk_model{bekk::parse_model_config(json_text)};
    });
}

bekk_status bekk_model_from_file(const char* path, bekk_model** out) {
    if (path) {
        std::ifstream probe(path);
        if (!probe) return fail(BEKK_E_IO, std::string("cannot open ") + path);
    }
    return guarded([&] {
        require(path && out, "null argument");
        *out = new bekk_model{bekk::load_model_config(path)};
    });
}

bekk_status bekk_model_from_example(const char* example_id, bekk_model** out) {
    return guarded([&] {
        require(example_id && out, "null argument");
        *out = new bekk_model{bekk::fixture(example_id).spec};
    });
}

void bekk_model_free(bekk_model* model) { delete model; }

bekk_status bekk_model_dims(const bekk_model* model, int* d, int* q, int* l) {
    return guarded([&] {
        require(model, "null model");
        if (d) *d = model->spec.d;
        if (q) *q = model->spec.q;
        if (l) *l = model->spec.l;
    });
}

bekk_status bekk_model_to_json(const bekk_model* model, char** out) {
    return guarded([&] {
        require(model && out, "null argument");
        *out = dup_string(bekk::model_config_json(model->spec));
    });
}

bekk_status bekk_model_hash(const bekk_model* model, char** out) {
    return guarded([&] {
        require(model && out, "null argument");
        *out = dup_string(bekk::spec_hash(model->spec));
    });
}

double bekk_nelson_bound(void) { return bekk::nelson_bound(); }

bekk_status bekk_gaussian_abs_moment(double alpha, double sigma, double* out) {
    return guarded([&] {
        require(out, "null output");
        require(alpha > 0.0 && sigma > 0.0, "alpha and sigma must be positive");
        *out = bekk::gaussian_abs_moment(alpha, sigma);
    });
}

bekk_status bekk_moment_log_derivative(double alpha, double sigma, double* out) {
    return guarded([&] {
        require(out, "null output");
        require(alpha > 0.0 && sigma > 0.0, "alpha and sigma must be positive");
        *out = bekk::moment_log_derivative(alpha, sigma);
    });
}

bekk_status bekk_solve_component_tail_index(double sigma, double* out) {
    return guarded([&] {
        require(out, "null output");
        *out = bekk::solve_component_tail_index(sigma);
    });
}

bekk_status bekk_lyapunov(const bekk_model* model, int n_horizon, int replicas, uint64_t seed, double* gamma_hat,
                          double* stderr_out, bekk_stationarity* verdict) {
    return guarded([&] {
        require(model, "null model");
        const bekk::LyapunovReport r = bekk::lyapunov_estimate(model->spec, n_horizon, replicas, seed);
        if (gamma_hat) *gamma_hat = r.gamma_hat;
        if (stderr_out) *stderr_out = r.stderr_;
        if (verdict) *verdict = static_cast<bekk_stationarity>(static_cast<int>(r.verdict));
    });
}

void bekk_sim_config_init(bekk_sim_config* cfg) {
    if (!cfg) return;
    const bekk::SimConfig d;
    cfg->seed = d.seed;
    cfg->burn_in = d.burn_in;
    cfg->n_samples = d.n_samples;
    cfg->replicas = d.replicas;
    cfg->thinning = d.thinning;
}

bekk_status bekk_simulate(const bekk_model* model, const bekk_sim_config* cfg, double** samples, size_t* rows,
                          size_t* cols) {
    return guarded([&] {
        require(model && cfg && samples && rows && cols, "null argument");
        const bekk::SimBatch b = bekk::simulate_ensemble(model->spec, to_sim(cfg));
        const auto n = static_cast<std::size_t>(b.samples.size());
        double* buf = static_cast<double*>(std::malloc(n * sizeof(double)));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, b.samples.data(), n * sizeof(double));
        *samples = buf;
        *rows = static_cast<std::size_t>(b.samples.rows());
        *cols = static_cast<std::size_t>(b.samples.cols());
    });
}

bekk_status bekk_simulate_csv(const bekk_model* model, const bekk_sim_config* cfg, const char* path) {
    return guarded([&] {
        require(model && cfg && path, "null argument");
        std::ofstream f(path);
        if (!f) throw bekk::Error(bekk::ErrorCode::InvalidArgument, std::string("cannot write ") + path);
        bekk::write_batch_csv(bekk::simulate_ensemble(model->spec, to_sim(cfg)), f);
    });
}

bekk_status bekk_hill(const double* sample, size_t n, long k, double* alpha_hat, double* ci_low, double* ci_high) {
    return guarded([&] {
        require(sample || n == 0, "null sample");
        const bekk::HillEstimate h = bekk::hill_estimator(std::span<const double>(sample, n), k);
        if (alpha_hat) *alpha_hat = h.alpha_hat;
        if (ci_low) *ci_low = h.ci_low;
        if (ci_high) *ci_high = h.ci_high;
    });
}

void bekk_analyze_options_init(bekk_analyze_options* opts) {
    if (!opts) return;
    const bekk::AnalyzeOptions d;
    opts->seed = d.seed;
    opts->simulate = d.simulate;
    opts->check_assumptions = d.check_assumptions;
    opts->require_stationary = d.require_stationary;
    opts->samples = d.samples;
    opts->replicas = d.replicas;
    opts->burn_in = d.burn_in;
    opts->lyapunov_horizon = d.lyapunov_horizon;
    opts->lyapunov_replicas = d.lyapunov_replicas;
    opts->constants_n_mc = d.constants_n_mc;
    opts->spectral_horizon = d.spectral_horizon;
    opts->spectral_particles = d.spectral_particles;
    opts->emit_csv_dir = nullptr;
}

bekk_status bekk_analyze(const bekk_model* model, const bekk_analyze_options* opts, char** report_json,
                         int* exit_code) {
    return guarded([&] {
        require(model && report_json, "null argument");
        const bekk::RunReport r = bekk::run_analysis(model->spec, to_options(opts));
        *report_json = dup_string(bekk::report_json(r));
        if (exit_code) *exit_code = r.exit_code;
    });
}

bekk_status bekk_reproduce(const char* example_id, const bekk_analyze_options* opts, char** report_json,
                           int* passed) {
    return guarded([&] {
        require(example_id && report_json, "null argument");
        const bekk::ReproduceResult r = bekk::reproduce(example_id, to_options(opts));
        *report_json = dup_string(bekk::reproduce_json(r));
        if (passed) *passed = r.pass ? 1 : 0;
    });
}

const char* bekk_example_ids(void) {
    static const std::string ids = [] {
        std::string s;
        for (const std::string& id : bekk::fixture_ids()) s += (s.empty() ? "" : ",") + id;
        return s;
    }();
    return ids.c_str();
}

void bekk_string_free(char* s) { std::free(s); }

void bekk_buffer_free(double* buffer) { std::free(buffer); }

}  // extern "C"
