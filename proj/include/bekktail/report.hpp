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

#include "bekktail/assumptions.hpp"
#include "bekktail/model.hpp"
#include "bekktail/stationarity.hpp"
#include "bekktail/structure.hpp"
#include "bekktail/tail_estimator.hpp"
#include "bekktail/tail_solver.hpp"

namespace bekk {

inline constexpr int kReportVersion = 1;
inline constexpr std::string_view kLibraryVersion = "0.1.0";

struct AnalyzeOptions {
    std::uint64_t seed = 1;
    bool simulate = false;
    bool check_assumptions = false;
    bool require_stationary = false;
    long samples = 200000;
    int replicas = 200;
    long burn_in = 10000;
    int lyapunov_horizon = 2000;
    int lyapunov_replicas = 200;
    long constants_n_mc = 200000;
    int spectral_horizon = 200;
    int spectral_particles = 2000;
    bool force_triangular = false;
    std::string emit_csv_dir;  // empty: no CSV side files
};

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 2,
    kExitAssumptionFailed = 3,
    kExitNonStationary = 4,
};

/// All sections of one analysis run. A section left empty carries its
/// reason in the matching `*_skip` string.
struct RunReport {
    ModelSpec spec;
    std::string spec_hash;
    std::optional<StructureDecomposition> structure;
    std::string structure_skip;
    LyapunovReport stationarity;
    KroneckerCondition kronecker;
    std::optional<TailReport> tail_theory;
    std::string tail_route;
    std::string tail_theory_skip;
    std::optional<std::vector<ComponentTailDiagnostics>> tail_empirics;
    std::string tail_empirics_skip;
    std::optional<std::vector<AssumptionVerdict>> assumptions;
    std::string assumptions_skip;
    AnalyzeOptions options;
    double wall_time = 0.0;
    int exit_code = kExitOk;
};

/// validate -> classify -> stationarity -> tail theory -> (simulate)
/// empirics -> (check) assumptions. Failures inside a stage degrade that
/// section to skipped; they never abort the run.
RunReport run_analysis(const ModelSpec& spec, const AnalyzeOptions& options);

/// Tail theory for a classified model; `verdict` gates the spectral route.
TailReport tail_theory(const ModelSpec& spec, const StructureDecomposition& dec, StationarityVerdict verdict,
                       const AnalyzeOptions& options, std::string* route);

/// JSON text of a report (report_version 1). Deterministic given the
/// inputs except for provenance.wall_time.
std::string report_json(const RunReport& report, int indent = 2);

/// Writes hill_curve.csv and survival.csv under `dir`.
void emit_csv(const std::vector<ComponentTailDiagnostics>& diags, const std::string& dir);

struct ReproduceCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ReproduceResult {
    std::string id;
    std::string title;
    RunReport report;
    std::vector<ReproduceCheck> checks;
    bool pass = false;
};

/// Runs the fixture and asserts its qualitative conclusion. Throws
/// UnknownExample.
ReproduceResult reproduce(std::string_view id, const AnalyzeOptions& options);

std::string reproduce_json(const ReproduceResult& result, int indent = 2);

}  // namespace bekk
