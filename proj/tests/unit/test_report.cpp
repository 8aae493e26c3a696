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


#include <string>

#include "bekktail/fixtures.hpp"
#include "bekktail/report.hpp"
#include "common.hpp"
#include "json.hpp"

using namespace bekk;
using nlohmann::json;
using testutil::throws_code;

namespace {

AnalyzeOptions quick() {
    AnalyzeOptions o;
    o.lyapunov_horizon = 500;
    o.lyapunov_replicas = 50;
    o.constants_n_mc = 20000;
    o.samples = 50000;
    o.replicas = 50;
    o.burn_in = 1000;
    o.spectral_particles = 500;
    return o;
}

json strip_wall_time(json j) {
    j["provenance"].erase("wall_time");
    return j;
}

}  // namespace

TEST_CASE("scalar report has every section") {
    AnalyzeOptions o = quick();
    o.simulate = true;
    const RunReport r = run_analysis(scalar_arch(1.0), o);
    const json j = json::parse(report_json(r));
    for (const char* key : {"report_version", "spec_echo", "structure", "stationarity", "tail_theory", "tail_empirics",
                            "assumptions", "provenance", "exit_code"})
        CHECK_MESSAGE(j.contains(key), key);
    CHECK(j["report_version"] == 1);
    CHECK(j["exit_code"] == 0);
    CHECK(j["tail_theory"]["per_component"][0]["alpha"].get<double>() == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(j["tail_empirics"][0]["verdict"] == "Consistent");
    CHECK(j["assumptions"].is_string());
    CHECK(j["assumptions"].get<std::string>().rfind("skipped(", 0) == 0);
}

TEST_CASE("same seed gives the same report") {
    AnalyzeOptions o = quick();
    o.simulate = true;
    o.check_assumptions = true;
    const json a = strip_wall_time(json::parse(report_json(run_analysis(fixture("6.4").spec, o))));
    const json b = strip_wall_time(json::parse(report_json(run_analysis(fixture("6.4").spec, o))));
    CHECK(a.dump() == b.dump());
    o.seed = 2;
    const json c = strip_wall_time(json::parse(report_json(run_analysis(fixture("6.4").spec, o))));
    CHECK(a.dump() != c.dump());
}

TEST_CASE("exit codes") {
    AnalyzeOptions o = quick();
    o.require_stationary = true;
    CHECK(run_analysis(scalar_arch(2.0), o).exit_code == kExitNonStationary);
    CHECK(run_analysis(scalar_arch(1.0), o).exit_code == kExitOk);
    o.require_stationary = false;
    o.check_assumptions = true;
    CHECK(run_analysis(make_spec(2, 1, 1, {mat2(0.5, 0, 0, 0.8)}), o).exit_code == kExitAssumptionFailed);
}

TEST_CASE("nonstationary model degrades later sections") {
    AnalyzeOptions o = quick();
    o.simulate = true;
    const json j = json::parse(report_json(run_analysis(fixture("7.6").spec, o)));
    CHECK(j.contains("tail_theory"));
    const json n = json::parse(report_json(run_analysis(scalar_arch(2.0), o)));
    CHECK(n["tail_empirics"].is_string());
}

TEST_CASE("undetermined example reports its diagnostic") {
    const json j = json::parse(report_json(run_analysis(fixture("6.5").spec, quick())));
    for (const json& c : j["tail_theory"]["per_component"]) {
        CHECK(c["method"] == "Undetermined");
        CHECK(c["alpha"].is_null());
        CHECK(c["diagnostic"] == "dependent equal-index Y components");
    }
}

TEST_CASE("reproduce") {
    for (const char* id : {"5.1", "5.2", "5.3", "5.4", "5.6", "6.2", "6.5"}) {
        const ReproduceResult r = reproduce(id, quick());
        CHECK_MESSAGE(r.pass, id);
        const json j = json::parse(reproduce_json(r));
        CHECK(j["pass"] == r.pass);
    }
    CHECK(throws_code([] { reproduce("9.9", quick()); }, ErrorCode::UnknownExample));
}
