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


#include "bekktail/report.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "bekktail/fixtures.hpp"

namespace bekk {

using Json = nlohmann::ordered_json;

namespace {

std::string skipped(const std::string& reason) { return "skipped(" + reason + ")"; }

std::string error_text(const Error& e) { return std::string(to_string(e.code())) + ": " + e.what(); }

Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

Json optional_number(const std::optional<double>& v) { return v && std::isfinite(*v) ? Json(*v) : Json(nullptr); }

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json goldie_json(const GoldieEstimate& g) {
    return Json{{"value", g.value}, {"stderr", g.stderr_}, {"m_alpha", g.m_alpha}, {"n_mc", g.n_mc},
                {"nonpositive", g.nonpositive}};
}

Json structure_json(const StructureDecomposition& dec) {
    Json t = Json::array();
    for (const Matrix& m : dec.transformed) t.push_back(matrix_json(m));
    return Json{{"kind", std::string(to_string(dec.kind))},
                {"P", matrix_json(dec.P)},
                {"P_inv", matrix_json(dec.P_inv)},
                {"transformed", t},
                {"residual", dec.residual},
                {"tol", dec.tol},
                {"note", dec.note}};
}

Json tail_json(const TailReport& tr, const std::string& route) {
    Json comps = Json::array();
    for (std::size_t i = 0; i < tr.per_component.size(); ++i) {
        const ComponentTail& c = tr.per_component[i];
        Json rel = Json::array();
        for (int j : c.relevant_set) rel.push_back(j + 1);
        comps.push_back(Json{{"component", i + 1},
                             {"alpha", optional_number(c.alpha)},
                             {"method", std::string(to_string(c.method))},
                             {"relevant_set", rel},
                             {"diagnostic", c.diagnostic}});
    }
    Json transformed = Json::array();
    for (std::size_t k = 0; k < tr.sigma.size(); ++k)
        transformed.push_back(Json{{"sigma", tr.sigma[k]},
                                   {"alpha", k < tr.transformed_alpha.size()
                                                 ? number_or_null(tr.transformed_alpha[k])
                                                 : Json(nullptr)}});
    Json constants = Json::object();
    if (tr.c_plus) constants["c_plus"] = goldie_json(*tr.c_plus);
    if (tr.forward) {
        const ForwardConstant& f = *tr.forward;
        constants["c2"] = goldie_json(f.c2);
        constants["c1_tilde"] = f.c1_tilde;
        constants["w_s_series"] = f.w_s;
        constants["w_s_stderr"] = f.w_s_stderr;
        constants["w_s_plateau"] = f.plateau;
        constants["w_s_plateau_at"] = f.plateau_at;
        constants["w_s_envelope"] = f.envelope;
    }
    Json out{{"route", route}, {"per_component", comps}, {"transformed", transformed}};
    out["constants"] = constants.empty() ? Json(skipped("no constant defined for this route")) : constants;
    if (tr.spectral) {
        const SpectralTailEstimate& s = *tr.spectral;
        out["spectral"] = Json{{"alpha", s.alpha},          {"horizons", s.horizons},
                               {"horizon_roots", s.horizon_roots}, {"min_ess", s.min_ess},
                               {"particles", s.particles},  {"low_precision", s.low_precision}};
    }
    out["balance"] = Json{{"p", tr.balance_p}, {"q", tr.balance_q}};
    out["notes"] = tr.notes;
    return out;
}

Json empirics_json(const std::vector<ComponentTailDiagnostics>& diags) {
    Json arr = Json::array();
    for (const ComponentTailDiagnostics& d : diags) {
        Json curve = Json::array();
        for (const auto& [k, a] : d.hill_curve) curve.push_back(Json::array({k, a}));
        Json surv = Json::array();
        for (const SurvivalPoint& p : d.survival_points) surv.push_back(Json::array({p.log_x, p.log_sf}));
        arr.push_back(Json{{"component", d.component + 1},
                           {"hill",
                            {{"alpha_hat", d.hill.alpha_hat},
                             {"k", d.hill.k},
                             {"ci_low", d.hill.ci_low},
                             {"ci_high", d.hill.ci_high},
                             {"n", d.hill.n},
                             {"threshold", d.hill.threshold}}},
                           {"p_hat", d.p_hat},
                           {"survival_slope", d.survival_slope},
                           {"theory_alpha", optional_number(d.theory_alpha)},
                           {"verdict", std::string(to_string(d.verdict))},
                           {"warning", d.warning},
                           {"hill_curve", curve},
                           {"survival_points", surv}});
    }
    return arr;
}

Json assumptions_json(const std::vector<AssumptionVerdict>& vs) {
    Json arr = Json::array();
    for (const AssumptionVerdict& v : vs)
        arr.push_back(Json{{"name", std::string(to_string(v.name))},
                           {"status", std::string(to_string(v.status))},
                           {"witness", v.witness ? Json(*v.witness) : Json(nullptr)},
                           {"detail", v.detail},
                           {"addresses", v.addresses}});
    return arr;
}

Json report_object(const RunReport& r) {
    Json out;
    out["report_version"] = kReportVersion;
    Json echo = Json::parse(model_config_json(r.spec));
    echo["spec_hash"] = r.spec_hash;
    out["spec_echo"] = echo;
    out["structure"] = r.structure ? structure_json(*r.structure) : Json(skipped(r.structure_skip));
    const LyapunovReport& L = r.stationarity;
    out["stationarity"] = Json{{"gamma_hat", L.gamma_hat},
                               {"stderr", L.stderr_},
                               {"n_horizon", L.n_horizon},
                               {"replicas", L.replicas},
                               {"closed_form", optional_number(L.closed_form)},
                               {"verdict", std::string(to_string(L.verdict))},
                               {"kronecker", {{"rho", r.kronecker.rho}, {"sufficient", r.kronecker.sufficient}}}};
    out["tail_theory"] = r.tail_theory ? tail_json(*r.tail_theory, r.tail_route) : Json(skipped(r.tail_theory_skip));
    out["tail_empirics"] = r.tail_empirics ? empirics_json(*r.tail_empirics) : Json(skipped(r.tail_empirics_skip));
    out["assumptions"] = r.assumptions ? assumptions_json(*r.assumptions) : Json(skipped(r.assumptions_skip));
    const AnalyzeOptions& o = r.options;
    out["provenance"] = Json{{"seed", o.seed},
                             {"version", std::string(kLibraryVersion)},
                             {"wall_time", r.wall_time},
                             {"settings",
                              {{"simulate", o.simulate},
                               {"check_assumptions", o.check_assumptions},
                               {"require_stationary", o.require_stationary},
                               {"samples", o.samples},
                               {"replicas", o.replicas},
                               {"burn_in", o.burn_in},
                               {"lyapunov_horizon", o.lyapunov_horizon},
                               {"lyapunov_replicas", o.lyapunov_replicas},
                               {"constants_n_mc", o.constants_n_mc},
                               {"spectral_horizon", o.spectral_horizon},
                               {"spectral_particles", o.spectral_particles},
                               {"force_triangular", o.force_triangular}}}};
    out["exit_code"] = r.exit_code;
    return out;
}

}  // namespace

TailReport tail_theory(const ModelSpec& spec, const StructureDecomposition& dec, StationarityVerdict verdict,
                       const AnalyzeOptions& options, std::string* route) {
    auto set_route = [&](const char* r) {
        if (route) *route = r;
    };
    const bool lag_one = spec.q == 1;
    if (lag_one && (dec.kind == StructureKind::AlreadyDiagonal || dec.kind == StructureKind::SimDiagonalizable)) {
        set_route("SimDiag");
        TailReport tr = tail_indexes_simdiag(spec, dec);
        if (spec.d == 1 && tr.per_component[0].alpha) {
            const double sigma_b = std::sqrt(spec.C(0, 0));
            tr.c_plus = goldie_constant({tr.sigma[0], sigma_b}, *tr.per_component[0].alpha, options.constants_n_mc,
                                        options.seed);
            if (tr.c_plus->nonpositive) tr.notes.push_back("c_plus estimate not positive; enlarge constants_n_mc");
        }
        return tr;
    }
    if (lag_one && dec.kind == StructureKind::SimTriangularizable2D) {
        set_route("Triangular2D");
        TailReport tr;
        try {
            tr = tail_indexes_triangular(spec, dec);
        } catch (const Error& e) {
            tr.sigma = transformed_sigmas(dec);
            for (int i = 0; i < spec.d; ++i) {
                ComponentTail ct;
                ct.method = TailMethod::Undetermined;
                ct.diagnostic = error_text(e);
                tr.per_component.push_back(ct);
            }
            return tr;
        }
        const double a1 = component_tail_index_or_inf(tr.sigma[0]);
        const double a2 = tr.transformed_alpha[1];
        if (a1 > a2 && std::isfinite(a2)) {
            tr.forward = forward_constant_triangular(spec, dec, a2, 30, options.constants_n_mc, options.seed);
            tr.notes.push_back(
                "c1_tilde = c2 * w_s at s = 30, with w_s the moment of order alpha2 of the forward sum; the "
                "order alpha1 variant is not computed");
            tr.notes.push_back("c2 uses the Goldie form E|M22 Y2 + Q2|^alpha2 - E|M22 Y2|^alpha2");
            if (!tr.forward->plateau) tr.notes.push_back("w_s did not plateau within s = 30");
        }
        return tr;
    }
    set_route("SpectralMC");
    if (verdict != StationarityVerdict::Stationary)
        throw Error(ErrorCode::NotApplicable, "spectral route needs a Stationary verdict");
    TailReport tr;
    tr.spectral = solve_spectral_tail_index(spec, options.spectral_horizon, options.spectral_particles, options.seed);
    for (int i = 0; i < spec.d; ++i) {
        ComponentTail ct;
        ct.alpha = tr.spectral->alpha;
        ct.method = TailMethod::SpectralMC;
        for (int j = 0; j < spec.d * spec.q; ++j) ct.relevant_set.push_back(j);
        if (tr.spectral->low_precision) ct.diagnostic = "LowPrecision: effective sample size below 100";
        tr.per_component.push_back(ct);
    }
    tr.notes.push_back("one index for the whole vector; every component shares it");
    return tr;
}

RunReport run_analysis(const ModelSpec& spec, const AnalyzeOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    RunReport r;
    r.spec = spec;
    r.spec_hash = spec_hash(spec);
    r.options = options;

    if (spec.q == 1) {
        try {
            if (options.force_triangular) {
                if (spec.d != 2) throw Error(ErrorCode::InvalidArgument, "triangular route needs d = 2");
                r.structure = simultaneous_triangularize_2d(spec.A);
            } else {
                r.structure = classify_structure(spec.A);
            }
        } catch (const Error& e) {
            r.structure_skip = error_text(e);
        }
    } else {
        StructureDecomposition general;
        general.kind = StructureKind::General;
        general.note = "lag order q > 1: coefficient structure is not used";
        r.structure = general;
    }

    r.stationarity = lyapunov_estimate(spec, options.lyapunov_horizon, options.lyapunov_replicas, options.seed);
    if (r.structure && spec.q == 1) r.stationarity.closed_form = lyapunov_closed_form(spec, *r.structure);
    r.kronecker = kronecker_condition(spec);
    const StationarityVerdict verdict = r.stationarity.verdict;

    std::string gate;
    if (options.require_stationary && verdict != StationarityVerdict::Stationary) {
        r.exit_code = kExitNonStationary;
        gate = "stationarity not certified (" + std::string(to_string(verdict)) + ")";
    } else if (verdict == StationarityVerdict::NonStationary) {
        gate = "nonstationary model";
    }

    if (!gate.empty()) {
        r.tail_theory_skip = gate;
    } else if (!r.structure) {
        r.tail_theory_skip = "structure unavailable: " + r.structure_skip;
    } else {
        try {
            r.tail_theory = tail_theory(spec, *r.structure, verdict, options, &r.tail_route);
        } catch (const Error& e) {
            r.tail_theory_skip = error_text(e);
        }
    }

    if (!options.simulate) {
        r.tail_empirics_skip = "not requested";
    } else if (!gate.empty()) {
        r.tail_empirics_skip = gate;
    } else {
        try {
            SimConfig sim;
            sim.seed = options.seed;
            sim.burn_in = options.burn_in;
            sim.n_samples = options.samples;
            sim.replicas = options.replicas;
            r.tail_empirics = component_tail_report(spec, sim, r.tail_theory ? &*r.tail_theory : nullptr);
            if (!options.emit_csv_dir.empty()) emit_csv(*r.tail_empirics, options.emit_csv_dir);
        } catch (const Error& e) {
            r.tail_empirics_skip = error_text(e);
        }
    }

    if (!options.check_assumptions) {
        r.assumptions_skip = "not requested";
    } else if (r.exit_code == kExitNonStationary) {
        r.assumptions_skip = gate;
    } else {
        r.assumptions = check_all_assumptions(spec, options.seed);
        for (const AssumptionVerdict& v : *r.assumptions)
            if (v.status == AssumptionStatus::Fails) r.exit_code = kExitAssumptionFailed;
    }

    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::string report_json(const RunReport& report, int indent) { return report_object(report).dump(indent) + "\n"; }

void emit_csv(const std::vector<ComponentTailDiagnostics>& diags, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::InvalidArgument, "cannot create directory " + dir + ": " + ec.message());
    auto open = [&](const char* name) {
        std::ofstream f(fs::path(dir) / name);
        if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + (fs::path(dir) / name).string());
        return f;
    };
    std::ofstream hill = open("hill_curve.csv");
    write_hill_curve_csv(diags, hill);
    std::ofstream surv = open("survival.csv");
    write_survival_csv(diags, surv);
}

namespace {

bool close_rel(double a, double b) { return std::fabs(a - b) <= 1e-6 * std::max(1.0, std::fabs(b)); }

void expect_alpha(ReproduceResult& res, int component, double expected, const std::string& label) {
    ReproduceCheck c;
    c.name = "X" + std::to_string(component) + " index = " + label;
    const auto& tt = res.report.tail_theory;
    if (!tt || static_cast<std::size_t>(component) > tt->per_component.size()) {
        c.detail = "tail theory unavailable";
    } else {
        const ComponentTail& ct = tt->per_component[static_cast<std::size_t>(component - 1)];
        if (!ct.alpha) {
            c.detail = "undetermined: " + ct.diagnostic;
        } else {
            c.pass = close_rel(*ct.alpha, expected);
            c.detail = "alpha = " + std::to_string(*ct.alpha) + ", expected " + std::to_string(expected) + " (" +
                       std::string(to_string(ct.method)) + ")";
        }
    }
    res.checks.push_back(c);
}

void expect_undetermined(ReproduceResult& res, int component, const std::string& diagnostic) {
    ReproduceCheck c;
    c.name = "X" + std::to_string(component) + " index undetermined";
    const auto& tt = res.report.tail_theory;
    if (tt && static_cast<std::size_t>(component) <= tt->per_component.size()) {
        const ComponentTail& ct = tt->per_component[static_cast<std::size_t>(component - 1)];
        c.pass = !ct.alpha && ct.method == TailMethod::Undetermined && ct.diagnostic == diagnostic;
        c.detail = ct.diagnostic;
    } else {
        c.detail = "tail theory unavailable";
    }
    res.checks.push_back(c);
}

void expect_assumption(ReproduceResult& res, AssumptionName name) {
    ReproduceCheck c;
    c.name = std::string(to_string(name)) + " holds";
    if (res.report.assumptions) {
        for (const AssumptionVerdict& v : *res.report.assumptions) {
            if (v.name != name) continue;
            c.pass = v.status == AssumptionStatus::Holds;
            c.detail = std::string(to_string(v.status)) + ": " + v.detail;
        }
    } else {
        c.detail = "assumptions " + res.report.assumptions_skip;
    }
    res.checks.push_back(c);
}

void expect_true(ReproduceResult& res, const std::string& name, bool ok, const std::string& detail) {
    res.checks.push_back({name, ok, detail});
}

double alpha_of(double sigma) { return solve_component_tail_index(sigma); }

}  // namespace

ReproduceResult reproduce(std::string_view id, const AnalyzeOptions& options) {
    const Fixture fx = fixture(id);
    AnalyzeOptions opts = options;
    opts.force_triangular = fx.force_triangular;
    if (id == "7.5" || id == "7.6") opts.check_assumptions = true;

    ReproduceResult res;
    res.id = fx.id;
    res.title = fx.title;
    res.report = run_analysis(fx.spec, opts);

    if (id == "5.1") {
        expect_alpha(res, 1, alpha_of(0.7), "alpha(0.7)");
        expect_alpha(res, 2, alpha_of(1.1), "alpha(1.1)");
    } else if (id == "5.2" || id == "6.2") {
        expect_alpha(res, 1, std::min(alpha_of(0.5), alpha_of(0.8)), "min(alpha(0.5), alpha(0.8))");
        expect_alpha(res, 2, alpha_of(0.8), "alpha(0.8)");
        if (id == "6.2")
            expect_true(res, "triangular route used", res.report.tail_route == "Triangular2D", res.report.tail_route);
    } else if (id == "5.3") {
        const double s2 = std::hypot(0.9 + 0.3, 0.4);
        expect_alpha(res, 1, alpha_of(s2), "alpha(|(a+b, c)|)");
        expect_alpha(res, 2, alpha_of(s2), "alpha(|(a+b, c)|)");
    } else if (id == "5.4") {
        expect_alpha(res, 1, alpha_of(0.5), "alpha(a)");
        expect_alpha(res, 2, alpha_of(0.5), "alpha(a)");
        expect_alpha(res, 3, std::min(alpha_of(0.5), alpha_of(0.9)), "min(alpha(a), alpha(b))");
    } else if (id == "5.6") {
        for (int i = 1; i <= 3; ++i) expect_alpha(res, i, alpha_of(0.9), "alpha(a+2b)");
    } else if (id == "6.4") {
        const double a1 = alpha_of(std::hypot(0.4, 0.5)), a2 = alpha_of(std::hypot(0.4, 1.1));
        expect_alpha(res, 1, std::min(a1, a2), "min(alpha1, alpha2)");
        expect_alpha(res, 2, a2, "alpha2");
        const auto& tt = res.report.tail_theory;
        const bool fwd = tt && tt->forward;
        expect_true(res, "c1_tilde > 0", fwd && tt->forward->c1_tilde > 0.0,
                    fwd ? "c1_tilde = " + std::to_string(tt->forward->c1_tilde) : "not computed");
        expect_true(res, "w_s plateaus", fwd && tt->forward->plateau,
                    fwd ? "plateau from s = " + std::to_string(tt->forward->plateau_at) : "not computed");
    } else if (id == "6.5") {
        expect_undetermined(res, 1, "dependent equal-index Y components");
        expect_undetermined(res, 2, "dependent equal-index Y components");
    } else if (id == "7.5") {
        for (AssumptionName n : {AssumptionName::IrreducibilityDensity, AssumptionName::IrreducibilityNonParallel,
                                 AssumptionName::ProximalityDensity, AssumptionName::DetNondegenerate})
            expect_assumption(res, n);
        const auto& tt = res.report.tail_theory;
        const bool ok = tt && tt->spectral && tt->spectral->alpha > 0.0;
        expect_true(res, "spectral index exists", ok,
                    ok ? "alpha = " + std::to_string(tt->spectral->alpha) : "tail theory " + res.report.tail_theory_skip);
    } else if (id == "7.6") {
        expect_assumption(res, AssumptionName::IrreducibilityNonParallel);
        expect_assumption(res, AssumptionName::DetNondegenerate);
    }
    res.pass = !res.checks.empty();
    for (const ReproduceCheck& c : res.checks) res.pass = res.pass && c.pass;
    return res;
}

std::string reproduce_json(const ReproduceResult& result, int indent) {
    Json checks = Json::array();
    for (const ReproduceCheck& c : result.checks)
        checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    Json out{{"example", result.id},
             {"title", result.title},
             {"pass", result.pass},
             {"checks", checks},
             {"report", report_object(result.report)}};
    return out.dump(indent) + "\n";
}

}  // namespace bekk
