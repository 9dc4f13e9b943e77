#pragma once

// Runs a scenario and renders the report as JSON. Report content depends only
// on the scenario: the job count changes scheduling, never bytes.

#include <sstream>

#include "orbit_regularization.hpp"
#include "scenario.hpp"

namespace toricdual {

inline constexpr const char* kToolVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Serialization of engine values

inline json rational_json(const mpq_class& x) { return x.get_den() == 1 ? x.get_num().get_str() : x.get_str(); }

inline json cyclo_json(const Cyclo& c) {
    json a = json::array();
    for (const auto& x : c.coefficients()) a.push_back(rational_json(x));
    return a;
}

inline json zpoly_json(const ZPoly& p) {
    json terms = json::array();
    for (const auto& [z, c] : p.terms()) terms.push_back({{"z", z}, {"c", cyclo_json(c)}});
    return terms;
}

// {cyclotomic_order, order, terms: [{u, z, c}]}; c lists power-basis
// coefficients in zeta_N. order is null for an exact series.
inline json series_json(const Series& s) {
    json j;
    j["cyclotomic_order"] = s.cyclotomic_order();
    j["order"] = s.exact() ? json(nullptr) : json(s.order());
    json terms = json::array();
    for (const auto& [u, p] : s.coefficients())
        for (const auto& [z, c] : p.terms()) terms.push_back({{"u", u}, {"z", z}, {"c", cyclo_json(c)}});
    j["terms"] = terms;
    return j;
}

inline json comparison_json(const Comparison& c) {
    json j;
    j["equal"] = c.equal;
    j["compared_upto"] = c.compared_upto;
    if (c.first_mismatch == Series::kExact) {
        j["first_mismatch"] = nullptr;
    } else {
        j["first_mismatch"] = {{"u", c.first_mismatch}, {"lhs", zpoly_json(c.lhs)}, {"rhs", zpoly_json(c.rhs)}};
    }
    return j;
}

inline json cone_json(const Cone& c) { return matrix_json(c.rays); }

inline json datum_json(const GradedToricDatum& d) {
    json j;
    j["rays"] = matrix_json(d.sigma.rays);
    j["rho"] = vec_json(d.rho);
    if (d.rho_den != 1) j["rho_den"] = int_json(d.rho_den);
    j["eta"] = vec_json(d.eta);
    return j;
}

inline json witness_json(const std::vector<long>& w) { return w.empty() ? json(nullptr) : json(w); }

inline json direction_json(const DirectionReport& d) {
    json j;
    j["direction"] = d.label;
    j["applicable"] = d.applicable;
    if (!d.applicable) {
        j["note"] = d.note;
        j["witness"] = witness_json(d.witness);
        return j;
    }
    j["duality_exponent"] = d.duality_exponent;
    j["verdict"] = d.comparison.equal ? "equal" : "mismatch";
    j["comparison"] = comparison_json(d.comparison);
    json lf = json::array();
    for (const auto& s : d.local_factors) lf.push_back({{"degree", s.degree}, {"equal", s.equal}});
    j["local_factors"] = lf;
    j["automorphic_prefactor"] = series_json(d.automorphic_prefactor);
    j["spectral_prefactor"] = series_json(d.spectral_prefactor);
    j["automorphic"] = series_json(d.automorphic);
    j["spectral"] = series_json(d.spectral);
    j["rhs"] = series_json(d.rhs);
    return j;
}

inline json contribution_json(const OrbitContribution& c) {
    json j;
    j["face"] = cone_json(c.orbit.face);
    j["status"] = to_string(c.status);
    if (!c.reason.empty()) j["reason"] = c.reason;
    if (!c.witness.empty()) j["witness"] = c.witness;
    if (!c.note.empty()) j["note"] = c.note;
    if (c.series) j["series"] = series_json(*c.series);
    return j;
}

inline json orbit_pair_json(const OrbitPairReport& p) {
    json j;
    j["direction"] = p.direction;
    j["verdict"] = to_string(p.verdict);
    j["automorphic"] = contribution_json(p.automorphic);
    j["spectral"] = contribution_json(p.spectral);
    if (p.comparison) j["comparison"] = comparison_json(*p.comparison);
    return j;
}

inline json identity_json(const StackIdentity& s) {
    json j;
    j["identity"] = s.label;
    j["applicable"] = s.applicable;
    if (!s.applicable) {
        j["note"] = s.note;
        j["witness"] = witness_json(s.witness);
        return j;
    }
    j["verdict"] = s.comparison.equal ? "equal" : "mismatch";
    j["comparison"] = comparison_json(s.comparison);
    j["lhs"] = series_json(s.lhs);
    j["rhs"] = series_json(s.rhs);
    return j;
}

inline json validation_json(const ValidationReport& v) {
    json a = json::array();
    for (const auto& e : v.entries) {
        json j{{"side", e.side}, {"condition", e.condition}, {"passed", e.passed}};
        if (!e.witness.empty()) j["witness"] = e.witness;
        if (!e.detail.empty()) j["detail"] = e.detail;
        a.push_back(j);
    }
    return a;
}

inline json error_json(const ToricError& e) {
    return {{"kind", e.kind()}, {"message", e.what()}, {"witness", witness_json(e.witness())}};
}

// ---------------------------------------------------------------------------
// Running

struct RunResult {
    json report;
    int exit_code = 0; // 0 pass, 1 check or validation failure
};

namespace detail {

inline json run_weak(const GradedDualPair& pair, const Scenario& s, const EngineOptions& opts, bool& passed) {
    json out = json::array();
    for (const auto& c : s.characters) {
        PeriodReport r = verify_weak_duality(pair, s.curve, c, s.order, opts);
        json dirs = json::array();
        for (const auto& d : r.directions) dirs.push_back(direction_json(d));
        bool ok = r.equal();
        passed = passed && ok;
        out.push_back({{"character", c.name}, {"passed", ok}, {"directions", dirs}});
    }
    return out;
}

inline json run_orbit(const GradedDualPair& pair, const Scenario& s, const EngineOptions& opts, bool& passed) {
    json out = json::array();
    for (const auto& c : s.characters) {
        MonomialCharacter chi = monomial_character(c);
        OrbitwiseReport r = verify_langlands_dual_periods(pair, s.curve, chi, s.order, opts);
        CuspidalityResult cusp = is_cuspidal(pair.side_x, chi);
        GenericityResult gen = is_generic(pair.side_xcheck, chi);
        json table = json::array();
        for (const auto& p : r.pairs) table.push_back(orbit_pair_json(p));
        bool ok = r.ok() && cusp.cuspidal == gen.generic;
        passed = passed && ok;
        out.push_back({{"character", c.name},
                       {"passed", ok},
                       {"cuspidal", cusp.cuspidal},
                       {"generic", gen.generic},
                       {"orbits", table}});
    }
    return out;
}

inline json run_stack(const Scenario& s, const EngineOptions& opts, bool& passed) {
    const std::size_t r = s.rank;
    IsogenyDatum iso = make_isogeny(LatticeMap{r, r, s.isogeny->inclusion});
    InducedGradedPair p = make_induced_pair(make_datum(s.rays, s.rho, s.eta), iso);
    json out = json::array();
    for (const auto& c : s.characters) {
        json j{{"character", c.name}};
        try {
            StackReport rep = verify_stack_duality(p, s.curve, monomial_character(c), s.order, opts);
            j["passed"] = rep.ok();
            json inv = json::array();
            for (const auto& x : rep.invariants) inv.push_back(int_json(x));
            j["index"] = int_json(rep.index);
            j["invariants"] = inv;
            j["stack_datum"] = datum_json(p.stack_datum());
            j["duality_exponent"] = rep.duality_exponent;
            j["identities"] = json::array({identity_json(rep.identity_stack_side), identity_json(rep.identity_unramified)});
            json direct;
            direct["experimental"] = true;
            if (rep.direct) {
                direct["agrees"] = rep.direct->agrees;
                direct["series"] = series_json(rep.direct->series);
                direct["difference"] = series_json(rep.direct->difference);
            } else {
                direct["note"] = rep.direct_note;
            }
            j["direct_model"] = direct;
            passed = passed && rep.ok();
        } catch (const ToricError& e) {
            j["passed"] = false;
            j["error"] = error_json(e);
            passed = false;
        }
        out.push_back(j);
    }
    return out;
}

inline json run_height(const Scenario& s, const EngineOptions& opts, bool& passed) {
    PiecewiseLinearHeight h = make_height(s.rank, s.height->cones, s.height->slopes);
    json out = json::array();
    for (const auto& c : s.characters) {
        MonomialCharacter chi = monomial_character(c);
        BridgeReport b = verify_height_bridge(h, chi, s.order);
        json samples = json::array();
        for (const auto& x : b.samples) {
            json j{{"degree", x.degree}, {"cone", x.cone == h.cones.size() ? json("fan") : json(x.cone)}, {"equal", x.equal}};
            if (!x.equal) j["comparison"] = comparison_json(compare_series(x.height, x.automorphic, s.order));
            samples.push_back(j);
        }
        passed = passed && b.ok();
        out.push_back({{"character", c.name},
                       {"passed", b.ok()},
                       {"samples", samples},
                       {"global", series_json(height_fourier_global(h, s.curve, chi, s.order, opts))}});
    }
    return out;
}

} // namespace detail

// Throws ScenarioError or NotStronglyConvex for input the tool must reject
// outright; everything else ends up in the report.
inline RunResult run_scenario(const Scenario& s, const EngineOptions& opts = {}) {
    RunResult res;
    json& rep = res.report;
    rep["tool"] = "toricdual";
    rep["version"] = kToolVersion;
    rep["seed"] = 0;
    rep["scenario"] = scenario_json(s);

    bool valid = true;
    if (s.has_cone()) {
        GradedToricDatum d;
        try {
            d = make_datum(s.rays, s.rho, s.eta);
        } catch (const DimensionMismatch& e) {
            throw ScenarioError("rays", 0, e.what());
        }
        GradedDualPair pair = unchecked_pair(d);
        ValidationReport v = validate_pair(pair);
        valid = v.ok();
        rep["pair"] = {{"X", datum_json(pair.side_x)}, {"Xcheck", datum_json(pair.side_xcheck)}, {"epsilon", int_json(pair.epsilon)},
                       {"duality_exponent", pair.duality_exponent()}};
        rep["validation"] = {{"passed", valid}, {"entries", validation_json(v)}};
    } else {
        rep["pair"] = nullptr;
        rep["validation"] = nullptr;
    }

    json checks = json::array();
    bool all = valid;
    for (const auto& name : s.checks) {
        json c{{"check", name}};
        if (!valid && name != "height_bridge") {
            c["passed"] = false;
            c["skipped"] = "validation failed";
            checks.push_back(c);
            continue;
        }
        bool passed = true;
        try {
            json results;
            if (name == "weak_duality") results = detail::run_weak(toric_dual(make_datum(s.rays, s.rho, s.eta)), s, opts, passed);
            else if (name == "orbit_duality") results = detail::run_orbit(toric_dual(make_datum(s.rays, s.rho, s.eta)), s, opts, passed);
            else if (name == "stack_duality") results = detail::run_stack(s, opts, passed);
            else results = detail::run_height(s, opts, passed);
            c["passed"] = passed;
            c["results"] = results;
        } catch (const NotStronglyConvex&) {
            throw;
        } catch (const ToricError& e) {
            passed = false;
            c["passed"] = false;
            c["error"] = error_json(e);
        }
        all = all && passed;
        checks.push_back(c);
    }
    rep["checks"] = checks;
    rep["passed"] = all;
    res.exit_code = all ? 0 : 1;
    return res;
}

inline std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

// One line per check and character for the terminal.
inline std::string summarize(const json& rep) {
    std::ostringstream os;
    os << "scenario " << rep["scenario"]["name"].get<std::string>() << "\n";
    if (!rep["validation"].is_null()) {
        os << "  validation: " << (rep["validation"]["passed"].get<bool>() ? "ok" : "FAILED") << "\n";
        for (const auto& e : rep["validation"]["entries"])
            if (!e["passed"].get<bool>()) {
                os << "    " << e["side"].get<std::string>() << " " << e["condition"].get<std::string>();
                if (e.contains("witness")) os << " witness " << e["witness"].dump();
                if (e.contains("detail")) os << " (" << e["detail"].get<std::string>() << ")";
                os << "\n";
            }
    }
    for (const auto& c : rep["checks"]) {
        os << "  " << c["check"].get<std::string>() << ": " << (c["passed"].get<bool>() ? "pass" : "FAIL");
        if (c.contains("skipped")) os << " (" << c["skipped"].get<std::string>() << ")";
        if (c.contains("error")) os << " " << c["error"]["message"].get<std::string>();
        os << "\n";
        if (!c.contains("results")) continue;
        for (const auto& r : c["results"]) {
            os << "    [" << r["character"].get<std::string>() << "] " << (r["passed"].get<bool>() ? "pass" : "FAIL");
            if (r.contains("directions"))
                for (const auto& d : r["directions"]) {
                    os << "  " << d["direction"].get<std::string>() << "=";
                    if (!d["applicable"].get<bool>()) {
                        os << "n/a";
                    } else {
                        os << d["verdict"].get<std::string>();
                        if (!d["comparison"]["first_mismatch"].is_null()) os << "@u^" << d["comparison"]["first_mismatch"]["u"].get<long>();
                    }
                }
            if (r.contains("orbits")) {
                std::map<std::string, int> tally;
                for (const auto& o : r["orbits"]) ++tally[o["verdict"].get<std::string>()];
                for (const auto& [k, n] : tally) os << "  " << k << "=" << n;
            }
            if (r.contains("identities"))
                for (const auto& d : r["identities"]) os << "  " << d["identity"].get<std::string>() << "=" << (d["applicable"].get<bool>() ? d["verdict"].get<std::string>() : "n/a");
            if (r.contains("direct_model") && r["direct_model"].contains("agrees"))
                os << "  direct(experimental)=" << (r["direct_model"]["agrees"].get<bool>() ? "agrees" : "differs");
            if (r.contains("error")) os << "  " << r["error"]["message"].get<std::string>();
            os << "\n";
        }
    }
    os << (rep["passed"].get<bool>() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

} // namespace toricdual
