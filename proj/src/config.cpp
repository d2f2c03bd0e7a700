// Copyright 2026 The sqlsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sqlsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace sqlsim {

namespace {

using nlohmann::json;

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

void check_keys(const json& obj, const std::string& where, const std::vector<std::string>& allowed) {
    if (!obj.is_object()) throw std::invalid_argument("config: '" + where + "' must be an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
        std::string best;
        std::size_t best_dist = 3;  // suggest only close matches
        for (const auto& cand : allowed) {
            const std::size_t d = edit_distance(key, cand);
            if (d < best_dist) {
                best_dist = d;
                best = cand;
            }
        }
        std::string msg = "config: unknown key '" + key + "' in " + where;
        if (!best.empty()) msg += "; did you mean '" + best + "'?";
        throw std::invalid_argument(msg);
    }
}

double get_number(const json& obj, const std::string& where, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw std::invalid_argument("config: '" + where + "." + key + "' must be a number");
    return obj[key].get<double>();
}

std::uint64_t get_uint(const json& obj, const std::string& where, const std::string& key, std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_unsigned())
        throw std::invalid_argument("config: '" + where + "." + key + "' must be a non-negative integer");
    return obj[key].get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& where, const std::string& key,
                       const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string())
        throw std::invalid_argument("config: '" + where + "." + key + "' must be a string");
    return obj[key].get<std::string>();
}

void forbid(const json& obj, const std::string& where, const std::string& type,
            const std::vector<std::string>& keys) {
    for (const auto& k : keys)
        if (obj.contains(k))
            throw std::invalid_argument("config: key '" + k + "' is not valid in " + where + " for type '" + type +
                                        "'");
}

GaussianState parse_state(const json& obj, const std::string& where, const PhysicalUnits& units,
                          const json& defaults, json& echo) {
    static const std::vector<std::string> keys = {"type", "q0",    "k0",    "delta_sq", "xi",
                                                  "mu_re", "mu_im", "nu_re", "nu_im",    "p0"};
    check_keys(obj, where, keys);
    const std::string type = get_string(obj, where, "type", defaults.value("type", "muw"));
    echo["type"] = type;
    if (type == "muw") {
        forbid(obj, where, type, {"xi", "mu_re", "mu_im", "nu_re", "nu_im", "p0"});
        const double q0 = get_number(obj, where, "q0", defaults.value("q0", 0.0));
        const double k0 = get_number(obj, where, "k0", defaults.value("k0", 0.0));
        const double delta_sq = get_number(obj, where, "delta_sq", defaults.value("delta_sq", 0.5));
        echo["q0"] = q0;
        echo["k0"] = k0;
        echo["delta_sq"] = delta_sq;
        return make_muw(q0, k0, delta_sq, units);
    }
    if (type == "tcs") {
        forbid(obj, where, type, {"k0", "delta_sq"});
        const double q0 = get_number(obj, where, "q0", 0.0);
        const double p0 = get_number(obj, where, "p0", 0.0);
        echo["q0"] = q0;
        echo["p0"] = p0;
        const bool has_xi = obj.contains("xi");
        const bool has_munu = obj.contains("mu_re") || obj.contains("mu_im") || obj.contains("nu_re") ||
                              obj.contains("nu_im");
        if (has_xi && has_munu)
            throw std::invalid_argument("config: " + where + " gives both 'xi' and explicit mu/nu");
        if (has_munu) {
            const cdouble mu(get_number(obj, where, "mu_re", 1.0), get_number(obj, where, "mu_im", 0.0));
            const cdouble nu(get_number(obj, where, "nu_re", 0.0), get_number(obj, where, "nu_im", 0.0));
            echo["mu_re"] = mu.real();
            echo["mu_im"] = mu.imag();
            echo["nu_re"] = nu.real();
            echo["nu_im"] = nu.imag();
            return make_tcs(mu, nu, cdouble(q0, p0), units);
        }
        const double xi = get_number(obj, where, "xi", defaults.value("xi", 1.0));
        echo["xi"] = xi;
        return make_tcs_with_xi(xi, cdouble(q0, p0), units);
    }
    throw std::invalid_argument("config: " + where + ".type must be 'muw' or 'tcs' (got '" + type + "')");
}

SchemeDescriptor parse_scheme(const json& obj, const PhysicalUnits& units, Experiment experiment, json& echo) {
    static const std::vector<std::string> keys = {"type",      "probe",     "target",        "zeta_z",
                                                  "zeta_plus", "zeta_minus", "alpha_mag",    "r",
                                                  "l_tau",     "feedback_gain", "presqueeze"};
    check_keys(obj, "scheme", keys);
    const std::string default_type = experiment == Experiment::rp_montecarlo ? "rp_small_q" : "three_step";
    const std::string type = get_string(obj, "scheme", "type", default_type);
    echo["type"] = type;

    const auto parse_probe = [&](const char* key) {
        json probe_echo;
        json defaults = json::object({{"type", "muw"}, {"delta_sq", 0.5}});
        GaussianState s = obj.contains(key) ? parse_state(obj.at(key), std::string("scheme.") + key, units,
                                                          defaults, probe_echo)
                                            : make_muw(0.0, 0.0, 0.5, units);
        if (!obj.contains(key)) {
            probe_echo["type"] = "muw";
            probe_echo["q0"] = 0.0;
            probe_echo["k0"] = 0.0;
            probe_echo["delta_sq"] = 0.5;
        }
        echo[key] = probe_echo;
        return s;
    };

    if (type == "von_neumann") {
        forbid(obj, "scheme", type,
               {"target", "zeta_z", "zeta_plus", "zeta_minus", "alpha_mag", "r", "l_tau", "feedback_gain",
                "presqueeze"});
        return VonNeumannScheme{parse_probe("probe")};
    }
    if (type == "three_step") {
        forbid(obj, "scheme", type, {"target", "alpha_mag", "r", "l_tau", "feedback_gain", "presqueeze"});
        const double zeta_z = get_number(obj, "scheme", "zeta_z", std::log(2.0));
        ThreeStepParams params;
        if (obj.contains("zeta_plus") || obj.contains("zeta_minus")) {
            params.zeta_z = zeta_z;
            params.zeta_plus = get_number(obj, "scheme", "zeta_plus", 0.0);
            params.zeta_minus = get_number(obj, "scheme", "zeta_minus", 0.0);
        } else {
            params = breaching_three_step(zeta_z);
        }
        echo["zeta_z"] = params.zeta_z;
        echo["zeta_plus"] = params.zeta_plus;
        echo["zeta_minus"] = params.zeta_minus;
        return ThreeStepScheme{params, parse_probe("probe")};
    }
    if (type == "gordon_louisell") {
        forbid(obj, "scheme", type,
               {"probe", "zeta_z", "zeta_plus", "zeta_minus", "alpha_mag", "r", "l_tau", "feedback_gain",
                "presqueeze"});
        json target_echo;
        json defaults = json::object({{"type", "tcs"}, {"xi", 1.0}});
        GaussianState target = obj.contains("target")
                                   ? parse_state(obj.at("target"), "scheme.target", units, defaults, target_echo)
                                   : make_tcs_with_xi(1.0, 0.0, units);
        if (!obj.contains("target")) {
            target_echo["type"] = "tcs";
            target_echo["xi"] = 1.0;
        }
        echo["target"] = target_echo;
        return GordonLouisellScheme{target};
    }
    if (type == "rp_small_q" || type == "rp_full") {
        forbid(obj, "scheme", type, {"probe", "target", "zeta_z", "zeta_plus", "zeta_minus"});
        RadiationPressureParams p;
        p.alpha_mag = get_number(obj, "scheme", "alpha_mag", 1.0e3);
        p.squeeze_r = get_number(obj, "scheme", "r", 0.0);
        p.l_tau = get_number(obj, "scheme", "l_tau", 1.0);
        p.feedback_gain = get_number(obj, "scheme", "feedback_gain", 1.0);
        p.presqueeze = get_number(obj, "scheme", "presqueeze", 0.0);
        echo["alpha_mag"] = p.alpha_mag;
        echo["r"] = p.squeeze_r;
        echo["l_tau"] = p.l_tau;
        echo["feedback_gain"] = p.feedback_gain;
        echo["presqueeze"] = p.presqueeze;
        if (type == "rp_small_q") return RadiationPressureSmallQ{p};
        return RadiationPressureFull{p};
    }
    throw std::invalid_argument("config: scheme.type must be one of von_neumann, three_step, gordon_louisell, "
                                "rp_small_q, rp_full (got '" +
                                type + "')");
}

}  // namespace

Experiment experiment_from_name(const std::string& name) {
    if (name == "scheme-check") return Experiment::scheme_check;
    if (name == "sql-sweep") return Experiment::sql_sweep;
    if (name == "rp-montecarlo") return Experiment::rp_montecarlo;
    if (name == "oracle-validate") return Experiment::oracle_validate;
    if (name == "variance-curves") return Experiment::variance_curves;
    throw std::invalid_argument("unknown experiment '" + name +
                                "'; expected scheme-check, sql-sweep, rp-montecarlo, oracle-validate or "
                                "variance-curves");
}

std::string experiment_name(Experiment e) {
    switch (e) {
        case Experiment::scheme_check: return "scheme-check";
        case Experiment::sql_sweep: return "sql-sweep";
        case Experiment::rp_montecarlo: return "rp-montecarlo";
        case Experiment::oracle_validate: return "oracle-validate";
        case Experiment::variance_curves: return "variance-curves";
    }
    return "unknown";
}

RunConfig parse_config(const std::string& text, Experiment experiment) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    check_keys(doc, "top level", {"units", "prior", "scheme", "run", "grid", "sweep"});

    json echo;
    PhysicalUnits units;
    {
        const json u = doc.value("units", json::object());
        check_keys(u, "units", {"hbar", "mass", "omega"});
        units.hbar = get_number(u, "units", "hbar", 1.0);
        units.mass = get_number(u, "units", "mass", 1.0);
        units.omega = get_number(u, "units", "omega", 1.0);
        units.validate();
        echo["units"] = {{"hbar", units.hbar}, {"mass", units.mass}, {"omega", units.omega}};
    }

    const bool rp = experiment == Experiment::rp_montecarlo;
    json prior_defaults = json::object({{"type", "muw"},
                                        {"q0", 0.0},
                                        {"k0", 0.0},
                                        {"delta_sq", rp ? 1.0e-4 : 0.5}});
    json prior_echo;
    GaussianState prior = doc.contains("prior")
                              ? parse_state(doc.at("prior"), "prior", units, prior_defaults, prior_echo)
                              : make_muw(0.0, 0.0, rp ? 1.0e-4 : 0.5, units);
    if (!doc.contains("prior")) prior_echo = prior_defaults;
    echo["prior"] = prior_echo;

    json scheme_echo;
    SchemeDescriptor scheme = doc.contains("scheme")
                                  ? parse_scheme(doc.at("scheme"), units, experiment, scheme_echo)
                                  : (rp ? SchemeDescriptor(RadiationPressureSmallQ{RadiationPressureParams{}})
                                        : SchemeDescriptor(ThreeStepScheme{breaching_three_step(std::log(2.0)),
                                                                           make_muw(0.0, 0.0, 0.5, units)}));
    if (!doc.contains("scheme")) {
        if (rp) {
            scheme_echo = {{"type", "rp_small_q"}, {"alpha_mag", 1.0e3}, {"r", 0.0},
                           {"l_tau", 1.0},         {"feedback_gain", 1.0}, {"presqueeze", 0.0}};
        } else {
            const ThreeStepParams p = breaching_three_step(std::log(2.0));
            scheme_echo = {{"type", "three_step"},
                           {"zeta_z", p.zeta_z},
                           {"zeta_plus", p.zeta_plus},
                           {"zeta_minus", p.zeta_minus},
                           {"probe", {{"type", "muw"}, {"q0", 0.0}, {"k0", 0.0}, {"delta_sq", 0.5}}}};
        }
    }
    echo["scheme"] = scheme_echo;
    validate_scheme(scheme, units);

    if (rp && !is_grid_backed(scheme) && !std::holds_alternative<RadiationPressureSmallQ>(scheme))
        throw std::invalid_argument("config: rp-montecarlo requires scheme.type rp_small_q or rp_full");

    RunConfig cfg{experiment, units, prior, scheme, 1.0, 10000, 20260809, 0, 4096, 12.0, false, {0.5, 1.0, 2.0, 4.0}, ""};
    {
        const json r = doc.value("run", json::object());
        check_keys(r, "run", {"t_f", "n_trials", "seed", "emit_trials"});
        cfg.t_f = get_number(r, "run", "t_f", rp ? 1.0e-6 : 1.0);
        if (!(cfg.t_f > 0.0)) throw std::invalid_argument("config: run.t_f must be positive");
        cfg.n_trials = static_cast<std::size_t>(get_uint(r, "run", "n_trials", 10000));
        if (cfg.n_trials < 1) throw std::invalid_argument("config: run.n_trials must be at least 1");
        cfg.seed = get_uint(r, "run", "seed", 20260809);
        cfg.emit_trials = static_cast<std::size_t>(get_uint(r, "run", "emit_trials", 0));
        echo["run"] = {{"t_f", cfg.t_f}, {"n_trials", cfg.n_trials}, {"seed", cfg.seed},
                       {"emit_trials", cfg.emit_trials}};
    }
    {
        const json g = doc.value("grid", json::object());
        check_keys(g, "grid", {"n_points", "span_sigmas", "dump"});
        cfg.grid_points = static_cast<std::size_t>(get_uint(g, "grid", "n_points", 4096));
        cfg.grid_span_sigmas = get_number(g, "grid", "span_sigmas", 12.0);
        if (g.contains("dump")) {
            if (!g["dump"].is_boolean()) throw std::invalid_argument("config: grid.dump must be a boolean");
            cfg.grid_dump = g["dump"].get<bool>();
        }
        Grid probe{-1.0, 1.0, cfg.grid_points};
        probe.validate();  // power of two, >= 256
        if (!(cfg.grid_span_sigmas >= 12.0))
            throw std::invalid_argument("config: grid.span_sigmas must be at least 12");
        echo["grid"] = {{"n_points", cfg.grid_points}, {"span_sigmas", cfg.grid_span_sigmas},
                        {"dump", cfg.grid_dump}};
    }
    {
        const json s = doc.value("sweep", json::object());
        check_keys(s, "sweep", {"zeta_z"});
        if (s.contains("zeta_z")) {
            if (!s["zeta_z"].is_array() || s["zeta_z"].empty())
                throw std::invalid_argument("config: sweep.zeta_z must be a non-empty array of numbers");
            cfg.sweep_zeta_z.clear();
            for (const auto& v : s["zeta_z"]) {
                if (!v.is_number()) throw std::invalid_argument("config: sweep.zeta_z entries must be numbers");
                cfg.sweep_zeta_z.push_back(v.get<double>());
            }
        }
        echo["sweep"] = {{"zeta_z", cfg.sweep_zeta_z}};
    }
    echo["experiment"] = experiment_name(experiment);
    cfg.config_echo = echo.dump();
    return cfg;
}

}  // namespace sqlsim
