// SPDX-License-Identifier: Apache-2.0
#include "dfrc/config.hpp"

#include "dfrc/errors.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace dfrc {

using nlohmann::json;

namespace {

template <class T>
T get(const json& j, const char* key, const char* where) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string(where) + "." + key + ": " + e.what());
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const char* where) {
    return j.contains(key) ? get<T>(j, key, where) : fallback;
}

void only_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
    for (const auto& [k, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw ConfigError(std::string(where) + ": unknown key '" + k + "'");
    }
}

AngleDb angle_db(const json& j, const char* where) {
    only_keys(j, {"angle_deg", "power_db"}, where);
    return {get<double>(j, "angle_deg", where), get<double>(j, "power_db", where)};
}

json to_json(const AngleDb& a) { return {{"angle_deg", a.angle_deg}, {"power_db", a.power_db}}; }

SweepSpec sweep(const json& j, const char* where) {
    only_keys(j, {"start", "stop", "step"}, where);
    return {get<double>(j, "start", where), get<double>(j, "stop", where), get<double>(j, "step", where)};
}

json to_json(const SweepSpec& s) { return {{"start", s.start}, {"stop", s.stop}, {"step", s.step}}; }

CVector complex_vector(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("channel vectors must be non-empty arrays");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string()) throw ConfigError("channel entries must be strings like \"0.1-0.2j\"");
        v[static_cast<Eigen::Index>(i)] = parse_complex(j[i].get<std::string>());
    }
    return v;
}

ModeSelect mode_from(const std::string& s) {
    if (s == "non-dedicated") return ModeSelect::NonDedicated;
    if (s == "dedicated") return ModeSelect::Dedicated;
    if (s == "both") return ModeSelect::Both;
    throw ConfigError("mode must be non-dedicated, dedicated or both");
}

}  // namespace

std::vector<double> SweepSpec::values() const {
    if (!(step > 0) || !std::isfinite(start) || !std::isfinite(stop)) throw ConfigError("sweep needs step > 0");
    std::vector<double> out;
    for (long i = 0;; ++i) {
        // rounded to 1e-9 so that grids like -90:0.05:90 print cleanly
        const double v = std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9;
        if (v > stop + step * 1e-6) break;
        out.push_back(v);
    }
    return out;
}

bool ChannelSpec::operator==(const ChannelSpec& o) const {
    if (rayleigh != o.rayleigh || count != o.count || seed != o.seed) return false;
    if (explicit_channels.size() != o.explicit_channels.size()) return false;
    for (std::size_t i = 0; i < explicit_channels.size(); ++i) {
        if (explicit_channels[i].size() != o.explicit_channels[i].size()) return false;
        if (explicit_channels[i] != o.explicit_channels[i]) return false;
    }
    return true;
}

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
    return id == o.id && geometry == o.geometry && target == o.target && interferers == o.interferers &&
           p0_dbm == o.p0_dbm && channels == o.channels && gammas_db == o.gammas_db && mode == o.mode &&
           mc_trials == o.mc_trials && simulate == o.simulate && sim.n_symbols == o.sim.n_symbols &&
           sim.seed == o.sim.seed && sim.draw_interferer_phase == o.sim.draw_interferer_phase &&
           sim.workers == o.sim.workers && sim.cancel_probe == o.sim.cancel_probe &&
           convergence_delta == o.convergence_delta && max_iters == o.max_iters && angle_grid == o.angle_grid &&
           antenna_counts == o.antenna_counts && user_counts == o.user_counts && output_path == o.output_path;
}

std::vector<double> ScenarioConfig::gammas_db_list() const {
    if (const auto* s = std::get_if<SweepSpec>(&gammas_db)) return s->values();
    return std::get<std::vector<double>>(gammas_db);
}

ArrayGeometry ScenarioConfig::geometry_for(int n) const {
    return ArrayGeometry(n, n, geometry.spacing_tx, geometry.spacing_rx);
}

ChannelSet ScenarioConfig::explicit_channels_for(int n, std::size_t k) const {
    std::vector<CVector> picked;
    for (const auto& h : channels.explicit_channels)
        if (h.size() == n && picked.size() < k) picked.push_back(h);
    if (picked.size() < k) throw ConfigError("not enough channel vectors of length " + std::to_string(n));
    return ChannelSet(picked);
}

void ScenarioConfig::finalize() {
    try {
        geometry = ArrayGeometry(geometry.n_tx, geometry.n_rx, geometry.spacing_tx, geometry.spacing_rx);
        std::vector<Interferer> itf;
        for (const auto& i : interferers) itf.push_back({deg_to_rad(i.angle_deg), from_db(i.power_db)});
        scene_ = Scene(deg_to_rad(target.angle_deg), from_db(target.power_db), itf);
        sim.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (!std::isfinite(p0_dbm)) throw ConfigError("p0_dbm must be finite");
    // noise power is the unit, so dBm maps straight to the linear budget
    p0_ = from_db(p0_dbm);
    if (channels.rayleigh == !channels.explicit_channels.empty())
        throw ConfigError("channels must be either explicit or rayleigh");
    if (channels.rayleigh && channels.count < 1) throw ConfigError("rayleigh channel count must be positive");
    for (double g : gammas_db_list())
        if (!std::isfinite(g)) throw ConfigError("gamma values must be finite");
    if (mc_trials < 0) throw ConfigError("mc_trials must be non-negative");
    if (!(convergence_delta > 0) || max_iters < 1) throw ConfigError("solver settings out of range");
    angle_grid.values();
    for (int n : antenna_counts)
        if (n < 1) throw ConfigError("antenna counts must be positive");
    for (int k : user_counts)
        if (k < 1) throw ConfigError("user counts must be positive");
}

ScenarioConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    only_keys(j,
              {"id", "geometry", "scene", "p0_dbm", "channels", "gammas_db", "mode", "mc_trials", "simulate", "sim",
               "solver", "angle_grid_deg", "antenna_counts", "user_counts", "output_path"},
              "config");
    ScenarioConfig c;
    c.id = get_or<std::string>(j, "id", c.id, "config");

    const auto& g = j.at("geometry");
    only_keys(g, {"n_tx", "n_rx", "spacing_tx", "spacing_rx"}, "geometry");
    c.geometry.n_tx = get<int>(g, "n_tx", "geometry");
    c.geometry.n_rx = get<int>(g, "n_rx", "geometry");
    c.geometry.spacing_tx = get_or<double>(g, "spacing_tx", 0.5, "geometry");
    c.geometry.spacing_rx = get_or<double>(g, "spacing_rx", 0.5, "geometry");

    const auto& s = j.at("scene");
    only_keys(s, {"target", "interferers"}, "scene");
    c.target = angle_db(s.at("target"), "scene.target");
    if (s.contains("interferers"))
        for (const auto& i : s.at("interferers")) c.interferers.push_back(angle_db(i, "scene.interferers[]"));

    c.p0_dbm = get<double>(j, "p0_dbm", "config");

    const auto& ch = j.at("channels");
    only_keys(ch, {"explicit", "rayleigh"}, "channels");
    if (ch.contains("explicit"))
        for (const auto& v : ch.at("explicit")) c.channels.explicit_channels.push_back(complex_vector(v));
    if (ch.contains("rayleigh")) {
        const auto& r = ch.at("rayleigh");
        only_keys(r, {"count", "seed"}, "channels.rayleigh");
        c.channels.rayleigh = true;
        c.channels.count = get<int>(r, "count", "channels.rayleigh");
        c.channels.seed = get_or<std::uint64_t>(r, "seed", 0, "channels.rayleigh");
    }

    if (j.contains("gammas_db")) {
        const auto& gd = j.at("gammas_db");
        if (gd.is_array()) c.gammas_db = gd.get<std::vector<double>>();
        else c.gammas_db = sweep(gd, "gammas_db");
    }
    c.mode = mode_from(get_or<std::string>(j, "mode", "non-dedicated", "config"));
    c.mc_trials = get_or<int>(j, "mc_trials", 0, "config");
    c.simulate = get_or<bool>(j, "simulate", false, "config");
    if (j.contains("sim")) {
        const auto& sm = j.at("sim");
        only_keys(sm, {"n_symbols", "seed", "draw_interferer_phase", "workers", "cancel_probe"}, "sim");
        c.sim.n_symbols = get_or<long>(sm, "n_symbols", c.sim.n_symbols, "sim");
        c.sim.seed = get_or<std::uint64_t>(sm, "seed", c.sim.seed, "sim");
        c.sim.draw_interferer_phase = get_or<bool>(sm, "draw_interferer_phase", true, "sim");
        c.sim.workers = get_or<int>(sm, "workers", 1, "sim");
        c.sim.cancel_probe = get_or<bool>(sm, "cancel_probe", true, "sim");
    }
    if (j.contains("solver")) {
        const auto& sv = j.at("solver");
        only_keys(sv, {"convergence_delta", "max_iters"}, "solver");
        c.convergence_delta = get_or<double>(sv, "convergence_delta", c.convergence_delta, "solver");
        c.max_iters = get_or<int>(sv, "max_iters", c.max_iters, "solver");
    }
    if (j.contains("angle_grid_deg")) c.angle_grid = sweep(j.at("angle_grid_deg"), "angle_grid_deg");
    c.antenna_counts = get_or<std::vector<int>>(j, "antenna_counts", {}, "config");
    c.user_counts = get_or<std::vector<int>>(j, "user_counts", {}, "config");
    c.output_path = get_or<std::string>(j, "output_path", "", "config");
    c.finalize();
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const ScenarioConfig& c) {
    json j;
    j["id"] = c.id;
    j["geometry"] = {{"n_tx", c.geometry.n_tx},
                     {"n_rx", c.geometry.n_rx},
                     {"spacing_tx", c.geometry.spacing_tx},
                     {"spacing_rx", c.geometry.spacing_rx}};
    json itf = json::array();
    for (const auto& i : c.interferers) itf.push_back(to_json(i));
    j["scene"] = {{"target", to_json(c.target)}, {"interferers", itf}};
    j["p0_dbm"] = c.p0_dbm;
    json ch = json::object();
    if (!c.channels.explicit_channels.empty()) {
        json list = json::array();
        for (const auto& h : c.channels.explicit_channels) {
            json v = json::array();
            for (Eigen::Index i = 0; i < h.size(); ++i) v.push_back(format_complex(h[i]));
            list.push_back(v);
        }
        ch["explicit"] = list;
    }
    if (c.channels.rayleigh) ch["rayleigh"] = {{"count", c.channels.count}, {"seed", c.channels.seed}};
    j["channels"] = ch;
    if (const auto* s = std::get_if<SweepSpec>(&c.gammas_db)) j["gammas_db"] = to_json(*s);
    else j["gammas_db"] = std::get<std::vector<double>>(c.gammas_db);
    j["mode"] = to_string(c.mode);
    j["mc_trials"] = c.mc_trials;
    j["simulate"] = c.simulate;
    j["sim"] = {{"n_symbols", c.sim.n_symbols},
                {"seed", c.sim.seed},
                {"draw_interferer_phase", c.sim.draw_interferer_phase},
                {"workers", c.sim.workers},
                {"cancel_probe", c.sim.cancel_probe}};
    j["solver"] = {{"convergence_delta", c.convergence_delta}, {"max_iters", c.max_iters}};
    j["angle_grid_deg"] = to_json(c.angle_grid);
    j["antenna_counts"] = c.antenna_counts;
    j["user_counts"] = c.user_counts;
    j["output_path"] = c.output_path;
    return j.dump(2) + "\n";
}

std::string format_complex(cplx z) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
    return buf;
}

cplx parse_complex(const std::string& raw) {
    std::string s;
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw ConfigError("empty complex literal");
    const char last = s.back();
    const bool imaginary = last == 'j' || last == 'i';
    if (!imaginary) {
        std::size_t used = 0;
        double re = 0;
        try {
            re = std::stod(s, &used);
        } catch (const std::exception&) {
            throw ConfigError("bad complex literal '" + raw + "'");
        }
        if (used != s.size()) throw ConfigError("bad complex literal '" + raw + "'");
        return {re, 0.0};
    }
    s.pop_back();
    // split at the last sign that is not part of an exponent
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto number = [&](const std::string& t) {
        if (t == "+" || t == "" ) return 1.0;
        if (t == "-") return -1.0;
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            throw ConfigError("bad complex literal '" + raw + "'");
        }
        if (used != t.size()) throw ConfigError("bad complex literal '" + raw + "'");
        return v;
    };
    if (split == std::string::npos) return {0.0, number(s)};
    return {number(s.substr(0, split)), number(s.substr(split))};
}

std::string to_string(ModeSelect m) {
    switch (m) {
        case ModeSelect::NonDedicated: return "non-dedicated";
        case ModeSelect::Dedicated: return "dedicated";
        case ModeSelect::Both: return "both";
    }
    return "unknown";
}

}  // namespace dfrc
