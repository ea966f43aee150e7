#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mralloc/capacity.hpp"
#include "mralloc/channel.hpp"
#include "mralloc/ici.hpp"
#include "mralloc/params.hpp"

namespace mralloc {

/// Everything a run needs: system constants, user population, delay
/// profile, and the knobs of the individual subcommands.  Defaults
/// reproduce the common simulation parameter set.
struct RunConfig {
    SystemParams params;
    UserPopulation population = default_population();
    DelayProfile profile = default_delay_profile();
    std::uint64_t seed = 1;
    int ici_window = 5;
    bool with_ici = true;
    bool doppler_attenuation = true;
    double grid_resolution = 1e-3;
    int mc_trials = 10000;
    int mc_slots = 10000;
    std::string cpsa_variant = "all";  ///< pl | bl | i | all

    void validate() const {
        params.validate();
        population.validate(params);
        normalize_profile(profile);  // throws on malformed taps
        if (ici_window < 1 || 2 * ici_window >= params.n_subcarriers) {
            throw std::invalid_argument("ici_window must be in [1, N/2)");
        }
        if (!(grid_resolution > 0.0 && grid_resolution <= 0.1)) {
            throw std::invalid_argument("grid_resolution must be in (0, 0.1]");
        }
        if (mc_trials < 1) throw std::invalid_argument("mc_trials must be >= 1");
        if (mc_slots < 1000) {
            throw std::invalid_argument("mc_slots must be >= 1000");
        }
        if (cpsa_variant != "pl" && cpsa_variant != "bl" && cpsa_variant != "i" &&
            cpsa_variant != "all") {
            throw std::invalid_argument("cpsa_variant must be pl, bl, i or all");
        }
    }

    CapacityOptions capacity_options() const;
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key +
                                    "': expected a number, got '" + value + "'");
    }
    if (used != value.size()) {
        throw std::invalid_argument("config key '" + key +
                                    "': trailing characters in '" + value + "'");
    }
    return v;
}

inline long parse_long(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    const long l = static_cast<long>(v);
    if (static_cast<double>(l) != v) {
        throw std::invalid_argument("config key '" + key +
                                    "': expected an integer, got '" + value + "'");
    }
    return l;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw std::invalid_argument("config key '" + key +
                                "': expected on/off, got '" + value + "'");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace detail

/// Applies one key=value setting.  Unknown keys are rejected.
inline void apply_config_entry(RunConfig& cfg, const std::string& key,
                               const std::string& value) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_long;
    auto& p = cfg.params;
    if (key == "bandwidth_hz") p.bandwidth_hz = parse_double(key, value);
    else if (key == "n_subcarriers") p.n_subcarriers = static_cast<int>(parse_long(key, value));
    else if (key == "power_w") p.power_w = parse_double(key, value);
    else if (key == "noise_density_w_hz") p.noise_density_w_hz = parse_double(key, value);
    else if (key == "carrier_hz") p.carrier_hz = parse_double(key, value);
    else if (key == "velocity_m_s") p.velocity_m_s = parse_double(key, value);
    else if (key == "pathloss_exponent") p.pathloss_exponent = parse_double(key, value);
    else if (key == "cell_radius_m") p.cell_radius_m = parse_double(key, value);
    else if (key == "vertical_distance_m") p.vertical_distance_m = parse_double(key, value);
    else if (key == "n_users") p.n_users = static_cast<int>(parse_long(key, value));
    else if (key == "sched_period_s") p.sched_period_s = parse_double(key, value);
    else if (key == "slot_s") p.slot_s = parse_double(key, value);
    else if (key == "rho") p.rho = parse_double(key, value);
    else if (key == "beta_step") p.beta_step = parse_double(key, value);
    else if (key == "lightspeed_m_s") p.lightspeed_m_s = parse_double(key, value);
    else if (key == "cp_s") p.cp_s = parse_double(key, value);
    else if (key == "delay_sigma_s") cfg.profile.sigma_s = parse_double(key, value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_long(key, value));
    else if (key == "ici_window") cfg.ici_window = static_cast<int>(parse_long(key, value));
    else if (key == "with_ici") cfg.with_ici = parse_bool(key, value);
    else if (key == "doppler_attenuation") cfg.doppler_attenuation = parse_bool(key, value);
    else if (key == "grid_resolution") cfg.grid_resolution = parse_double(key, value);
    else if (key == "mc_trials") cfg.mc_trials = static_cast<int>(parse_long(key, value));
    else if (key == "mc_slots") cfg.mc_slots = static_cast<int>(parse_long(key, value));
    else if (key == "cpsa_variant") cfg.cpsa_variant = value;
    else if (key == "user_groups") {
        // distance:count, comma separated
        UserPopulation pop;
        for (const auto& part : detail::split(value, ',')) {
            const auto bits = detail::split(detail::trim(part), ':');
            if (bits.size() != 2) {
                throw std::invalid_argument(
                    "config key 'user_groups': expected distance:count entries");
            }
            UserGroup g;
            g.distance_m = parse_double(key, detail::trim(bits[0]));
            g.count = static_cast<int>(parse_long(key, detail::trim(bits[1])));
            pop.groups.push_back(g);
        }
        cfg.population = pop;
    } else if (key == "tap_delays_s" || key == "tap_powers") {
        const auto parts = detail::split(value, ',');
        if (cfg.profile.taps.size() != parts.size()) cfg.profile.taps.resize(parts.size());
        for (std::size_t i = 0; i < parts.size(); ++i) {
            const double v = parse_double(key, detail::trim(parts[i]));
            if (key == "tap_delays_s") cfg.profile.taps[i].delay_s = v;
            else cfg.profile.taps[i].power = v;
        }
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

/// key = value lines; '#' starts a comment; blank lines ignored.
inline RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        }
        apply_config_entry(cfg, detail::trim(line.substr(0, eq)),
                           detail::trim(line.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

inline CapacityOptions RunConfig::capacity_options() const {
    CapacityOptions opt;
    opt.method = ErgodicMethod::cached_table;
    opt.doppler_attenuation = doppler_attenuation;
    opt.ici.window = ici_window;
    return opt;
}

}  // namespace mralloc
