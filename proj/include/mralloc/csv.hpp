#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "mralloc/config.hpp"

namespace mralloc {

/// Fixed, locale-independent float formatting so that identical runs
/// produce byte-identical CSV.
inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string csv_num(int v) { return std::to_string(v); }

inline void csv_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

/// Canonical one-line rendering of the fully resolved configuration,
/// written as a comment at the top of every CSV.
inline std::string resolved_config_line(const RunConfig& cfg) {
    const auto& p = cfg.params;
    std::string s;
    auto add = [&](const std::string& k, const std::string& v) {
        if (!s.empty()) s += ' ';
        s += k + "=" + v;
    };
    add("bandwidth_hz", csv_num(p.bandwidth_hz));
    add("n_subcarriers", csv_num(p.n_subcarriers));
    add("power_w", csv_num(p.power_w));
    add("noise_density_w_hz", csv_num(p.noise_density_w_hz));
    add("carrier_hz", csv_num(p.carrier_hz));
    add("velocity_m_s", csv_num(p.velocity_m_s));
    add("pathloss_exponent", csv_num(p.pathloss_exponent));
    add("cell_radius_m", csv_num(p.cell_radius_m));
    add("vertical_distance_m", csv_num(p.vertical_distance_m));
    add("n_users", csv_num(p.n_users));
    add("sched_period_s", csv_num(p.sched_period_s));
    add("slot_s", csv_num(p.slot_s));
    add("rho", csv_num(p.rho));
    add("beta_step", csv_num(p.beta_step));
    add("lightspeed_m_s", csv_num(p.lightspeed_m_s));
    add("cp_s", csv_num(p.cp_s));
    add("delay_sigma_s", csv_num(cfg.profile.sigma_s));
    {
        std::string taps_d, taps_p;
        for (std::size_t i = 0; i < cfg.profile.taps.size(); ++i) {
            if (i) { taps_d += ','; taps_p += ','; }
            taps_d += csv_num(cfg.profile.taps[i].delay_s);
            taps_p += csv_num(cfg.profile.taps[i].power);
        }
        add("tap_delays_s", taps_d);
        add("tap_powers", taps_p);
    }
    {
        std::string groups;
        for (std::size_t i = 0; i < cfg.population.groups.size(); ++i) {
            if (i) groups += ',';
            groups += csv_num(cfg.population.groups[i].distance_m) + ":" +
                      csv_num(cfg.population.groups[i].count);
        }
        add("user_groups", groups);
    }
    add("seed", std::to_string(cfg.seed));
    add("ici_window", csv_num(cfg.ici_window));
    add("with_ici", cfg.with_ici ? "on" : "off");
    add("doppler_attenuation", cfg.doppler_attenuation ? "on" : "off");
    add("grid_resolution", csv_num(cfg.grid_resolution));
    add("mc_trials", csv_num(cfg.mc_trials));
    add("mc_slots", csv_num(cfg.mc_slots));
    add("cpsa_variant", cfg.cpsa_variant);
    return s;
}

}  // namespace mralloc
