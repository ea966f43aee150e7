#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mralloc/capacity.hpp"
#include "mralloc/config.hpp"
#include "mralloc/csv.hpp"
#include "mralloc/mc_oracle.hpp"
#include "mralloc/optimizer.hpp"
#include "mralloc/scenario.hpp"

namespace mralloc {

/// Per-period geometry table.
inline int run_trajectory(const RunConfig& cfg, std::ostream& out) {
    const Trajectory traj = derive_trajectory(cfg.params);
    out << "# " << resolved_config_line(cfg) << '\n';
    csv_row(out, {"i", "t_seconds", "mr_distance_m", "pathloss_linear",
                  "doppler_hz"});
    for (const auto& p : traj.periods) {
        csv_row(out, {csv_num(p.index), csv_num(p.time_s),
                      csv_num(p.mr_distance_m), csv_num(p.pathloss),
                      csv_num(p.doppler_hz)});
    }
    return 0;
}

/// Exact vs approximate ICI coefficients at the cell-edge Doppler.
inline int run_ici_table(const RunConfig& cfg, std::ostream& out) {
    const Trajectory traj = derive_trajectory(cfg.params);
    const double fd = traj.periods.back().doppler_hz;
    const double symbol = cfg.params.symbol_s();
    out << "# " << resolved_config_line(cfg) << '\n';
    csv_row(out, {"k", "exact", "approx", "rel_err"});
    for (int k = 1; k <= cfg.ici_window; ++k) {
        const double exact = ici_coeff_exact(k, fd, symbol, cfg.params.n_subcarriers);
        const double approx =
            ici_coeff_approx(k, fd, symbol, cfg.params.n_subcarriers);
        csv_row(out, {csv_num(k), csv_num(exact), csv_num(approx),
                      csv_num((approx - exact) / exact)});
    }
    return 0;
}

/// OPSA over the whole pass at the configured rho.
inline int run_opsa_sweep(const RunConfig& cfg, std::ostream& out) {
    const Trajectory traj = derive_trajectory(cfg.params);
    const CapacityModel model(cfg.params, cfg.population, cfg.capacity_options());
    const auto factors = model.factors_for(traj);
    const double r_th = model.rate_target(cfg.params.rho).r_th_bps;
    out << "# " << resolved_config_line(cfg) << '\n';
    csv_row(out, {"i", "t_seconds", "beta", "eta", "c_mr_bps", "c_users_bps",
                  "feasible"});
    try {
        const auto sweep = opsa_sweep(model, factors, r_th,
                                      cfg.params.beta_step, cfg.with_ici);
        for (const auto& a : sweep) {
            csv_row(out, {csv_num(a.period_index), csv_num(a.time_s),
                          csv_num(a.beta), csv_num(a.eta), csv_num(a.c_mr_bps),
                          csv_num(a.c_users_bps), a.feasible ? "1" : "0"});
        }
    } catch (const InfeasibleError& e) {
        out << "# error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

/// OPSA against the three constant allocations.
inline int run_compare_cpsa(const RunConfig& cfg, std::ostream& out) {
    const Trajectory traj = derive_trajectory(cfg.params);
    const CapacityModel model(cfg.params, cfg.population, cfg.capacity_options());
    const auto factors = model.factors_for(traj);
    const double r_th = model.rate_target(cfg.params.rho).r_th_bps;
    out << "# " << resolved_config_line(cfg) << '\n';
    const bool want_pl = cfg.cpsa_variant == "all" || cfg.cpsa_variant == "pl";
    const bool want_bl = cfg.cpsa_variant == "all" || cfg.cpsa_variant == "bl";
    const bool want_i = cfg.cpsa_variant == "all" || cfg.cpsa_variant == "i";
    std::vector<std::string> header = {"i", "t_seconds", "c_opsa_bps"};
    if (want_pl) header.push_back("c_cpsa_pl_bps");
    if (want_bl) header.push_back("c_cpsa_bl_bps");
    if (want_i) header.push_back("c_cpsa_i_bps");
    csv_row(out, header);
    try {
        const auto best = opsa_sweep(model, factors, r_th, cfg.params.beta_step,
                                     cfg.with_ici);
        std::vector<std::vector<Allocation>> fixed;
        if (want_pl) fixed.push_back(cpsa(model, factors, r_th, cfg.params.beta_step,
                                          CpsaVariant::power_limited, cfg.with_ici));
        if (want_bl) fixed.push_back(cpsa(model, factors, r_th, cfg.params.beta_step,
                                          CpsaVariant::bandwidth_limited, cfg.with_ici));
        if (want_i) fixed.push_back(cpsa(model, factors, r_th, cfg.params.beta_step,
                                         CpsaVariant::intermediate, cfg.with_ici));
        for (std::size_t row = 0; row < best.size(); ++row) {
            std::vector<std::string> cells = {csv_num(best[row].period_index),
                                              csv_num(best[row].time_s),
                                              csv_num(best[row].c_mr_bps)};
            for (const auto& variant : fixed) {
                cells.push_back(csv_num(variant[row].c_mr_bps));
            }
            csv_row(out, cells);
        }
    } catch (const InfeasibleError& e) {
        out << "# error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

/// Capacity bounds with/without ICI and the normalized gap.
inline int run_gap(const RunConfig& cfg, std::ostream& out) {
    const Trajectory traj = derive_trajectory(cfg.params);
    const CapacityModel model(cfg.params, cfg.population, cfg.capacity_options());
    const auto factors = model.factors_for(traj);
    const double c_sum = model.c_sum();
    const double r_th = cfg.params.rho * c_sum;
    out << "# " << resolved_config_line(cfg) << '\n';
    csv_row(out, {"i", "c_lower_bps", "c_upper_bps", "gap"});
    try {
        for (const auto& f : factors) {
            const GapReport g =
                bounds_and_gap(model, f, r_th, cfg.params.beta_step, c_sum);
            csv_row(out, {csv_num(g.period_index), csv_num(g.c_lower_bps),
                          csv_num(g.c_upper_bps), csv_num(g.gap)});
        }
    } catch (const InfeasibleError& e) {
        out << "# error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

/// All Monte-Carlo oracle suites; nonzero exit if any check fails.
inline int run_validate(const RunConfig& cfg, std::ostream& out) {
    const auto rows = validation_report(cfg.params, cfg.population, cfg.profile,
                                        cfg.seed, cfg.mc_trials, cfg.mc_slots);
    out << "# " << resolved_config_line(cfg) << '\n';
    csv_row(out, {"check", "measured", "threshold", "pass"});
    bool all_pass = true;
    for (const auto& r : rows) {
        csv_row(out, {r.name, csv_num(r.measured), csv_num(r.threshold),
                      r.pass ? "1" : "0"});
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 3;
}

/// Dispatch by subcommand name; returns the process exit status.
inline int run_subcommand(const std::string& name, const RunConfig& cfg,
                          std::ostream& out) {
    if (name == "trajectory") return run_trajectory(cfg, out);
    if (name == "ici-table") return run_ici_table(cfg, out);
    if (name == "opsa-sweep") return run_opsa_sweep(cfg, out);
    if (name == "compare-cpsa") return run_compare_cpsa(cfg, out);
    if (name == "gap") return run_gap(cfg, out);
    if (name == "validate") return run_validate(cfg, out);
    throw std::invalid_argument("unknown subcommand '" + name + "'");
}

}  // namespace mralloc
