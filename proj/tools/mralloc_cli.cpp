// Command-line front end: config ingestion, subcommand dispatch, CSV
// emission.  All computation lives in the headers; this file only
// wires flags to the RunConfig.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mralloc/mralloc.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_path;
    std::string with_ici;  // on/off, empty = keep config value
    double rho = -1.0;     // < 0 = keep config value
    long long seed = -1;
    int window = -1;
    int trials = -1;
    int slots = -1;
};

mralloc::RunConfig build_config(const CliOptions& opt) {
    mralloc::RunConfig cfg;
    if (!opt.config_path.empty()) {
        cfg = mralloc::parse_config_file(opt.config_path);
    }
    if (opt.rho >= 0.0) cfg.params.rho = opt.rho;
    if (opt.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opt.seed);
    if (!opt.with_ici.empty()) {
        cfg.with_ici = mralloc::detail::parse_bool("with_ici", opt.with_ici);
    }
    if (opt.window > 0) cfg.ici_window = opt.window;
    if (opt.trials > 0) cfg.mc_trials = opt.trials;
    if (opt.slots > 0) cfg.mc_slots = opt.slots;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OFDMA downlink resource allocation for a rail mobile relay "
                 "and local users"};
    app.require_subcommand(1);

    CliOptions opt;
    app.add_option("--config", opt.config_path, "key = value config file");
    app.add_option("--seed", opt.seed, "override the RNG seed");
    app.add_option("--rho", opt.rho, "override the local-user rate fraction")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--with-ici", opt.with_ici,
                   "include the ICI term in the objective (on/off)")
        ->check(CLI::IsMember({"on", "off"}));
    app.add_option("--out", opt.out_path, "write CSV to a file instead of stdout");

    auto* traj = app.add_subcommand("trajectory", "per-period geometry table");
    auto* ici = app.add_subcommand("ici-table",
                                   "exact vs approximate ICI coefficients");
    ici->add_option("--window", opt.window, "index-difference window");
    auto* sweep = app.add_subcommand("opsa-sweep", "optimal allocation per period");
    auto* cmp = app.add_subcommand("compare-cpsa",
                                   "OPSA vs constant allocation policies");
    auto* gap = app.add_subcommand("gap", "capacity bounds with/without ICI");
    auto* val = app.add_subcommand("validate", "run the Monte-Carlo oracle suites");
    val->add_option("--trials", opt.trials, "channel-matrix trials");
    val->add_option("--slots", opt.slots, "scheduling-simulation slots");

    CLI11_PARSE(app, argc, argv);

    std::string name;
    for (const auto* sub : {traj, ici, sweep, cmp, gap, val}) {
        if (sub->parsed()) name = sub->get_name();
    }

    try {
        const mralloc::RunConfig cfg = build_config(opt);
        if (!opt.out_path.empty()) {
            std::ofstream out(opt.out_path);
            if (!out) {
                std::cerr << "error: cannot open output file '" << opt.out_path
                          << "'\n";
                return 1;
            }
            return mralloc::run_subcommand(name, cfg, out);
        }
        return mralloc::run_subcommand(name, cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
