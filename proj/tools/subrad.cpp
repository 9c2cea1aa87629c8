// subrad: command-line front end for the numerical campaigns

#include "subrad/experiments.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Options {
    std::string config_file;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string solver;
    std::optional<int> jobs;
    bool no_plot = false;
};

subrad::RunConfig resolve(const std::string& experiment, const Options& opt) {
    subrad::RunConfig c;
    if (opt.config_file.empty()) {
        c = subrad::default_config(experiment);
    } else {
        c = subrad::load_run_config(opt.config_file);
        if (c.experiment != experiment)
            throw std::invalid_argument("config file is for '" + c.experiment + "', not '" + experiment + "'");
    }
    if (!opt.out.empty()) c.output_dir = opt.out;
    if (opt.seed) {
        c.seed = *opt.seed;
        c.solver.seed = *opt.seed;
        if (c.disorder.seed) c.disorder.seed = *opt.seed;
    }
    if (!opt.solver.empty()) c.solver.mode = subrad::solver_mode_from_string(opt.solver);
    if (opt.jobs) c.jobs = *opt.jobs;
    if (opt.no_plot) c.plot = false;
    c.validate();
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subradiant states of emitter chains coupled to a waveguide"};
    app.require_subcommand(1);
    Options opt;
    const char* names[] = {"spectrum", "phase-diagram", "scaling", "defect", "disorder", "freespace", "map-check"};
    const char* blurbs[] = {"full two-excitation spectra and branch summary",
                            "N x kd grid of type II rates and crossover curves",
                            "decay rate versus N with power-law fits",
                            "states localized at a missing site",
                            "type II rates of position-disordered chains",
                            "missing-site chains with free-space couplings",
                            "confinement-localization identities"};
    for (int i = 0; i < 7; ++i) {
        auto* sub = app.add_subcommand(names[i], blurbs[i]);
        sub->add_option("--config", opt.config_file, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--seed", opt.seed, "random seed");
        sub->add_option("--solver", opt.solver, "eigensolver")
            ->check(CLI::IsMember({"dense", "si-direct", "si-matfree"}));
        sub->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("--no-plot", opt.no_plot, "skip SVG output");
    }
    CLI11_PARSE(app, argc, argv);

    try {
        const std::string experiment = app.get_subcommands().front()->get_name();
        const subrad::RunConfig config = resolve(experiment, opt);
        const subrad::RunResult result = subrad::run_experiment(config);
        for (const auto& p : subrad::write_outputs(config, result)) std::cout << p.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "subrad: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
