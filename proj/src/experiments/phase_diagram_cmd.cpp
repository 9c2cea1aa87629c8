#include "subrad/experiments.hpp"

#include <cmath>
#include <limits>

namespace subrad {

namespace {

SweepRecord make_record(const RunConfig& config, const SubradiantRates& r, const std::string& sector,
                        const std::string& label, cplx lambda, double residual) {
    SweepRecord rec;
    rec.experiment = config.experiment;
    rec.n = r.n;
    rec.kd = r.kd;
    rec.sector = sector;
    rec.label = label;
    rec.lambda = lambda;
    rec.solver = to_string(sector == "one" ? SolverMode::DenseAll : r.mode);
    rec.residual = residual;
    rec.wall_seconds = r.wall_seconds;
    rec.seed = config.seed;
    return rec;
}

}  // namespace

RunResult cmd_phase_diagram(const RunConfig& config) {
    const auto& ns = config.n_values;
    const auto& kds = config.kd_values;
    const std::size_t cols = kds.size();
    const auto rates = parallel_map<SubradiantRates>(config.jobs, ns.size() * cols, [&](std::size_t i) {
        const ChainGeometry chain = ChainGeometry::regular(ns[i / cols], kds[i % cols], config.gamma);
        return subradiant_rates(chain, config, false, true);
    });

    RunResult res;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> dimer(rates.size(), nan), single(rates.size(), nan), fermi(rates.size(), nan);
    for (std::size_t i = 0; i < rates.size(); ++i) {
        const auto& r = rates[i];
        const auto& s1 = r.single.pair;
        res.records.push_back(make_record(config, r, "one", "OneExcitation", s1.lambda, s1.residual));
        res.records.push_back(make_record(config, r, "two", "FermionicReference",
                                          cplx{0.0, -0.5 * r.fermionic_reference}, 0.0));
        if (r.dimer_ii.found) {
            res.records.push_back(make_record(config, r, "two", "DimerII", r.dimer_ii.pair.lambda, r.dimer_ii.pair.residual));
            dimer[i] = r.dimer_ii.pair.decay();
        } else {
            res.records.push_back(make_record(config, r, "two", "None", cplx{nan, nan}, nan));
        }
        single[i] = s1.decay();
        fermi[i] = r.fermionic_reference;
    }

    // Crossovers per kd column, in the order the N values were given.
    nlohmann::json columns = nlohmann::json::array();
    PlotSeries cross_single{"dimer II < one-excitation", {}, {}, true};
    PlotSeries cross_fermi{"dimer II < fermionic", {}, {}, true};
    for (std::size_t c = 0; c < cols; ++c) {
        nlohmann::json col = {{"kd", kds[c]}, {"kd_pi", kds[c] / kPi}};
        col["crossover_one_excitation"] = nullptr;
        col["crossover_fermionic"] = nullptr;
        for (std::size_t r = 0; r < ns.size(); ++r) {
            const std::size_t i = r * cols + c;
            if (col["crossover_one_excitation"].is_null() && dimer[i] < single[i]) {
                col["crossover_one_excitation"] = ns[r];
                cross_single.x.push_back(kds[c] / kPi);
                cross_single.y.push_back(ns[r]);
            }
            if (col["crossover_fermionic"].is_null() && dimer[i] < fermi[i]) {
                col["crossover_fermionic"] = ns[r];
                cross_fermi.x.push_back(kds[c] / kPi);
                cross_fermi.y.push_back(ns[r]);
            }
        }
        columns.push_back(col);
    }
    // Column-minimum locus: kd of the smallest dimer rate at each N.
    nlohmann::json locus = nlohmann::json::array();
    for (std::size_t r = 0; r < ns.size(); ++r) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = cols;
        for (std::size_t c = 0; c < cols; ++c)
            if (dimer[r * cols + c] < best) {
                best = dimer[r * cols + c];
                arg = c;
            }
        locus.push_back({{"n", ns[r]},
                         {"kd_pi", arg < cols ? nlohmann::json(kds[arg] / kPi) : nlohmann::json(nullptr)},
                         {"rate", arg < cols ? nlohmann::json(best) : nlohmann::json(nullptr)}});
    }
    double step = 0.0;
    if (cols > 1) step = (kds.back() - kds.front()) / static_cast<double>(cols - 1) / kPi;
    res.summary = {{"columns", columns},
                   {"minimum_locus", locus},
                   {"kd_step_pi", step},
                   {"color_scale", "log10"},
                   {"classifier", {{"eigenvalue_window", config.thresholds.eigenvalue_window},
                                   {"overlap", config.thresholds.overlap},
                                   {"k_concentration", config.thresholds.k_concentration}}}};

    HeatmapPlot heat;
    heat.title = "Most subradiant type-II dimer rate";
    heat.xlabel = "kd / pi";
    heat.ylabel = "N";
    for (double kd : kds) heat.x.push_back(kd / kPi);
    for (int n : ns) heat.y.push_back(n);
    heat.values = dimer;
    heat.log_scale = true;
    res.plots.emplace_back(plot_file_name(config), render_svg(heat));
    LinePlot cross{"Crossover sizes", "kd / pi", "N", false, false, {cross_single, cross_fermi}};
    res.plots.emplace_back(plot_file_name(config, "crossover"), render_svg(cross));
    return res;
}

}  // namespace subrad
