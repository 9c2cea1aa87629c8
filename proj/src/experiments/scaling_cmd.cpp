#include "subrad/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace subrad {

namespace {

nlohmann::json fit_json(const std::vector<std::pair<double, double>>& series) {
    try {
        const FitResult f = fit_power_law(series);
        return {{"exponent", f.exponent}, {"amplitude", f.amplitude}, {"window", {f.window_lo, f.window_hi}},
                {"points", f.points},     {"r2", f.r2}};
    } catch (const std::invalid_argument& e) {
        return {{"error", e.what()}};
    }
}

bool consecutive(const std::vector<std::pair<double, double>>& s) {
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i].first != s[i - 1].first + 1.0) return false;
    return true;
}

}  // namespace

RunResult cmd_scaling(const RunConfig& config) {
    const auto& ns = config.n_values;
    const auto& kds = config.kd_values;
    const std::size_t rows = ns.size();
    const auto rates = parallel_map<SubradiantRates>(config.jobs, kds.size() * rows, [&](std::size_t i) {
        const ChainGeometry chain = ChainGeometry::regular(ns[i % rows], kds[i / rows], config.gamma);
        return subradiant_rates(chain, config, true, true);
    });

    RunResult res;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto record = [&](const SubradiantRates& r, const std::string& sector, const std::string& label,
                      const StateSummary& s, SolverMode mode) {
        SweepRecord rec;
        rec.experiment = config.experiment;
        rec.n = r.n;
        rec.kd = r.kd;
        rec.sector = sector;
        rec.label = s.found ? label : "None";
        rec.lambda = s.found ? s.pair.lambda : cplx{nan, nan};
        rec.solver = to_string(mode);
        rec.residual = s.found ? s.pair.residual : nan;
        rec.wall_seconds = r.wall_seconds;
        rec.seed = config.seed;
        res.records.push_back(rec);
    };

    LinePlot plot{"Most subradiant decay rates", "N", "decay rate / gamma", true, true, {}};
    nlohmann::json per_kd = nlohmann::json::array();
    for (std::size_t k = 0; k < kds.size(); ++k) {
        std::vector<std::pair<double, double>> one, d1, d2;
        double noise = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            const auto& s = rates[k * rows + r];
            record(s, "one", "OneExcitation", s.single, SolverMode::DenseAll);
            record(s, "two", "DimerI", s.dimer_i, s.mode);
            record(s, "two", "DimerII", s.dimer_ii, s.mode);
            one.emplace_back(s.n, s.single.pair.decay());
            if (s.dimer_i.found) d1.emplace_back(s.n, s.dimer_i.pair.decay());
            if (s.dimer_ii.found) {
                d2.emplace_back(s.n, s.dimer_ii.pair.decay());
                noise = std::max(noise, 2.0 * s.dimer_ii.pair.residual / s.dimer_ii.pair.decay());
            }
        }
        nlohmann::json entry = {{"kd", kds[k]},
                                {"kd_pi", kds[k] / kPi},
                                {"one_excitation", fit_json(one)},
                                {"dimer_i", fit_json(d1)},
                                {"dimer_ii", fit_json(d2)},
                                {"dimer_ii_missing", static_cast<int>(rows - d2.size())}};
        if (d2.size() >= 16 && consecutive(d2)) {
            const ModulationReport m = period4_modulation(d2, noise);
            entry["period4"] = {{"dominant_period", m.dominant_period},
                                {"autocorrelation", m.autocorrelation},
                                {"amplitude", m.period4_amplitude},
                                {"noise_floor", m.noise_floor},
                                {"significant", m.significant}};
        }
        per_kd.push_back(entry);
        const std::string tag = " kd=" + format_double(kds[k] / kPi).substr(0, 6) + "pi";
        auto series = [&](const std::string& name, const std::vector<std::pair<double, double>>& v) {
            PlotSeries s{name + tag, {}, {}, false};
            for (const auto& [x, y] : v) {
                s.x.push_back(x);
                s.y.push_back(y);
            }
            plot.series.push_back(s);
        };
        series("one", one);
        series("I", d1);
        series("II", d2);
    }

    // Dips: interior local minima of the type-II rate along kd at fixed N.
    nlohmann::json dips = nlohmann::json::array();
    if (kds.size() >= 3) {
        for (std::size_t r = 0; r < rows; ++r) {
            nlohmann::json minima = nlohmann::json::array();
            bool in_window = false;
            for (std::size_t k = 1; k + 1 < kds.size(); ++k) {
                const auto& a = rates[(k - 1) * rows + r].dimer_ii;
                const auto& b = rates[k * rows + r].dimer_ii;
                const auto& c = rates[(k + 1) * rows + r].dimer_ii;
                if (!a.found || !b.found || !c.found) continue;
                if (b.pair.decay() < a.pair.decay() && b.pair.decay() < c.pair.decay()) {
                    minima.push_back(kds[k] / kPi);
                    if (kds[k] >= 0.16 * kPi - 1e-12 && kds[k] <= 0.17 * kPi + 1e-12) in_window = true;
                }
            }
            dips.push_back({{"n", ns[r]}, {"minima_kd_pi", minima}, {"dip_in_0.16_0.17", in_window}});
        }
    }
    res.summary = {{"per_kd", per_kd}, {"dips", dips}};
    res.plots.emplace_back(plot_file_name(config), render_svg(plot));
    return res;
}

}  // namespace subrad
