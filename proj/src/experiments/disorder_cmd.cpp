#include "subrad/experiments.hpp"

#include <cmath>
#include <cstring>
#include <limits>

namespace subrad {

namespace {

struct Task {
    int delta_index;  // -1 for the clean chain
    int draw;
    int n;
    std::size_t kd_index;
};

}  // namespace

RunResult cmd_disorder(const RunConfig& config) {
    const auto& kds = config.kd_values;
    const auto& deltas = config.disorder.deltas;
    const int samples = config.disorder.samples;
    const std::uint64_t seed = config.disorder.seed.value_or(config.seed);
    std::vector<Task> tasks;
    for (int n : config.n_values) {
        for (std::size_t k = 0; k < kds.size(); ++k) tasks.push_back({-1, -1, n, k});
        for (int d = 0; d < static_cast<int>(deltas.size()); ++d)
            for (int s = 0; s < samples; ++s)
                for (std::size_t k = 0; k < kds.size(); ++k) tasks.push_back({d, s, n, k});
    }
    const auto rates = parallel_map<SubradiantRates>(config.jobs, tasks.size(), [&](std::size_t i) {
        const Task& t = tasks[i];
        const double kd = kds[t.kd_index];
        const ChainGeometry chain =
            t.delta_index < 0 ? ChainGeometry::regular(t.n, kd, config.gamma)
                              : disordered_chain(t.n, kd, config.gamma, deltas[static_cast<std::size_t>(t.delta_index)],
                                                 seed, t.draw);
        return subradiant_rates(chain, config, false, true);
    });

    RunResult res;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::string table = "n,delta,draw,sample,kd,rate,clean_rate\r\n";
    // Sample column: delta_index * samples + draw, -1 for the clean chain.
    auto rate_of = [&](std::size_t i) { return rates[i].dimer_ii.found ? rates[i].dimer_ii.pair.decay() : nan; };
    std::size_t dip = 0;
    for (std::size_t k = 1; k < kds.size(); ++k)
        if (std::abs(kds[k] - kPi / 6.0) < std::abs(kds[dip] - kPi / 6.0)) dip = k;

    nlohmann::json per_n = nlohmann::json::array();
    std::size_t base = 0;
    for (int n : config.n_values) {
        std::vector<double> clean(kds.size());
        for (std::size_t k = 0; k < kds.size(); ++k) clean[k] = rate_of(base + k);
        nlohmann::json groups = nlohmann::json::array();
        for (std::size_t i = base; i < tasks.size() && tasks[i].n == n; ++i) {
            const Task& t = tasks[i];
            const auto& r = rates[i];
            SweepRecord rec;
            rec.experiment = config.experiment;
            rec.n = n;
            rec.kd = kds[t.kd_index];
            rec.sector = "two";
            rec.label = r.dimer_ii.found ? "DimerII" : "None";
            rec.lambda = r.dimer_ii.found ? r.dimer_ii.pair.lambda : cplx{nan, nan};
            rec.solver = to_string(r.mode);
            rec.residual = r.dimer_ii.found ? r.dimer_ii.pair.residual : nan;
            rec.wall_seconds = r.wall_seconds;
            rec.seed = seed;
            rec.sample = t.delta_index < 0 ? -1 : t.delta_index * samples + t.draw;
            res.records.push_back(rec);
            table += std::to_string(n) + "," +
                     format_double(t.delta_index < 0 ? 0.0 : deltas[static_cast<std::size_t>(t.delta_index)]) + "," +
                     std::to_string(t.draw) + "," + std::to_string(rec.sample) + "," + format_double(rec.kd) + "," +
                     format_double(rec.decay()) + "," + format_double(clean[t.kd_index]) + "\r\n";
        }
        for (int d = 0; d < static_cast<int>(deltas.size()); ++d) {
            LinePlot plot{"Type-II rate under disorder, N=" + std::to_string(n) + ", delta=" +
                              format_double(deltas[static_cast<std::size_t>(d)]) + "d",
                          "kd / pi", "decay rate / gamma", false, true, {}};
            PlotSeries cs{"clean", {}, {}, false};
            for (std::size_t k = 0; k < kds.size(); ++k) {
                cs.x.push_back(kds[k] / kPi);
                cs.y.push_back(clean[k]);
            }
            plot.series.push_back(cs);
            int persists = 0, suppressed = 0;
            bool identical = true;
            nlohmann::json draws = nlohmann::json::array();
            for (int s = 0; s < samples; ++s) {
                const std::size_t first = base + kds.size() + (static_cast<std::size_t>(d) * samples + s) * kds.size();
                std::vector<double> v(kds.size());
                for (std::size_t k = 0; k < kds.size(); ++k) v[k] = rate_of(first + k);
                bool dip_ok = kds.size() > 1;
                for (std::size_t k = 0; k < kds.size(); ++k)
                    if (k != dip && !(v[dip] < v[k])) dip_ok = false;
                const bool below = v[dip] < clean[dip];
                for (std::size_t k = 0; k < kds.size(); ++k)
                    if (std::memcmp(&v[k], &clean[k], sizeof(double)) != 0) identical = false;
                persists += dip_ok;
                suppressed += below;
                draws.push_back({{"draw", s}, {"sample", d * samples + s}, {"rates", v}, {"dip_persists", dip_ok},
                                 {"below_clean_at_dip", below}});
                if (s < 8) {
                    PlotSeries ps{"sample " + std::to_string(s), {}, {}, false};
                    for (std::size_t k = 0; k < kds.size(); ++k) {
                        ps.x.push_back(kds[k] / kPi);
                        ps.y.push_back(v[k]);
                    }
                    plot.series.push_back(ps);
                }
            }
            groups.push_back({{"delta", deltas[static_cast<std::size_t>(d)]},
                              {"samples", samples},
                              {"dip_kd_pi", kds[dip] / kPi},
                              {"dip_persists_in", persists},
                              {"below_clean_in", suppressed},
                              {"identical_to_clean", identical},
                              {"draws", draws}});
            if (config.plot)
                res.plots.emplace_back(plot_file_name(config, std::to_string(n) + "-" + std::to_string(d)),
                                       render_svg(plot));
        }
        per_n.push_back({{"n", n}, {"clean", clean}, {"groups", groups}});
        base += kds.size() * (1 + deltas.size() * static_cast<std::size_t>(samples));
    }
    std::vector<double> kd_pi;
    for (double kd : kds) kd_pi.push_back(kd / kPi);
    res.summary = {{"kd_pi", kd_pi}, {"delta_grid", deltas}, {"seed", seed}, {"results", per_n},
                   {"sample_index", "delta_index * samples + draw; -1 is the clean chain"}};
    res.extra.emplace_back("disorder-ensemble.csv", table);
    return res;
}

}  // namespace subrad
