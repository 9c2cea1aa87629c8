#include "subrad/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace subrad {

namespace {

struct Task {
    double d;  // units of lambda0
    int n;
};

struct Outcome {
    Task task;
    LocalizedState state;
    double wall = 0.0;
};

// |psi| normalized to its peak, keyed by site offset from the defect.
std::map<int, double> relative_profile(const LocalizedState& s, double d, int radius) {
    const int m = s.m;
    double peak = 0.0;
    for (Index i = 0; i < s.pair.vector.size(); ++i) peak = std::max(peak, std::abs(s.pair.vector(i)));
    std::map<int, double> out;
    for (std::size_t i = 0; i < s.positions.size(); ++i) {
        const int offset = static_cast<int>(std::lround(s.positions[i] / d)) - m;
        if (std::abs(offset) <= radius) out[offset] = std::abs(s.pair.vector(static_cast<Index>(i))) / peak;
    }
    return out;
}

}  // namespace

RunResult cmd_freespace(const RunConfig& config) {
    std::vector<Task> tasks;
    for (double d : config.d_over_lambda)
        for (int n : config.n_values) tasks.push_back({d, n});
    const CouplingKernel kernel = CouplingKernel::free_space(config.kernel, 1.0, config.gamma);
    const auto outcomes = parallel_map<Outcome>(config.jobs, tasks.size(), [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        o.task = tasks[i];
        ChainGeometry chain;
        chain.n = o.task.n;
        chain.d = o.task.d;
        chain.k1d = kernel.k;
        chain.gamma1d = config.gamma;
        o.state = localized_state(chain, kernel, (o.task.n + 1) / 2);
        o.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return o;
    });

    RunResult res;
    std::string profiles = "d_over_lambda,n,m,position,abs,phase\r\n";
    nlohmann::json groups = nlohmann::json::array();
    for (double d : config.d_over_lambda) {
        std::vector<const Outcome*> mine;
        for (const auto& o : outcomes)
            if (o.task.d == d) mine.push_back(&o);
        nlohmann::json rows = nlohmann::json::array();
        PlotSeries amp{"N=" + std::to_string(mine.back()->task.n), {}, {}, false};
        for (const Outcome* o : mine) {
            const auto& s = o->state;
            SweepRecord r;
            r.experiment = config.experiment;
            r.n = o->task.n;
            r.kd = kernel.k * d;
            r.sector = "defect";
            r.label = "Localized";
            r.lambda = s.pair.lambda;
            r.solver = to_string(SolverMode::DenseAll);
            r.residual = s.pair.residual;
            r.wall_seconds = o->wall;
            r.seed = config.seed;
            r.sample = -1;
            res.records.push_back(r);
            // Phase relative to the left neighbour of the defect.
            const Index ref = s.m - 2;
            const cplx anchor = s.pair.vector(ref) / std::abs(s.pair.vector(ref));
            for (std::size_t i = 0; i < s.positions.size(); ++i) {
                const cplx a = s.pair.vector(static_cast<Index>(i)) / anchor;
                profiles += format_double(d) + "," + std::to_string(o->task.n) + "," + std::to_string(s.m) + "," +
                            format_double(s.positions[i] / d) + "," + format_double(std::abs(a)) + "," +
                            format_double(std::arg(a)) + "\r\n";
                if (o == mine.back()) {
                    amp.x.push_back(s.positions[i] / d - s.m);
                    amp.y.push_back(std::abs(a));
                }
            }
            const Vec& v = s.pair.vector;
            const double peak = v.cwiseAbs().maxCoeff();
            const double edge = std::max(std::abs(v(0)), std::abs(v(v.size() - 1))) / peak;
            rows.push_back({{"n", o->task.n},
                            {"edge_to_peak", edge},
                            {"m", s.m},
                            {"decay", s.pair.decay()},
                            {"re_lambda", s.pair.lambda.real()},
                            {"local_weight", s.local_weight}});
        }
        nlohmann::json g = {{"d_over_lambda", d}, {"points", rows}};
        if (mine.size() >= 2) {
            const auto lo = *std::min_element(mine.begin(), mine.end(),
                                              [](auto a, auto b) { return a->task.n < b->task.n; });
            const auto hi = *std::max_element(mine.begin(), mine.end(),
                                              [](auto a, auto b) { return a->task.n < b->task.n; });
            const double a = lo->state.pair.decay(), b = hi->state.pair.decay();
            g["rate_change"] = {{"n_from", lo->task.n}, {"n_to", hi->task.n}, {"relative", std::abs(b - a) / a}};
        }
        const Outcome* p120 = nullptr;
        const Outcome* p160 = nullptr;
        for (const Outcome* o : mine) {
            if (o->task.n == 120) p120 = o;
            if (o->task.n == 160) p160 = o;
        }
        if (p120 && p160) {
            const auto a = relative_profile(p120->state, d, 10);
            const auto b = relative_profile(p160->state, d, 10);
            double worst = 0.0;
            for (const auto& [k, v] : a)
                if (b.count(k)) worst = std::max(worst, std::abs(v - b.at(k)));
            g["profile_agreement"] = {{"n", {120, 160}}, {"radius", 10}, {"max_abs_difference", worst}};
        }
        groups.push_back(g);
        if (config.plot) {
            LinePlot plot{"Localized amplitude, d=" + format_double(d) + " lambda0, " + to_string(config.kernel),
                          "site offset from defect", "|psi| (phase-anchored)", false, true, {amp}};
            res.plots.emplace_back(plot_file_name(config, format_double(d)), render_svg(plot));
        }
    }
    res.summary = {{"kernel", to_string(config.kernel)}, {"lambda0", 1.0}, {"groups", groups}};
    res.extra.emplace_back("freespace-profiles.csv", profiles);
    return res;
}

}  // namespace subrad
