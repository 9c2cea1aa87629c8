#include "subrad/experiments.hpp"
#include "subrad/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace subrad {

ChainGeometry disordered_chain(int n, double kd, double gamma, double delta, std::uint64_t seed, int sample) {
    ChainGeometry c = ChainGeometry::regular(n, kd, gamma);
    c.offsets.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        c.offsets[static_cast<std::size_t>(i)] =
            delta * c.d * (2.0 * keyed_uniform(seed, static_cast<std::uint64_t>(sample), static_cast<std::uint64_t>(i)) - 1.0);
    c.validate();
    return c;
}

SolverMode resolve_mode(const RunConfig& config, Index dim) {
    const SolverConfig& s = config.solver;
    if (s.mode == SolverMode::DenseAll) {
        if (dim <= s.dense_cap) return SolverMode::DenseAll;
        if (!config.iterative_fallback)
            throw std::length_error("dimension " + std::to_string(dim) + " exceeds the dense cap " +
                                    std::to_string(s.dense_cap) + " and iterative fallback is disabled");
        return SolverMode::ShiftInvertDirect;
    }
    // Krylov subspaces cannot exceed the space itself.
    if (dim <= static_cast<Index>(s.subspace()) + 1) return SolverMode::DenseAll;
    return s.mode;
}

namespace {

StateSummary pick(const std::vector<LabeledPair>& states, StateLabel label, double omega) {
    StateSummary s;
    try {
        const LabeledPair& lp = most_subradiant(states, label, omega);
        s.found = true;
        s.pair = lp.pair;
        s.cls = lp.cls;
    } catch (const std::runtime_error&) {
    }
    return s;
}

}  // namespace

SubradiantRates subradiant_rates(const ChainGeometry& chain, const RunConfig& config, bool want_i, bool want_ii) {
    const auto t0 = std::chrono::steady_clock::now();
    SubradiantRates out;
    out.n = chain.n;
    out.kd = chain.kd();
    const ClassifierContext ctx(chain, config.thresholds);
    const Spectrum& single = ctx.single_spectrum();
    out.single.found = true;
    out.single.pair = single[0];
    out.fermionic_reference = single.size() >= 2 ? single[0].decay() + single[1].decay() : single[0].decay();

    const TwoExcitationOperator op(chain, CouplingKernel::of(chain));
    SolverConfig cfg = config.solver;
    cfg.mode = resolve_mode(config, op.dim());
    out.mode = cfg.mode;
    cfg.count = static_cast<int>(std::min<Index>(cfg.count, op.dim()));
    if (cfg.max_subspace > op.dim()) cfg.max_subspace = 0;

    std::optional<Spectrum> full;
    auto states_near = [&](double omega) {
        if (cfg.mode == SolverMode::DenseAll) {
            if (!full) full = eig_dense_all(op.dense(), cfg.dense_cap);
            // Same selection as the targeted solvers: `count` nearest the target.
            std::vector<EigenPair> pairs = full->pairs;
            std::stable_sort(pairs.begin(), pairs.end(), [omega](const EigenPair& a, const EigenPair& b) {
                return std::abs(a.lambda - omega) < std::abs(b.lambda - omega);
            });
            pairs.resize(static_cast<std::size_t>(cfg.count));
            Spectrum s;
            s.pairs = std::move(pairs);
            s.sort();
            return classify_spectrum(s, ctx);
        }
        cfg.target = omega;
        return classify_spectrum(eig_target(op, cfg), ctx);
    };
    if (want_i && std::isfinite(ctx.omega_i())) out.dimer_i = pick(states_near(ctx.omega_i()), StateLabel::DimerI, ctx.omega_i());
    if (want_ii && std::isfinite(ctx.omega_ii()))
        out.dimer_ii = pick(states_near(ctx.omega_ii()), StateLabel::DimerII, ctx.omega_ii());
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

LocalizedState localized_state(const ChainGeometry& chain, const CouplingKernel& kernel, int label, int window) {
    const Mat h = build_missing_site_hamiltonian(chain, kernel, label);
    const Spectrum s = eig_dense_all(h, h.rows());
    LocalizedState out;
    out.n = chain.n;
    out.m = label;
    out.positions = missing_site_positions(chain, label);
    const double zm = chain.position(label - 1);
    double best = -1.0;
    for (const auto& p : s.pairs) {
        double local = 0.0;
        for (std::size_t i = 0; i < out.positions.size(); ++i)
            if (std::abs(out.positions[i] - zm) <= window * chain.d + 1e-9) local += std::norm(p.vector(static_cast<Index>(i)));
        local /= p.vector.squaredNorm();
        // Spectrum order breaks ties toward the smaller decay rate.
        if (local > best + 1e-12) {
            best = local;
            out.pair = p;
        }
    }
    out.local_weight = best;
    return out;
}

RunResult run_experiment(const RunConfig& config) {
    config.validate();
    const std::string& e = config.experiment;
    if (e == "spectrum") return cmd_spectrum(config);
    if (e == "phase-diagram") return cmd_phase_diagram(config);
    if (e == "scaling") return cmd_scaling(config);
    if (e == "defect") return cmd_defect(config);
    if (e == "disorder") return cmd_disorder(config);
    if (e == "freespace") return cmd_freespace(config);
    if (e == "map-check") return cmd_mapcheck(config);
    throw std::invalid_argument("unknown experiment '" + e + "'");
}

std::vector<std::filesystem::path> write_outputs(const RunConfig& config, const RunResult& result) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    std::vector<fs::path> written;
    auto put = [&](const std::string& name, const std::string& text) {
        const fs::path p = config.output_dir / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        out << text;
        written.push_back(p);
    };
    put(config.experiment + ".csv", to_csv(result.records));
    nlohmann::json summary = result.summary;
    summary["schema_version"] = kSweepSchemaVersion;
    summary["config"] = to_json(config);
    put(config.experiment + "-summary.json", summary.dump(2) + "\n");
    if (config.plot)
        for (const auto& [name, svg] : result.plots) put(name, svg);
    for (const auto& [name, text] : result.extra) put(name, text);
    return written;
}

}  // namespace subrad
