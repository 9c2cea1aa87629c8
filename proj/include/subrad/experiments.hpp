// experiments.hpp: run configuration, sweep records, and the numerical campaigns

#pragma once

#include "subrad/analysis.hpp"
#include "subrad/eig.hpp"
#include "subrad/model.hpp"
#include "subrad/theory.hpp"

#include "json.hpp"

#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace subrad {

// ----------------------------------------------------------------- config --

struct DisorderSpec {
    std::vector<double> deltas;  // offset amplitudes in units of d
    int samples = 0;
    std::optional<std::uint64_t> seed;
};

struct RunConfig {
    std::string experiment;           // spectrum | phase-diagram | scaling | defect | disorder | freespace | map-check
    std::vector<int> n_values;
    std::vector<double> kd_values;    // radians
    double gamma = 1.0;
    SolverConfig solver;              // target is set per solve
    bool iterative_fallback = true;   // leave DenseAll for si-direct above the dense cap
    ClassifierThresholds thresholds;
    DisorderSpec disorder;
    std::vector<int> defect_sites;    // site labels; empty means the central site
    bool defect_scan = false;         // every m = 2..N-1
    KernelKind kernel = KernelKind::Waveguide1D;
    std::vector<double> d_over_lambda;  // 3D lattice spacings
    std::vector<int> m_values;          // relative-model truncations for map-check
    int jobs = 1;
    bool dump_vectors = false;
    bool plot = true;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 1;

    // Throws std::invalid_argument on values outside module preconditions.
    void validate() const;
};

const char* to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& s);

// Strict parser: unknown keys and wrong types throw std::invalid_argument.
// Lists of kd are given in units of pi ("kd_pi" or "kd_range_pi").
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& file);
nlohmann::json to_json(const RunConfig& config);

// Desk-scale defaults for each experiment.
RunConfig default_config(const std::string& experiment);

// ---------------------------------------------------------------- records --

inline constexpr int kSweepSchemaVersion = 1;

struct SweepRecord {
    std::string experiment;
    int n = 0;
    double kd = 0.0;
    std::string sector;  // one | two | defect | relative
    std::string label;
    cplx lambda{0.0, 0.0};
    std::string solver;
    double residual = 0.0;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
    int sample = -1;  // -1 for clean chains

    double decay() const noexcept { return decay_rate(lambda); }
};

const std::vector<std::string>& sweep_header();
// Quotes per RFC 4180 when the field holds a comma, quote, CR or LF.
std::string csv_field(const std::string& s);
std::string format_double(double v);  // %.17g
std::string to_csv_row(const SweepRecord& r);
std::string to_csv(const std::vector<SweepRecord>& records);
// Inverse of to_csv; used for round-trip checks.
std::vector<SweepRecord> parse_csv(const std::string& text);

// [[re, im], ...]
nlohmann::json vector_to_json(const Vec& v);

// ------------------------------------------------------------------- plots --

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool markers = false;
};

struct LinePlot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool logx = false;
    bool logy = false;
    std::vector<PlotSeries> series;
};

struct HeatmapPlot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<double> x;        // columns
    std::vector<double> y;        // rows
    std::vector<double> values;   // row-major, y.size() x x.size(); NaN is drawn blank
    bool log_scale = true;
};

std::string render_svg(const LinePlot& plot);
std::string render_svg(const HeatmapPlot& plot);

// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);
// "<experiment>-<16 hex digits>.svg", hashing the config (without output_dir
// and jobs) followed by `suffix`.
std::string plot_file_name(const RunConfig& config, const std::string& suffix = "");

// -------------------------------------------------------------- execution --

// Runs fn(0..count-1) on up to `jobs` threads; results keep index order.
// The first exception thrown by any task is rethrown after all workers stop.
template <class T>
std::vector<T> parallel_map(int jobs, std::size_t count, const std::function<T(std::size_t)>& fn);

// Offsets uniform in [-delta, delta] * d, keyed by (seed, sample, site).
ChainGeometry disordered_chain(int n, double kd, double gamma, double delta, std::uint64_t seed, int sample);

// DenseAll above the cap switches to si-direct when fallback is allowed,
// otherwise std::length_error.
SolverMode resolve_mode(const RunConfig& config, Index dim);

struct StateSummary {
    bool found = false;
    EigenPair pair;
    StateClass cls;
};

struct SubradiantRates {
    int n = 0;
    double kd = 0.0;
    SolverMode mode = SolverMode::DenseAll;
    StateSummary single;      // most subradiant one-excitation state
    double fermionic_reference = 0.0;
    StateSummary dimer_i;
    StateSummary dimer_ii;
    double wall_seconds = 0.0;
};

// Most subradiant one-excitation state and dimers of a chain. Dimers are
// searched with `count` eigenpairs nearest omega_I and omega_II.
SubradiantRates subradiant_rates(const ChainGeometry& chain, const RunConfig& config, bool want_i = true,
                                 bool want_ii = true);

// Localized state of a missing-site chain: the eigenvector with the largest
// weight within +-window sites of the defect.
struct LocalizedState {
    int n = 0;
    int m = 0;
    EigenPair pair;
    double local_weight = 0.0;
    std::vector<double> positions;
};
LocalizedState localized_state(const ChainGeometry& chain, const CouplingKernel& kernel, int label,
                               int window = 6);

struct RunResult {
    std::vector<SweepRecord> records;
    nlohmann::json summary;
    std::vector<std::pair<std::string, std::string>> plots;  // file name, svg text
    std::vector<std::pair<std::string, std::string>> extra;  // file name, contents
};

RunResult cmd_spectrum(const RunConfig& config);
RunResult cmd_phase_diagram(const RunConfig& config);
RunResult cmd_scaling(const RunConfig& config);
RunResult cmd_defect(const RunConfig& config);
RunResult cmd_disorder(const RunConfig& config);
RunResult cmd_freespace(const RunConfig& config);
RunResult cmd_mapcheck(const RunConfig& config);

// Dispatch on config.experiment.
RunResult run_experiment(const RunConfig& config);

// Writes <exp>.csv, <exp>-summary.json, plots and extra files into
// config.output_dir. Returns the paths written.
std::vector<std::filesystem::path> write_outputs(const RunConfig& config, const RunResult& result);

}  // namespace subrad

#include "subrad/detail/parallel.hpp"
