#include "subrad/experiments.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace subrad {

using nlohmann::json;

namespace {

const std::set<std::string> kExperiments = {"spectrum", "phase-diagram", "scaling", "defect",
                                            "disorder", "freespace",     "map-check"};

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) fail(where + " must be an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) fail("unknown key '" + key + "' in " + where);
}

double get_number(const json& v, const std::string& key) {
    if (!v.is_number()) fail("'" + key + "' must be a number");
    return v.get<double>();
}

long long get_integer(const json& v, const std::string& key) {
    if (!v.is_number_integer()) fail("'" + key + "' must be an integer");
    return v.get<long long>();
}

bool get_bool(const json& v, const std::string& key) {
    if (!v.is_boolean()) fail("'" + key + "' must be a boolean");
    return v.get<bool>();
}

std::string get_string(const json& v, const std::string& key) {
    if (!v.is_string()) fail("'" + key + "' must be a string");
    return v.get<std::string>();
}

std::uint64_t get_seed(const json& v, const std::string& key) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        fail("'" + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::vector<double> number_list(const json& v, const std::string& key) {
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
        return out;
    }
    if (!v.is_array()) fail("'" + key + "' must be a number or an array of numbers");
    for (const auto& x : v) out.push_back(get_number(x, key));
    return out;
}

std::vector<int> int_list(const json& v, const std::string& key) {
    if (!v.is_array()) fail("'" + key + "' must be an array of integers");
    std::vector<int> out;
    for (const auto& x : v) {
        const long long i = get_integer(x, key);
        if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) fail("'" + key + "' out of range");
        out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<double> range(const json& v, const std::string& key) {
    check_keys(v, {"from", "to", "step"}, key);
    if (!v.contains("from") || !v.contains("to") || !v.contains("step")) fail(key + " needs from, to and step");
    const double from = get_number(v["from"], key + ".from");
    const double to = get_number(v["to"], key + ".to");
    const double step = get_number(v["step"], key + ".step");
    if (!(step > 0.0) || !(to >= from)) fail(key + " needs step > 0 and to >= from");
    const long long count = static_cast<long long>(std::floor((to - from) / step + 1e-9)) + 1;
    if (count > 1000000) fail(key + " has too many points");
    std::vector<double> out;
    for (long long i = 0; i < count; ++i) out.push_back(from + static_cast<double>(i) * step);
    return out;
}

void parse_solver(const json& s, RunConfig& c) {
    check_keys(s,
               {"mode", "count", "max_subspace", "tol", "max_restarts", "dense_cap", "inner_tol_factor",
                "gmres_restart", "gmres_max_iter", "preconditioner", "iterative_fallback"},
               "solver");
    auto& cfg = c.solver;
    if (s.contains("mode")) cfg.mode = solver_mode_from_string(get_string(s["mode"], "solver.mode"));
    if (s.contains("count")) cfg.count = static_cast<int>(get_integer(s["count"], "solver.count"));
    if (s.contains("max_subspace")) cfg.max_subspace = static_cast<int>(get_integer(s["max_subspace"], "solver.max_subspace"));
    if (s.contains("tol")) cfg.tol = get_number(s["tol"], "solver.tol");
    if (s.contains("max_restarts")) cfg.max_restarts = static_cast<int>(get_integer(s["max_restarts"], "solver.max_restarts"));
    if (s.contains("dense_cap")) cfg.dense_cap = get_integer(s["dense_cap"], "solver.dense_cap");
    if (s.contains("inner_tol_factor")) cfg.inner_tol_factor = get_number(s["inner_tol_factor"], "solver.inner_tol_factor");
    if (s.contains("gmres_restart")) cfg.gmres_restart = static_cast<int>(get_integer(s["gmres_restart"], "solver.gmres_restart"));
    if (s.contains("gmres_max_iter")) cfg.gmres_max_iter = static_cast<int>(get_integer(s["gmres_max_iter"], "solver.gmres_max_iter"));
    if (s.contains("preconditioner")) {
        const std::string p = get_string(s["preconditioner"], "solver.preconditioner");
        if (p == "jacobi") cfg.precond = Preconditioner::Jacobi;
        else if (p == "kronecker-sum") cfg.precond = Preconditioner::KroneckerSum;
        else fail("solver.preconditioner must be jacobi or kronecker-sum");
    }
    if (s.contains("iterative_fallback")) c.iterative_fallback = get_bool(s["iterative_fallback"], "solver.iterative_fallback");
}

void parse_classifier(const json& s, ClassifierThresholds& t) {
    check_keys(s, {"eigenvalue_window", "overlap", "k_concentration", "k_window_pi", "fermionic_modes"}, "classifier");
    if (s.contains("eigenvalue_window")) t.eigenvalue_window = get_number(s["eigenvalue_window"], "classifier.eigenvalue_window");
    if (s.contains("overlap")) t.overlap = get_number(s["overlap"], "classifier.overlap");
    if (s.contains("k_concentration")) t.k_concentration = get_number(s["k_concentration"], "classifier.k_concentration");
    if (s.contains("k_window_pi")) t.k_window = kPi * get_number(s["k_window_pi"], "classifier.k_window_pi");
    if (s.contains("fermionic_modes")) t.fermionic_modes = static_cast<int>(get_integer(s["fermionic_modes"], "classifier.fermionic_modes"));
}

void parse_disorder(const json& s, DisorderSpec& d) {
    check_keys(s, {"delta", "samples", "seed"}, "disorder");
    if (s.contains("delta")) d.deltas = number_list(s["delta"], "disorder.delta");
    if (s.contains("samples")) d.samples = static_cast<int>(get_integer(s["samples"], "disorder.samples"));
    if (s.contains("seed")) d.seed = get_seed(s["seed"], "disorder.seed");
}

}  // namespace

const char* to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::Waveguide1D: return "waveguide";
        case KernelKind::FreeSpace3DTransverse: return "transverse";
        case KernelKind::FreeSpace3DParallel: return "parallel";
    }
    return "waveguide";
}

KernelKind kernel_kind_from_string(const std::string& s) {
    if (s == "waveguide") return KernelKind::Waveguide1D;
    if (s == "transverse") return KernelKind::FreeSpace3DTransverse;
    if (s == "parallel") return KernelKind::FreeSpace3DParallel;
    throw std::invalid_argument("unknown kernel '" + s + "' (waveguide | transverse | parallel)");
}

void RunConfig::validate() const {
    if (!kExperiments.count(experiment)) fail("unknown experiment '" + experiment + "'");
    if (n_values.empty() && experiment != "map-check") fail("n list is empty");
    const int min_n = (experiment == "defect" || experiment == "freespace") ? 3 : 2;
    for (int n : n_values)
        if (n < min_n) fail("N must be >= " + std::to_string(min_n));
    if (!(gamma > 0.0) || !std::isfinite(gamma)) fail("gamma must be positive");
    if (experiment != "freespace") {
        if (kd_values.empty()) fail("kd list is empty");
        for (double kd : kd_values)
            if (!(kd > 0.0 && kd < 0.5 * kPi)) fail("kd must lie in (0, pi/2)");
    }
    solver.validate(std::numeric_limits<Index>::max());
    if (!(thresholds.eigenvalue_window > 0.0) || !(thresholds.overlap > 0.0 && thresholds.overlap <= 1.0) ||
        !(thresholds.k_concentration > 0.0 && thresholds.k_concentration <= 1.0) || !(thresholds.k_window > 0.0) ||
        thresholds.fermionic_modes < 2)
        fail("classifier thresholds out of range");
    if (jobs < 1) fail("jobs must be >= 1");
    if (disorder.samples < 0) fail("disorder.samples must be >= 0");
    for (double d : disorder.deltas)
        if (!(d >= 0.0 && d < 0.5)) fail("disorder.delta must lie in [0, 0.5)");
    if (experiment == "disorder") {
        if (disorder.deltas.empty() || disorder.samples < 1) fail("disorder needs delta values and samples >= 1");
        if (!disorder.seed) fail("disorder sampling requires disorder.seed");
    }
    for (int m : defect_sites)
        for (int n : n_values)
            if (m < 2 || m > n - 1) fail("defect site " + std::to_string(m) + " outside 2..N-1 for N = " + std::to_string(n));
    if (experiment == "freespace") {
        if (kernel == KernelKind::Waveguide1D) fail("freespace needs a 3D kernel");
        if (d_over_lambda.empty()) fail("freespace needs d_over_lambda");
    } else if (kernel != KernelKind::Waveguide1D) {
        fail("kernel must be waveguide for " + experiment);
    }
    for (double r : d_over_lambda)
        if (!(r > 0.0) || !std::isfinite(r)) fail("d_over_lambda must be positive");
    if (experiment == "map-check" && m_values.empty()) fail("map-check needs m_values");
    for (int m : m_values)
        if (m < 1) fail("m_values must be >= 1");
}

RunConfig parse_run_config(const json& doc) {
    check_keys(doc,
               {"experiment", "n", "n_range", "kd_pi", "kd_range_pi", "gamma", "solver", "classifier", "disorder",
                "defect_sites", "defect_scan", "kernel", "d_over_lambda", "m_values", "jobs", "dump_vectors", "plot",
                "output_dir", "seed"},
               "config");
    if (!doc.contains("experiment")) fail("missing 'experiment'");
    RunConfig c = default_config(get_string(doc["experiment"], "experiment"));
    if (doc.contains("n") && doc.contains("n_range")) fail("give either n or n_range");
    if (doc.contains("kd_pi") && doc.contains("kd_range_pi")) fail("give either kd_pi or kd_range_pi");
    if (doc.contains("n")) c.n_values = int_list(doc["n"], "n");
    if (doc.contains("n_range")) {
        c.n_values.clear();
        for (double x : range(doc["n_range"], "n_range")) c.n_values.push_back(static_cast<int>(std::lround(x)));
    }
    if (doc.contains("kd_pi") || doc.contains("kd_range_pi")) {
        const auto list = doc.contains("kd_pi") ? number_list(doc["kd_pi"], "kd_pi") : range(doc["kd_range_pi"], "kd_range_pi");
        c.kd_values.clear();
        for (double x : list) c.kd_values.push_back(kPi * x);
    }
    if (doc.contains("gamma")) c.gamma = get_number(doc["gamma"], "gamma");
    if (doc.contains("solver")) parse_solver(doc["solver"], c);
    if (doc.contains("classifier")) parse_classifier(doc["classifier"], c.thresholds);
    if (doc.contains("disorder")) parse_disorder(doc["disorder"], c.disorder);
    if (doc.contains("defect_sites")) c.defect_sites = int_list(doc["defect_sites"], "defect_sites");
    if (doc.contains("defect_scan")) c.defect_scan = get_bool(doc["defect_scan"], "defect_scan");
    if (doc.contains("kernel")) {
        try {
            c.kernel = kernel_kind_from_string(get_string(doc["kernel"], "kernel"));
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
    if (doc.contains("d_over_lambda")) c.d_over_lambda = number_list(doc["d_over_lambda"], "d_over_lambda");
    if (doc.contains("m_values")) c.m_values = int_list(doc["m_values"], "m_values");
    if (doc.contains("jobs")) c.jobs = static_cast<int>(get_integer(doc["jobs"], "jobs"));
    if (doc.contains("dump_vectors")) c.dump_vectors = get_bool(doc["dump_vectors"], "dump_vectors");
    if (doc.contains("plot")) c.plot = get_bool(doc["plot"], "plot");
    if (doc.contains("output_dir")) c.output_dir = get_string(doc["output_dir"], "output_dir");
    if (doc.contains("seed")) c.seed = get_seed(doc["seed"], "seed");
    c.solver.seed = c.seed;
    c.validate();
    return c;
}

RunConfig load_run_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open config file " + file.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: " + file.string() + ": " + e.what());
    }
    return parse_run_config(doc);
}

json to_json(const RunConfig& c) {
    json j;
    j["experiment"] = c.experiment;
    j["n"] = c.n_values;
    std::vector<double> kd_pi;
    for (double kd : c.kd_values) kd_pi.push_back(kd / kPi);
    j["kd_pi"] = kd_pi;
    j["gamma"] = c.gamma;
    j["solver"] = {{"mode", to_string(c.solver.mode)},
                   {"count", c.solver.count},
                   {"max_subspace", c.solver.subspace()},
                   {"tol", c.solver.tol},
                   {"max_restarts", c.solver.max_restarts},
                   {"dense_cap", c.solver.dense_cap},
                   {"inner_tol_factor", c.solver.inner_tol_factor},
                   {"gmres_restart", c.solver.gmres_restart},
                   {"gmres_max_iter", c.solver.gmres_max_iter},
                   {"preconditioner", c.solver.precond == Preconditioner::Jacobi ? "jacobi" : "kronecker-sum"},
                   {"iterative_fallback", c.iterative_fallback}};
    j["classifier"] = {{"eigenvalue_window", c.thresholds.eigenvalue_window},
                       {"overlap", c.thresholds.overlap},
                       {"k_concentration", c.thresholds.k_concentration},
                       {"k_window_pi", c.thresholds.k_window / kPi},
                       {"fermionic_modes", c.thresholds.fermionic_modes}};
    json dis = {{"delta", c.disorder.deltas}, {"samples", c.disorder.samples}};
    if (c.disorder.seed) dis["seed"] = *c.disorder.seed;
    j["disorder"] = dis;
    j["defect_sites"] = c.defect_sites;
    j["defect_scan"] = c.defect_scan;
    j["kernel"] = to_string(c.kernel);
    j["d_over_lambda"] = c.d_over_lambda;
    j["m_values"] = c.m_values;
    j["jobs"] = c.jobs;
    j["dump_vectors"] = c.dump_vectors;
    j["plot"] = c.plot;
    j["output_dir"] = c.output_dir.string();
    j["seed"] = c.seed;
    return j;
}

RunConfig default_config(const std::string& experiment) {
    if (!kExperiments.count(experiment)) fail("unknown experiment '" + experiment + "'");
    RunConfig c;
    c.experiment = experiment;
    c.solver.count = 12;
    auto n_range = [](int from, int to, int step) {
        std::vector<int> v;
        for (int n = from; n <= to; n += step) v.push_back(n);
        return v;
    };
    auto kd_range = [](double from, double to, double step) {
        std::vector<double> v;
        const long long count = static_cast<long long>(std::floor((to - from) / step + 1e-9)) + 1;
        for (long long i = 0; i < count; ++i) v.push_back(kPi * (from + static_cast<double>(i) * step));
        return v;
    };
    if (experiment == "spectrum") {
        c.n_values = {50};
        c.kd_values = {0.2 * kPi};
        c.solver.mode = SolverMode::DenseAll;
    } else if (experiment == "phase-diagram") {
        c.n_values = {24, 36, 48};
        c.kd_values = kd_range(0.10, 0.45, 0.001);
    } else if (experiment == "scaling") {
        c.n_values = n_range(50, 150, 1);
        c.kd_values = {0.1676 * kPi, 0.25 * kPi};
    } else if (experiment == "defect") {
        c.n_values = n_range(11, 41, 2);
        c.kd_values = {0.25 * kPi};
    } else if (experiment == "disorder") {
        c.n_values = {60};
        c.kd_values = {0.15 * kPi, kPi / 6.0, 0.19 * kPi};
        c.disorder.deltas = {0.005, 0.01, 0.02};
        c.disorder.samples = 10;
        c.disorder.seed = 1;
    } else if (experiment == "freespace") {
        c.n_values = {100, 120, 160, 200};
        c.kernel = KernelKind::FreeSpace3DTransverse;
        c.d_over_lambda = {0.35, 0.45};
    } else if (experiment == "map-check") {
        c.n_values = {100};
        c.kd_values = {0.1 * kPi, 0.2 * kPi, 0.25 * kPi, 0.3 * kPi, 0.45 * kPi};
        c.m_values = {1, 2, 5, 10, 30};
    }
    c.output_dir = "out";
    return c;
}

}  // namespace subrad
