#include "doctest.h"

#include "subrad/experiments.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace subrad;
using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig small(const std::string& experiment) {
    RunConfig c = default_config(experiment);
    c.plot = false;
    return c;
}

// CSV with the wall-time column blanked.
std::string without_wall_time(std::vector<SweepRecord> records) {
    for (auto& r : records) r.wall_seconds = 0.0;
    return to_csv(records);
}

}  // namespace

TEST_CASE("config parsing is strict") {
    const RunConfig c = parse_run_config(json::parse(R"({"experiment": "spectrum", "n": [4, 6], "kd_pi": [0.25]})"));
    CHECK(c.n_values == std::vector<int>{4, 6});
    REQUIRE(c.kd_values.size() == 1);
    CHECK(c.kd_values[0] == doctest::Approx(0.25 * kPi));
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"experiment": "spectrum", "bogus": 1})")), std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"experiment": "spectrum", "solver": {"tolerance": 1}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"experiment": "spectrum", "n": "ten"})")), std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"experiment": "nonsense"})")), std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"n": [4]})")), std::invalid_argument);

    const RunConfig r = parse_run_config(json::parse(R"({"experiment": "scaling", "n_range": {"from": 10, "to": 16, "step": 2}})"));
    CHECK(r.n_values == std::vector<int>{10, 12, 14, 16});

    RunConfig bad = small("disorder");
    bad.disorder.seed.reset();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = small("spectrum");
    bad.kd_values = {0.5 * kPi};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = small("defect");
    bad.defect_sites = {1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    // The emitted document parses back to the same configuration.
    const RunConfig d = small("disorder");
    const RunConfig back = parse_run_config(to_json(d));
    CHECK(to_json(back) == to_json(d));
}

TEST_CASE("sweep records") {
    SweepRecord r;
    r.experiment = "spectrum";
    r.n = 7;
    r.kd = 0.1 * kPi;
    r.sector = "two";
    r.label = "Dimer, \"odd\"";
    r.lambda = {1.25, -0.0123456789012345};
    r.solver = "dense";
    r.residual = 3e-15;
    r.wall_seconds = 0.5;
    r.seed = 18446744073709551615ull;
    r.sample = 3;
    CHECK(r.decay() == -2.0 * r.lambda.imag());
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("plain") == "plain");

    const std::string text = to_csv({r, r});
    CHECK(text.find("\r\n") != std::string::npos);
    const auto back = parse_csv(text);
    REQUIRE(back.size() == 2);
    CHECK(back[0].label == r.label);
    CHECK(back[0].lambda == r.lambda);
    CHECK(back[0].seed == r.seed);
    CHECK(back[0].sample == 3);
    CHECK(to_csv(back) == text);
    CHECK_THROWS_AS(parse_csv("a,b\r\n"), std::invalid_argument);

    const json v = vector_to_json(Vec::Constant(2, cplx{1.0, -2.0}));
    CHECK(v.dump() == "[[1.0,-2.0],[1.0,-2.0]]");
}

TEST_CASE("plot naming") {
    RunConfig a = small("spectrum");
    RunConfig b = a;
    b.output_dir = "elsewhere";
    b.jobs = 4;
    const std::string name = plot_file_name(a);
    CHECK(name.rfind("spectrum-", 0) == 0);
    CHECK(name.size() == std::string("spectrum-").size() + 16 + 4);
    CHECK(name.substr(name.size() - 4) == ".svg");
    CHECK(plot_file_name(b) == name);
    b.n_values = {51};
    CHECK(plot_file_name(b) != name);
    CHECK(plot_file_name(a, "x") != name);
    CHECK(fnv1a("") == 14695981039346656037ull);

    LinePlot lp{"t", "x", "y", true, true, {{"s", {1.0, 10.0}, {2.0, 20.0}, true}}};
    const std::string svg = render_svg(lp);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("parallel map keeps order and propagates errors") {
    const auto v = parallel_map<int>(3, 50, [](std::size_t i) { return static_cast<int>(i * i); });
    REQUIRE(v.size() == 50);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<int>(i * i));
    std::atomic<int> calls{0};
    CHECK_THROWS_AS(parallel_map<int>(2, 20,
                                      [&](std::size_t i) {
                                          ++calls;
                                          if (i == 7) throw std::runtime_error("boom");
                                          return 0;
                                      }),
                    std::runtime_error);
    CHECK(parallel_map<int>(4, 0, [](std::size_t) { return 1; }).empty());
}

TEST_CASE("spectrum command: two emitters and the trace") {
    RunConfig c = small("spectrum");
    c.n_values = {2};
    c.kd_values = {0.3 * kPi};
    RunResult r = run_experiment(c);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].decay() == doctest::Approx(2.0).epsilon(1e-12));

    c.n_values = {20};
    r = run_experiment(c);
    REQUIRE(r.records.size() == 190);
    cplx sum{0.0, 0.0};
    for (const auto& rec : r.records) {
        sum += rec.lambda;
        CHECK(rec.decay() == -2.0 * rec.lambda.imag());
    }
    CHECK(std::abs(sum - cplx{0.0, -190.0}) < 1e-10);
    CHECK(r.summary["points"][0]["trace_error"].get<double>() < 1e-10);
}

TEST_CASE("spectrum command refuses the dense path above the cap") {
    RunConfig c = small("spectrum");
    c.n_values = {80};
    c.iterative_fallback = false;
    CHECK_THROWS_AS(run_experiment(c), std::length_error);
    CHECK(resolve_mode(c, 100) == SolverMode::DenseAll);
    c.iterative_fallback = true;
    CHECK(resolve_mode(c, 3160) == SolverMode::ShiftInvertDirect);
}

TEST_CASE("deterministic reruns") {
    RunConfig c = small("spectrum");
    c.n_values = {12, 14};
    c.kd_values = {0.2 * kPi, 0.3 * kPi};
    const RunResult a = run_experiment(c);
    c.jobs = 3;
    const RunResult b = run_experiment(c);
    CHECK(without_wall_time(a.records) == without_wall_time(b.records));

    RunConfig d = small("disorder");
    d.n_values = {16};
    d.disorder.deltas = {0.01};
    d.disorder.samples = 2;
    d.jobs = 2;
    const RunResult x = run_experiment(d);
    d.jobs = 1;
    const RunResult y = run_experiment(d);
    CHECK(without_wall_time(x.records) == without_wall_time(y.records));

    const auto dir = std::filesystem::temp_directory_path() / "subrad_test_outputs";
    std::filesystem::remove_all(dir);
    c.output_dir = dir;
    c.plot = true;
    const auto files = write_outputs(c, a);
    CHECK(std::filesystem::exists(dir / "spectrum.csv"));
    const json summary = json::parse(read_file(dir / "spectrum-summary.json"));
    CHECK(summary["schema_version"] == kSweepSchemaVersion);
    CHECK(parse_csv(read_file(dir / "spectrum.csv")).size() == a.records.size());
    CHECK(files.size() >= 3);
    std::filesystem::remove_all(dir);
}

TEST_CASE("disorder: zero amplitude reproduces the clean chain bit for bit") {
    const ChainGeometry clean = ChainGeometry::regular(12, 0.2 * kPi);
    const ChainGeometry zero = disordered_chain(12, 0.2 * kPi, 1.0, 0.0, 9, 4);
    CHECK(zero.positions() == clean.positions());
    const ChainGeometry a = disordered_chain(12, 0.2 * kPi, 1.0, 0.01, 9, 4);
    const ChainGeometry b = disordered_chain(12, 0.2 * kPi, 1.0, 0.01, 9, 4);
    const ChainGeometry other = disordered_chain(12, 0.2 * kPi, 1.0, 0.01, 9, 5);
    CHECK(a.positions() == b.positions());
    CHECK(a.positions() != other.positions());
    for (int i = 0; i < 12; ++i) CHECK(std::abs(a.offset(i)) <= 0.01);

    RunConfig c = small("disorder");
    c.n_values = {20};
    c.disorder.deltas = {0.0};
    c.disorder.samples = 3;
    const RunResult r = run_experiment(c);
    CHECK(r.summary["results"][0]["groups"][0]["identical_to_clean"].get<bool>());
    for (const auto& rec : r.records) CHECK(rec.seed == 1u);
}

TEST_CASE("defect command: mirror sites and the secular prediction") {
    RunConfig c = small("defect");
    c.n_values = {60};
    c.defect_sites = {5, 56};
    const RunResult r = run_experiment(c);
    const auto& pts = r.summary["points"];
    REQUIRE(pts.size() == 2);
    const double a = pts[0]["numeric_rate"].get<double>();
    const double b = pts[1]["numeric_rate"].get<double>();
    CHECK(std::abs(a - b) <= 1e-10);

    c.n_values = {40};
    c.defect_sites = {};
    c.kd_values = {0.3 * kPi};
    const RunResult s = run_experiment(c);
    CHECK(s.summary["points"][0]["secular_relative_error"].get<double>() < 0.05);
}

TEST_CASE("phase diagram: no crossover at large kd") {
    RunConfig c = small("phase-diagram");
    c.n_values = {20};
    c.kd_values = {0.45 * kPi};
    const RunResult r = run_experiment(c);
    REQUIRE(r.summary["columns"].size() == 1);
    CHECK(r.summary["columns"][0]["crossover_one_excitation"].is_null());
    CHECK(r.summary["color_scale"] == "log10");
}

TEST_CASE("map check over a small grid") {
    RunConfig c = small("map-check");
    c.n_values = {30};
    c.kd_values = {0.2 * kPi, 0.3 * kPi};
    c.m_values = {1, 4, 9};
    const RunResult r = run_experiment(c);
    CHECK(r.summary["max_fold_residual"].get<double>() <= 1e-12);
    CHECK(r.summary["max_halving_distance"].get<double>() <= 1e-10);
    CHECK(r.summary["max_parity_error"].get<double>() <= 1e-14);
    CHECK(r.summary["max_odd_even_coupling"].get<double>() == 0.0);
    for (const auto& o : r.summary["dimer_overlaps"]) CHECK(o["overlap"].get<double>() > 0.99);
}

TEST_CASE("free-space localized state") {
    RunConfig c = small("freespace");
    c.n_values = {41, 61};
    c.d_over_lambda = {0.35};
    const RunResult r = run_experiment(c);
    const auto& pts = r.summary["groups"][0]["points"];
    REQUIRE(pts.size() == 2);
    for (const auto& p : pts) {
        CHECK(p["decay"].get<double>() > 0.0);
        CHECK(p["edge_to_peak"].get<double>() < 0.05);
    }
}
