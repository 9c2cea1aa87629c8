#include "doctest.h"
#include "oracles.hpp"

#include "subrad/analysis.hpp"

#include <cmath>

using namespace subrad;

namespace {

std::vector<LabeledPair> targeted(const ChainGeometry& c, const ClassifierContext& ctx, cplx target, int count) {
    const TwoExcitationOperator op(c, CouplingKernel::of(c));
    SolverConfig cfg;
    cfg.target = target;
    cfg.count = count;
    return classify_spectrum(eig_target(op, cfg), ctx);
}

}  // namespace

TEST_CASE("decay rates") {
    EigenPair p;
    p.lambda = cplx{0.3, -0.5};
    CHECK(decay_rate(p) == 1.0);
    const auto c = ChainGeometry::regular(2, 0.7);
    const Spectrum s = eig_dense_all(build_two_hamiltonian(c, CouplingKernel::of(c), TwoExcitationBasis(2)));
    REQUIRE(s.size() == 1);
    CHECK(decay_rate(s[0]) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("K-Delta frame reproduces its own elements") {
    const int n = 20;
    const auto c = ChainGeometry::regular(n, 0.3 * kPi);
    for (int j : {0, 3, 10, 17})
        for (int delta : {1, 2, 7}) {
            Vec st = k_delta_state(c, 2.0 * kPi * j / n, delta);
            st.normalize();
            const KDeltaDecomposition k = k_delta_decompose(st, c);
            CAPTURE(j);
            CAPTURE(delta);
            // Minimum-norm frame coefficient of a normalized element: (N - Delta) / N.
            CHECK(std::abs(k.coeff(j, delta - 1)) == doctest::Approx(double(n - delta) / n).epsilon(1e-12));
            CHECK(k.coeff.cwiseAbs().maxCoeff() == doctest::Approx(std::abs(k.coeff(j, delta - 1))));
            CHECK(k.dominant_delta == delta);
            CHECK(k.dominant_kd == doctest::Approx(2.0 * kPi * j / n));
            CHECK(k.residual < 1e-12);
            CHECK(k.coefficient_norm2 <= 1.0 + 1e-10);
            CHECK_FALSE(k.rank_deficient);
        }
}

TEST_CASE("property: K-Delta coefficients are bounded and synthesize the state") {
    SplitMix64 rng(2024);
    for (int t = 0; t < 20; ++t) {
        const int n = 3 + static_cast<int>(rng.uniform() * 40);
        const Vec st = oracle::random_unit(static_cast<Index>(n) * (n - 1) / 2, 500 + static_cast<std::uint64_t>(t));
        const KDeltaDecomposition k = k_delta_decompose(st, n);
        CAPTURE(n);
        CHECK(k.coefficient_norm2 <= 1.0 + 1e-10);
        CHECK(k.residual < 1e-12);
        double dm = 0.0, km = 0.0;
        for (double x : k.delta_marginal) dm += x;
        for (double x : k.k_marginal) km += x;
        CHECK(dm == doctest::Approx(1.0));
        CHECK(km == doctest::Approx(1.0));
        CHECK(k.odd_weight() + (1.0 - k.odd_weight()) == doctest::Approx(1.0));
        CHECK(k.weight_beyond(0) == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(k_delta_decompose(Vec(7), 5), std::invalid_argument);
    CHECK_THROWS_AS(k_delta_decompose(Vec(10), ChainGeometry::regular(6, 0.3)), std::invalid_argument);
}

TEST_CASE("type I dimer at N = 25, kd = 0.45 pi") {
    const auto c = ChainGeometry::regular(25, 0.45 * kPi);
    const ClassifierContext ctx(c);
    const auto states = targeted(c, ctx, ctx.omega_i(), 10);
    const LabeledPair& d = most_subradiant(states, StateLabel::DimerI, ctx.omega_i());
    CHECK(d.cls.dominant_delta == 1);
    CHECK(d.cls.k_concentration_0 > 0.5);
    const KDeltaDecomposition k = k_delta_decompose(d.pair.vector, c);
    const double kd = std::min(k.dominant_kd, 2.0 * kPi - k.dominant_kd);
    CHECK(kd <= 2.0 * kPi / 25 + 1e-12);
}

TEST_CASE("type II dimer at N = 25, kd = 0.25 pi: dominant bin") {
    const auto c = ChainGeometry::regular(25, 0.25 * kPi);
    const ClassifierContext ctx(c);
    const auto states = targeted(c, ctx, ctx.omega_ii(), 10);
    const LabeledPair& d = most_subradiant(states, StateLabel::DimerII, ctx.omega_ii());
    CHECK(d.cls.dominant_delta == 2);
    CHECK(d.cls.k_concentration_pi > 0.9);
    const KDeltaDecomposition k = k_delta_decompose(d.pair.vector, c);
    CHECK(std::abs(k.dominant_kd - kPi) <= 2.0 * kPi / 25);
}

TEST_CASE("type II dimer at N = 25, kd = 0.25 pi: odd separations suppressed") {
    const auto c = ChainGeometry::regular(25, 0.25 * kPi);
    const ClassifierContext ctx(c);
    const auto states = targeted(c, ctx, ctx.omega_ii(), 10);
    const LabeledPair& d = most_subradiant(states, StateLabel::DimerII, ctx.omega_ii());
    CHECK(d.cls.odd_weight < 1e-3);
}

TEST_CASE("both dimer branches appear at N = 50, kd = 0.2 pi") {
    const auto c = ChainGeometry::regular(50, 0.2 * kPi);
    const ClassifierContext ctx(c);
    const auto one = targeted(c, ctx, ctx.omega_i(), 8);
    const auto two = targeted(c, ctx, ctx.omega_ii(), 8);
    CHECK_NOTHROW(most_subradiant(one, StateLabel::DimerI, ctx.omega_i()));
    CHECK_NOTHROW(most_subradiant(two, StateLabel::DimerII, ctx.omega_ii()));
    for (const auto& s : one) CHECK(s.cls.label != StateLabel::DimerII);
    for (const auto& s : two) CHECK(s.cls.label != StateLabel::DimerI);
}

TEST_CASE("fermionic and random states") {
    const auto c = ChainGeometry::regular(30, 0.2 * kPi);
    const ClassifierContext ctx(c);
    EigenPair f;
    f.vector = ctx.fermionic_state(0, 1);
    f.lambda = ctx.single_spectrum()[0].lambda + ctx.single_spectrum()[1].lambda;
    const StateClass fc = classify_state(f, ctx);
    CHECK(fc.label == StateLabel::Fermionic);
    CHECK(fc.fermionic_overlap == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fc.fermionic_modes == std::pair<int, int>{0, 1});

    EigenPair r;
    r.vector = oracle::random_unit(435, 9);
    r.lambda = cplx{0.0, -1.0};
    CHECK(classify_state(r, ctx).label == StateLabel::Other);

    // Global phases change nothing.
    for (const EigenPair* p : {&f, &r}) {
        EigenPair q = *p;
        q.vector *= std::polar(1.0, 1.234);
        const StateClass a = classify_state(*p, ctx), b = classify_state(q, ctx);
        CHECK(a.label == b.label);
        CHECK(a.dominant_delta == b.dominant_delta);
        CHECK(a.dominant_kd == b.dominant_kd);
        CHECK(a.k_concentration_0 == doctest::Approx(b.k_concentration_0).epsilon(1e-12));
        CHECK(a.k_concentration_pi == doctest::Approx(b.k_concentration_pi).epsilon(1e-12));
        CHECK(a.fermionic_overlap == doctest::Approx(b.fermionic_overlap).epsilon(1e-12));
        CHECK(a.odd_weight == doctest::Approx(b.odd_weight).epsilon(1e-12));
    }
}

TEST_CASE("fermionic reference") {
    const double phi = 0.9;
    CHECK(fermionic_reference(ChainGeometry::regular(2, phi)) == doctest::Approx(2.0));
    double prev = 1e300;
    for (int n = 20; n <= 100; n += 10) {
        const double r = fermionic_reference(ChainGeometry::regular(n, 0.2 * kPi));
        CHECK(r < prev);
        prev = r;
    }
    // The sum rule brackets the most subradiant fermionic eigenstate.
    const auto c = ChainGeometry::regular(50, 0.2 * kPi);
    const ClassifierContext ctx(c);
    const cplx target = ctx.single_spectrum()[0].lambda + ctx.single_spectrum()[1].lambda;
    const auto states = targeted(c, ctx, cplx{target.real(), 0.0}, 8);
    const LabeledPair& fs = most_subradiant(states, StateLabel::Fermionic);
    CHECK(fs.pair.decay() == doctest::Approx(fermionic_reference(c)).epsilon(0.2));
}

TEST_CASE("most subradiant selection") {
    const auto c = ChainGeometry::regular(48, 0.1676 * kPi);
    const ClassifierContext ctx(c);
    const auto states = targeted(c, ctx, ctx.omega_ii(), 10);
    const LabeledPair& d = most_subradiant(states, StateLabel::DimerII, ctx.omega_ii());
    CHECK(d.pair.decay() < ctx.single_spectrum()[0].decay());

    LabeledPair only;
    only.cls.label = StateLabel::DimerI;
    const std::vector<LabeledPair> one{only};
    CHECK_THROWS_AS(most_subradiant(one, StateLabel::Other), std::runtime_error);

    // Equal rates fall back to the distance from the reference frequency.
    std::vector<LabeledPair> tie(2);
    tie[0].pair.lambda = cplx{1.0, -0.1};
    tie[1].pair.lambda = cplx{0.2, -0.1};
    tie[0].cls.label = tie[1].cls.label = StateLabel::DimerII;
    CHECK(most_subradiant(tie, StateLabel::DimerII, 0.0).pair.lambda.real() == 0.2);
}

TEST_CASE("power-law and exponential fits") {
    std::vector<std::pair<double, double>> s;
    for (int n = 20; n <= 80; ++n) s.emplace_back(n, 7.0 * std::pow(n, -3.0));
    const FitResult f = fit_power_law(s);
    CHECK(f.exponent == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(std::abs(f.exponent + 3.0) < 1e-6);
    CHECK(f.amplitude == doctest::Approx(7.0));
    CHECK(f.window_lo == 30.0);
    CHECK(f.window_hi == 80.0);
    CHECK(f.points == 51);
    CHECK(f.r2 == doctest::Approx(1.0));
    const FitResult w = fit_power_law(s, std::make_pair(40.0, 50.0));
    CHECK(w.points == 11);

    std::vector<std::pair<double, double>> e;
    for (int d = 1; d <= 10; ++d) e.emplace_back(d, 3.0 * std::pow(0.5, d));
    const FitResult x = fit_exponential_tail(e);
    CHECK(x.ratio == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(x.model == FitModel::Exponential);

    auto bad = s;
    bad[40].second = 0.0;
    CHECK_THROWS_AS(fit_power_law(bad), std::invalid_argument);
    CHECK_THROWS_AS(fit_power_law({{1, 1}, {2, 2}, {3, 3}, {4, 4}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_exponential_tail({{1, 1}, {2, 0.5}, {3, -1}, {4, 0.1}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_exponential_tail({{1, 1}, {2, 0.5}, {3, 0.2}}), std::invalid_argument);

    SplitMix64 rng(8);
    for (int t = 0; t < 20; ++t) {
        std::vector<std::pair<double, double>> noisy;
        for (int n = 10; n < 40; ++n) noisy.emplace_back(n, std::pow(n, -2.0) * rng.uniform(0.5, 1.5));
        const FitResult r = fit_power_law(noisy);
        CHECK(r.r2 >= 0.0);
        CHECK(r.r2 <= 1.0);
        CHECK(r.window_lo >= 10.0);
        CHECK(r.window_hi <= 39.0);
    }
}

TEST_CASE("period-4 modulation") {
    std::vector<std::pair<double, double>> mod, flat;
    for (int n = 60; n <= 120; ++n) {
        mod.emplace_back(n, std::pow(n, -3.0) * (1.0 + 0.1 * std::cos(kPi * n / 2.0)));
        flat.emplace_back(n, std::pow(n, -3.0) * (1.0 + 0.01 / n));
    }
    const ModulationReport r = period4_modulation(mod);
    CHECK(r.dominant_period == 4);
    CHECK(r.significant);
    CHECK(r.period4_amplitude == doctest::Approx(0.1).epsilon(0.05));
    CHECK(r.autocorrelation.size() == 8);
    CHECK_FALSE(period4_modulation(flat).significant);
    // A noise floor above the modulation hides it.
    CHECK_FALSE(period4_modulation(mod, 0.05).significant);

    std::vector<std::pair<double, double>> period2;
    for (int n = 60; n <= 120; ++n) period2.emplace_back(n, std::pow(n, -3.0) * (1.0 + 0.1 * ((n % 2) ? 1 : -1)));
    CHECK_FALSE(period4_modulation(period2).significant);

    CHECK_THROWS_AS(period4_modulation(std::vector<std::pair<double, double>>(mod.begin(), mod.begin() + 10)),
                    std::invalid_argument);
    auto gap = mod;
    gap.erase(gap.begin() + 5);
    CHECK_THROWS_AS(period4_modulation(gap), std::invalid_argument);
}

TEST_CASE("branch clustering") {
    const std::vector<cplx> eig = {{-1.0, -0.001}, {-0.95, -0.002}, {0.0, -0.005}, {0.1, -0.004},
                                   {2.0, -0.0001}, {5.0, -0.5}};
    const auto b = cluster_branches(eig);
    REQUIRE(b.size() == 3);
    CHECK(b[0].members == 2);
    CHECK(b[0].re_min == -1.0);
    CHECK(b[0].re_max == -0.95);
    CHECK(b[1].min_decay == doctest::Approx(0.008));
    CHECK(b[2].members == 1);
    CHECK(cluster_branches({}).empty());
}
