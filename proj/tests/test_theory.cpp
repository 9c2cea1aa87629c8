#include "doctest.h"
#include "oracles.hpp"

#include "subrad/eig.hpp"
#include "subrad/model.hpp"
#include "subrad/theory.hpp"

#include <cmath>
#include <limits>

using namespace subrad;

namespace {

const double kKdGrid[] = {0.1 * kPi, 0.2 * kPi, 0.25 * kPi, 0.3 * kPi, 0.45 * kPi};

// sum_{Delta=1..M} e^{i p Delta} |Delta>
Vec plane_wave(int M, cplx p) {
    Vec v(M);
    for (int s = 1; s <= M; ++s) v(s - 1) = std::exp(kI * p * static_cast<double>(s));
    return v;
}

}  // namespace

TEST_CASE("asymptotic dimers") {
    const DimerTheory a = asymptotic_dimer(0.25 * kPi, DimerType::TypeI);
    CHECK(a.omega == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(a.dominant_delta == 1);
    CHECK(a.center_kd == 0.0);
    CHECK(std::abs(a.qd - cplx{0.0, 0.5 * std::log(2.0)}) < 1e-15);

    const DimerTheory b = asymptotic_dimer(0.25 * kPi, DimerType::TypeII);
    CHECK(std::abs(b.omega) < 1e-15);
    CHECK(std::isinf(b.qd.imag()));
    CHECK(b.center_kd == doctest::Approx(kPi));

    CHECK(asymptotic_dimer(0.1 * kPi, DimerType::TypeI).omega == doctest::Approx(6.15537).epsilon(1e-6));
    CHECK(asymptotic_dimer(0.1 * kPi, DimerType::TypeI, 3.0).omega ==
          doctest::Approx(3.0 * 6.155367074350508));

    for (double kd : kKdGrid) {
        const DimerTheory t = asymptotic_dimer(kd, DimerType::TypeI);
        CHECK(t.qd.imag() == doctest::Approx(-std::log(std::cos(kd))));
        CHECK(t.qd.imag() > 0.0);
        CHECK(std::isfinite(t.omega));
    }
    // Type II at kd is type I at 2kd plus a phase pi/2 per unit of Delta.
    for (double kd : {0.05 * kPi, 0.1 * kPi, 0.2 * kPi, 0.24 * kPi}) {
        const DimerTheory t2 = asymptotic_dimer(kd, DimerType::TypeII);
        const DimerTheory t1 = asymptotic_dimer(2.0 * kd, DimerType::TypeI);
        CHECK(std::abs(t2.qd - 0.5 * (kPi + t1.qd)) < 1e-14);
        CHECK(t2.omega == doctest::Approx(t1.omega));
        CHECK(t2.qd.imag() > 0.0);
    }
    CHECK_THROWS_AS(asymptotic_dimer(0.0, DimerType::TypeI), std::invalid_argument);
    CHECK_THROWS_AS(asymptotic_dimer(0.5 * kPi, DimerType::TypeII), std::invalid_argument);
    CHECK_THROWS_AS(asymptotic_dimer(std::nan(""), DimerType::TypeI), std::invalid_argument);
}

TEST_CASE("dimer profile distributions") {
    const auto p1 = dimer_profile_pdf(0.25 * kPi, DimerType::TypeI, 12);
    double total = 0.0;
    for (std::size_t i = 0; i < p1.size(); ++i) {
        total += p1[i];
        if (i) CHECK(p1[i] / p1[i - 1] == doctest::Approx(0.5).epsilon(1e-12));
    }
    CHECK(total == doctest::Approx(1.0));

    const auto p2 = dimer_profile_pdf(0.25 * kPi, DimerType::TypeII, 12);
    CHECK(p2[1] == 1.0);
    for (std::size_t i = 0; i < p2.size(); ++i)
        if (i != 1) CHECK(p2[i] == 0.0);

    const auto p3 = dimer_profile_pdf(0.2 * kPi, DimerType::TypeII, 20);
    const double r = std::pow(std::cos(0.4 * kPi), 2);
    CHECK(r == doctest::Approx(0.0955).epsilon(1e-3));
    for (int s = 4; s <= 20; s += 2) {
        CHECK(p3[static_cast<std::size_t>(s - 1)] / p3[static_cast<std::size_t>(s - 3)] ==
              doctest::Approx(r).epsilon(1e-12));
        CHECK(p3[static_cast<std::size_t>(s - 2)] == 0.0);
    }
}

TEST_CASE("dispersion and boundary coefficients") {
    SplitMix64 rng(77);
    for (int t = 0; t < 50; ++t) {
        const double kd = rng.uniform(0.05, 1.5);
        const cplx q{rng.uniform(-2.0, 2.0), rng.uniform(0.0, 2.0)};
        CHECK(std::abs(omega_q(kd, q) - omega_q(kd, -q)) <= 1e-12 * std::abs(omega_q(kd, q)));
    }
    for (double kd : kKdGrid) {
        const cplx qi = asymptotic_dimer(kd, DimerType::TypeI).qd;
        CHECK(std::abs(omega_q(kd, qi) - 1.0 / std::tan(kd)) < 1e-12);
        const BoundaryCoefficients b = boundary_coefficients(600, kd, qi);
        CHECK(std::abs(b.omega_q - 2.0 / std::tan(kd)) < 1e-12);
        CHECK(std::abs(large_n_boundary_root(kd) - qi) < 1e-13);
    }
    // g0 and h0 vanish at q_I once e^{iqN} is negligible.
    const double kd = 0.3 * kPi;
    const cplx qi = asymptotic_dimer(kd, DimerType::TypeI).qd;
    const BoundaryCoefficients big = boundary_coefficients(500, kd, qi);
    CHECK(std::abs(big.g0) < 1e-12);
    CHECK(std::abs(big.h0) < 1e-12);
    double prev = std::numeric_limits<double>::infinity();
    for (int n : {5, 10, 20, 40, 80}) {
        const double h = std::abs(boundary_coefficients(n, kd, cplx{0.3, 0.4}).h0);
        CHECK(h < prev);
        prev = h;
    }
    CHECK_THROWS_AS(boundary_coefficients(1, kd, qi), std::invalid_argument);
    CHECK_THROWS_AS(boundary_coefficients(10, kd, cplx{0.0, -0.1}), std::invalid_argument);
}

TEST_CASE("boundary identity against the relative Hamiltonian") {
    // H0 |q> = w |q> - i gamma (g0 |k> - h0 |-k>) with M = N - 1.
    SplitMix64 rng(4242);
    for (int t = 0; t < 20; ++t) {
        const int n = 3 + static_cast<int>(rng.uniform() * 30);
        const double kd = rng.uniform(0.1, 1.4);
        const double gamma = rng.uniform(0.5, 2.0);
        const cplx q{rng.uniform(-1.0, 1.0), rng.uniform(0.05, 1.0)};
        const Mat h = build_relative_hamiltonian({0.0, n - 1, kd, gamma});
        const BoundaryCoefficients b = boundary_coefficients(n, kd, q, gamma);
        const Vec lhs = h * plane_wave(n - 1, q);
        const Vec rhs = b.omega_q * plane_wave(n - 1, q) -
                        kI * gamma * (b.g0 * plane_wave(n - 1, kd) - b.h0 * plane_wave(n - 1, -kd));
        CAPTURE(n);
        CHECK((lhs - rhs).norm() <= 1e-11 * (1.0 + lhs.norm()));
    }
}

TEST_CASE("relative model bound state approaches the type I dimer") {
    for (double kd : {0.2 * kPi, 0.3 * kPi}) {
        const Spectrum s = eig_dense_all(build_relative_hamiltonian({0.0, 200, kd}));
        const double w = asymptotic_dimer(kd, DimerType::TypeI).omega;
        double best = 1e300;
        for (const auto& p : s.pairs) best = std::min(best, std::abs(p.lambda - w));
        CHECK(best < 1e-8);
    }
}

TEST_CASE("defect secular equation") {
    // Far from the ends the root is q_I and omega is half the type I value.
    const double kd = 0.3 * kPi;
    const DefectSolution far = solve_defect_secular(201, kd, 101);
    const cplx qi = asymptotic_dimer(kd, DimerType::TypeI).qd;
    CHECK(std::abs(far.qd - qi) < 1e-12);
    CHECK(far.omega.real() == doctest::Approx(1.0 / std::tan(kd)).epsilon(1e-12));
    CHECK(far.min_nlr == 100);

    const DefectSolution ten = solve_defect_secular(21, 0.25 * kPi, 11);
    CHECK(ten.min_nlr == 10);
    CHECK(std::abs(ten.delta_closed_form - cplx{0.0, -0.015625}) < 1e-15);

    // Numerical oracle: missing-site chain.
    const auto chain = ChainGeometry::regular(40, kd);
    const Spectrum num = eig_dense_all(build_missing_site_hamiltonian(chain, CouplingKernel::of(chain), 20));
    const DefectSolution s = solve_defect_secular(40, kd, 20);
    const EigenPair* best = nullptr;
    for (const auto& p : num.pairs)
        if (!best || std::abs(p.lambda - s.omega) < std::abs(best->lambda - s.omega)) best = &p;
    REQUIRE(best);
    CHECK(std::abs(best->lambda.real() - 1.0 / std::tan(kd)) < 1e-3);
    CHECK(s.decay() == doctest::Approx(best->decay()).epsilon(0.05));
    CHECK(s.full_equation);
    CHECK(s.residual <= 1e-9);

    CHECK_THROWS_AS(solve_defect_secular(40, kd, 1), std::invalid_argument);
    CHECK_THROWS_AS(solve_defect_secular(40, kd, 40), std::invalid_argument);
    CHECK_THROWS_AS(solve_defect_secular(40, 0.5 * kPi, 20), std::invalid_argument);
}

TEST_CASE("property: defect decay positive and exponentially small") {
    for (double kd : kKdGrid) {
        double prev_rate = std::numeric_limits<double>::infinity();
        double prev_delta = std::numeric_limits<double>::infinity();
        // Start once the bound state fits inside each half chain.
        const int half = static_cast<int>(std::ceil(std::log(0.1) / std::log(std::cos(kd))));
        for (int step = 0; step < 5; ++step) {
            const int n = 2 * (half + 3 * step) + 1;
            const int m = (n + 1) / 2;
            const DefectSolution s = solve_defect_secular(n, kd, m);
            CAPTURE(kd);
            CAPTURE(n);
            CHECK(s.decay() > 0.0);
            CHECK(s.delta_linear.imag() < 0.0);
            CHECK(s.delta_closed_form.imag() < 0.0);
            CHECK(s.decay() < prev_rate);
            CHECK(std::abs(s.delta_closed_form) < prev_delta);
            CHECK(s.qd.imag() > 0.0);
            prev_rate = s.decay();
            prev_delta = std::abs(s.delta_closed_form);
        }
    }
}

TEST_CASE("defect secular: mirror symmetry and reduced equation") {
    const double kd = 0.25 * kPi;
    for (int m = 2; m <= 19; ++m) {
        const DefectSolution a = solve_defect_secular(20, kd, m);
        const DefectSolution b = solve_defect_secular(20, kd, 21 - m);
        CHECK(std::abs(a.qd - b.qd) < 1e-12);
    }
    const DefectSolution s = solve_defect_secular(400, kd, 200);
    CHECK_FALSE(s.full_equation);
    CHECK(std::abs(defect_secular(400, kd, 200, s.qd, true)) < 1e-9);
}

TEST_CASE("fold and unfold") {
    Vec one(1);
    one(0) = 1.0;
    const Vec f = fold_even_extension(one);
    REQUIRE(f.size() == 2);
    CHECK(f(0) == cplx{1.0, 0.0});
    CHECK(f(1) == cplx{1.0, 0.0});
    const Vec r = oracle::random_unit(9, 3);
    const Vec g = fold_even_extension(r);
    CHECK((unfold_even_extension(g) - r).norm() == 0.0);
    for (int s = 1; s <= 9; ++s) CHECK(g(defect_index(9, s)) == g(defect_index(9, -s)));
    CHECK_THROWS_AS(unfold_even_extension(Vec(3)), std::invalid_argument);
    CHECK_THROWS_AS(fold_even_extension(Vec(0)), std::invalid_argument);
}

TEST_CASE("mapping identity at finite truncation") {
    for (int M : {1, 2, 5, 10, 25, 30})
        for (double Kd : {0.0, kPi})
            for (double kd : kKdGrid) {
                const Mat h = build_relative_hamiltonian({Kd, M, kd});
                const Mat hd = build_defect_relative_hamiltonian({Kd, M, kd});
                const Spectrum s = eig_dense_all(h);
                CAPTURE(M);
                CAPTURE(Kd);
                CAPTURE(kd);
                for (const auto& p : s.pairs) {
                    const Vec psi = fold_even_extension(p.vector);
                    const double res = (hd * psi - 0.5 * p.lambda * psi).norm();
                    CHECK(res <= 1e-12);
                }
                const Vec half = eigenvalues_dense(even_block(hd));
                std::vector<cplx> doubled;
                for (Index i = 0; i < half.size(); ++i) doubled.push_back(2.0 * half(i));
                CHECK(oracle::multiset_distance(s.eigenvalues(), doubled) < 1e-10);
            }
}

TEST_CASE("parity reduction") {
    for (double kd : {0.2 * kPi, 0.1 * kPi, 0.3 * kPi}) {
        const int M = 20;
        const ParityReduction pr = parity_reduce(kd, M);
        CHECK(pr.M_reduced == 10);
        CHECK(pr.kd_reduced == 2.0 * kd);
        const Mat hpi = build_defect_relative_hamiltonian({kPi, M, kd});
        const Mat reduced = pr.reduce(hpi);
        const Mat target = build_defect_relative_hamiltonian({0.0, pr.M_reduced, 2.0 * kd});
        REQUIRE(reduced.rows() == target.rows());
        CHECK((reduced - target).cwiseAbs().maxCoeff() <= 1e-14);
        // Odd and even separations do not couple at K = pi.
        for (int a = -M; a <= M; ++a)
            for (int b = -M; b <= M; ++b) {
                if (a == 0 || b == 0 || ((a + b) % 2 == 0)) continue;
                CHECK(hpi(defect_index(M, a), defect_index(M, b)) == cplx{0.0, 0.0});
            }
    }
    CHECK_THROWS_AS(parity_reduce(0.2 * kPi, 1), std::invalid_argument);
    CHECK_THROWS_AS(parity_reduce(0.2 * kPi, 4).reduce(Mat(6, 6)), std::invalid_argument);
}
