#include "subrad/theory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace subrad {

const char* to_string(DimerType type) { return type == DimerType::TypeI ? "DimerI" : "DimerII"; }

namespace {

void check_kd(double kd) {
    if (!(kd > 0.0 && kd < 0.5 * kPi)) throw std::invalid_argument("kd must lie in (0, pi/2)");
}

cplx cot(cplx z) { return std::cos(z) / std::sin(z); }

}  // namespace

DimerTheory asymptotic_dimer(double kd, DimerType type, double gamma) {
    check_kd(kd);
    DimerTheory t;
    t.type = type;
    t.kd = kd;
    if (type == DimerType::TypeI) {
        t.qd = -kI * std::log(cplx{std::cos(kd), 0.0});
        t.omega = 2.0 * gamma / std::tan(kd);
        t.center_kd = 0.0;
        t.dominant_delta = 1;
        return t;
    }
    const double c = std::cos(2.0 * kd);
    t.center_kd = kPi;
    t.dominant_delta = 2;
    if (std::abs(c) < 1e-15) {
        t.qd = cplx{0.5 * kPi, std::numeric_limits<double>::infinity()};
        t.omega = 0.0;
        return t;
    }
    t.qd = 0.5 * (kPi - kI * std::log(cplx{c, 0.0}));
    t.omega = 2.0 * gamma * c / std::sin(2.0 * kd);
    return t;
}

std::vector<double> dimer_profile_pdf(double kd, DimerType type, int delta_max) {
    check_kd(kd);
    if (delta_max < 1) throw std::invalid_argument("dimer_profile_pdf: delta_max must be >= 1");
    std::vector<double> p(static_cast<std::size_t>(delta_max), 0.0);
    if (type == DimerType::TypeI) {
        const double r = std::cos(kd) * std::cos(kd);
        double w = 1.0;
        for (int s = 1; s <= delta_max; ++s, w *= r) p[static_cast<std::size_t>(s - 1)] = w;
    } else {
        if (delta_max < 2) throw std::invalid_argument("dimer_profile_pdf: type II needs delta_max >= 2");
        double c = std::cos(2.0 * kd);
        if (std::abs(c) < 1e-15) c = 0.0;
        const double r = c * c;
        double w = 1.0;
        for (int s = 2; s <= delta_max; s += 2, w *= r) p[static_cast<std::size_t>(s - 1)] = w;
    }
    double total = 0.0;
    for (double x : p) total += x;
    for (double& x : p) x /= total;
    return p;
}

cplx omega_q(double kd, cplx qd, double gamma) {
    return 0.25 * gamma * (cot(0.5 * (kd + qd)) + cot(0.5 * (kd - qd)));
}

BoundaryCoefficients boundary_coefficients(int n, double kd, cplx qd, double gamma) {
    if (n < 2) throw std::invalid_argument("boundary_coefficients: N must be >= 2");
    if (qd.imag() < 0.0) throw std::invalid_argument("boundary_coefficients: Im q must be >= 0");
    BoundaryCoefficients b;
    b.n = n;
    b.kd = kd;
    b.qd = qd;
    b.omega_q = 2.0 * omega_q(kd, qd, gamma);
    const cplx em = std::exp(kI * (qd - kd));
    const cplx ep = std::exp(kI * (qd + kd));
    const cplx epn = std::exp(kI * (qd + kd) * static_cast<double>(n));
    b.g0 = em / (1.0 - em) + (ep - epn) / (1.0 - ep);
    b.h0 = epn / (1.0 - ep);
    return b;
}

cplx large_n_boundary_root(double kd) {
    check_kd(kd);
    // e^{2ik}(1 - u/E) = -(1 - uE) with u = e^{iq} is linear in u.
    const cplx e = std::exp(kI * kd);
    const cplx u = (1.0 + e * e) / (2.0 * e);
    return -kI * std::log(u);
}

}  // namespace subrad
