#include "subrad/theory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace subrad {

namespace {

struct SecularValue {
    cplx f;
    cplx df;
};

// u^p = e^{i p q} for integer p.
cplx upow(cplx qd, int p) { return std::exp(kI * qd * static_cast<double>(p)); }

SecularValue secular_eval(int n, double kd, int m, cplx q, bool reduced) {
    const cplx u = std::exp(kI * q);
    const cplx e = std::exp(kI * kd);
    const cplx e2 = e * e;
    const cplx aq = 2.0 - u / e - e / u;
    const cplx amq = 2.0 - 1.0 / (u * e) - u * e;
    const cplx daq = -kI * u / e + kI * e / u;
    const cplx damq = kI / (u * e) - kI * u * e;
    const cplx r1 = amq / aq;
    const cplx dr1 = (damq * aq - amq * daq) / (aq * aq);
    if (reduced) {
        const double c = std::cos(kd);
        const double rhs = std::pow(c, 2.0 * (n - m)) + std::pow(c, 2.0 * (m - 1));
        return {r1 - e2 - (1.0 - e2) * rhs, dr1};
    }
    const int pn = 2 * (n - 1), pr = 2 * (n - m), pl = 2 * (m - 1);
    const cplx un = upow(q, pn), ur = upow(q, pr), ul = upow(q, pl);
    const cplx big = r1 + un / r1 - e2 * (1.0 + un) - (1.0 - e2) * (ur + ul);
    const cplx dbig = dr1 + kI * static_cast<double>(pn) * un / r1 - un * dr1 / (r1 * r1) -
                      e2 * kI * static_cast<double>(pn) * un -
                      (1.0 - e2) * kI * (static_cast<double>(pr) * ur + static_cast<double>(pl) * ul);
    // Divide out the trivial double root at q = 0.
    const cplx q2 = q * q;
    return {big / q2, dbig / q2 - 2.0 * big / (q2 * q)};
}

struct NewtonOutcome {
    cplx q;
    double residual;
    int iterations;
};

NewtonOutcome damped_newton(int n, double kd, int m, cplx q, bool reduced) {
    SecularValue cur = secular_eval(n, kd, m, q, reduced);
    for (int it = 1; it <= 200; ++it) {
        if (cur.df == cplx{0.0, 0.0}) break;
        const cplx step = cur.f / cur.df;
        double lambda = 1.0;
        cplx next = q - step;
        SecularValue val = secular_eval(n, kd, m, next, reduced);
        while (!(std::abs(val.f) < std::abs(cur.f)) && lambda > 1e-6) {
            lambda *= 0.5;
            next = q - lambda * step;
            val = secular_eval(n, kd, m, next, reduced);
        }
        const double moved = std::abs(next - q);
        if (std::abs(val.f) <= std::abs(cur.f) || moved < 1e-15) {
            q = next;
            cur = val;
        }
        if (moved <= 4e-16 * std::max(1.0, std::abs(q)) || std::abs(cur.f) == 0.0)
            return {q, std::abs(cur.f), it};
        if (lambda <= 1e-6 && !(std::abs(val.f) < std::abs(cur.f))) return {q, std::abs(cur.f), it};
    }
    return {q, std::abs(cur.f), 200};
}

// log(1 + z) without cancellation for small |z|.
cplx log1p_c(cplx z) {
    if (std::abs(z) > 1e-4) return std::log(1.0 + z);
    return z * (1.0 - z * (0.5 - z * (1.0 / 3.0 - 0.25 * z)));
}

cplx expm1_c(cplx z) {
    if (std::abs(z) > 1e-4) return std::exp(z) - 1.0;
    return z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
}

// cot(a + e) - cot(a)
cplx cot_shift(cplx a, cplx e) { return -std::sin(e) / (std::sin(a) * std::sin(a + e)); }

// Fixed-point refinement of delta = q - q_I. With u = cos(kd) e^{i delta}
// the reduced left side is E^2 + (1 - E^2) rho, rho = 2 (1 - e^{-i delta}) / A_q,
// so small shifts are resolved without cancellation.
cplx refine_delta(int n, double kd, int m, cplx qi, cplx delta, bool full) {
    const cplx e = std::exp(kI * kd);
    const cplx e2 = e * e;
    const double c = std::cos(kd);
    for (int it = 0; it < 100; ++it) {
        const cplx q = qi + delta;
        const cplx u = c * std::exp(kI * delta);
        const cplx aq = 2.0 - u / e - e / u;
        cplx rho;
        if (!full) {
            rho = std::pow(c, 2.0 * (n - m)) + std::pow(c, 2.0 * (m - 1));
        } else {
            const cplx big_u = std::exp(kI * q * static_cast<double>(2 * (n - 1)));
            const cplx ur = std::exp(kI * q * static_cast<double>(2 * (n - m)));
            const cplx ul = std::exp(kI * q * static_cast<double>(2 * (m - 1)));
            const cplx rho_old = -2.0 * expm1_c(-kI * delta) / aq;
            const cplx r1 = e2 + (1.0 - e2) * rho_old;
            rho = ur + ul - big_u * (1.0 + e2 - e2 * rho_old) / r1;
        }
        const cplx next = kI * log1p_c(-0.5 * rho * aq);
        const bool done = std::abs(next - delta) <= 1e-15 * std::abs(next) || next == delta;
        delta = next;
        if (done) break;
    }
    return delta;
}

}  // namespace

cplx defect_secular(int n, double kd, int m, cplx qd, bool reduced) {
    return secular_eval(n, kd, m, qd, reduced).f;
}

DefectSolution solve_defect_secular(int n, double kd, int m, double gamma) {
    if (!(kd > 0.0 && kd < 0.5 * kPi)) throw std::invalid_argument("solve_defect_secular: kd must lie in (0, pi/2)");
    if (n < 3 || m < 2 || m > n - 1) throw std::invalid_argument("solve_defect_secular: need 2 <= m <= N-1");

    DefectSolution s;
    s.n = n;
    s.m = m;
    s.kd = kd;
    s.min_nlr = std::min(m - 1, n - m);
    const cplx q_i = -kI * std::log(cplx{std::cos(kd), 0.0});

    NewtonOutcome out = damped_newton(n, kd, m, q_i, true);
    const double c = std::cos(kd);
    if (std::pow(c, n) > 1e-12) {
        out = damped_newton(n, kd, m, out.q, false);
        s.full_equation = true;
    }
    const double scale = 1e-9;
    if (!(out.residual <= scale) || !std::isfinite(out.q.real()) || !(out.q.imag() > 0.0)) {
        std::ostringstream msg;
        msg << "solve_defect_secular: Newton did not converge (q = " << out.q << ", |f| = " << out.residual
            << ", iterations = " << out.iterations << ")";
        throw std::runtime_error(msg.str());
    }
    // Equivalent roots differ by 2 pi in Re q.
    out.q -= 2.0 * kPi * std::round(out.q.real() / (2.0 * kPi));
    s.iterations = out.iterations;
    s.residual = out.residual;
    s.delta = out.q - q_i;
    if (std::abs(s.delta) < 1e-3) s.delta = refine_delta(n, kd, m, q_i, s.delta, s.full_equation);
    s.qd = q_i + s.delta;
    // omega(q_I) = gamma cot kd exactly; add the shift separately.
    s.omega = gamma / std::tan(kd) +
              0.25 * gamma * (cot_shift(0.5 * (kd + q_i), 0.5 * s.delta) +
                              cot_shift(0.5 * (kd - q_i), -0.5 * s.delta));

    const double cot = 1.0 / std::tan(kd);
    s.delta_closed_form = cplx{0.0, -0.5 * cot * cot * std::pow(c, s.min_nlr)};
    const cplx e2 = std::exp(2.0 * kI * kd);
    const double rhs = std::pow(c, 2.0 * (n - m)) + std::pow(c, 2.0 * (m - 1));
    s.delta_linear = (1.0 - e2) * rhs / secular_eval(n, kd, m, q_i, true).df;

    // Boundary coefficients with z_j = j d, d = 1.
    const cplx q = s.qd;
    const double z1 = 1.0, zm = m, zn = n;
    const cplx em = std::exp(kI * (q - kd)), ep = std::exp(kI * (q + kd));
    s.g_l = std::exp(kI * (q - kd) * z1) / (1.0 - em);
    s.g_r = std::exp(kI * (q - kd) * (zm + 1.0)) / (1.0 - em);
    s.h_l = std::exp(kI * (q + kd) * zm) / (1.0 - ep);
    s.h_r = std::exp(kI * (q + kd) * (zn + 1.0)) / (1.0 - ep);
    s.beta = (std::exp(kI * (q - kd) * z1) - std::exp(kI * (q - kd) * zm)) / (1.0 - em);
    s.theta = (std::exp(kI * (q + kd) * (zm + 1.0)) - std::exp(kI * (q + kd) * (zn + 1.0))) / (1.0 - ep);
    s.a_q = 2.0 - em - 1.0 / em;
    return s;
}

}  // namespace subrad
