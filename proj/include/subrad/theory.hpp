// theory.hpp: closed forms for dimers, defect states, and the exact
// relative-coordinate / defect mappings
//
// All wavenumbers are dimensionless (q*d, k1D*d); rates are in units of gamma.

#pragma once

#include "subrad/model.hpp"
#include "subrad/types.hpp"

#include <vector>

namespace subrad {

enum class DimerType { TypeI, TypeII };

const char* to_string(DimerType type);

struct DimerTheory {
    DimerType type = DimerType::TypeI;
    double kd = 0.0;
    cplx qd{0.0, 0.0};  // complex relative wavenumber; Im > 0 for bound states
    double omega = 0.0;  // asymptotic eigenvalue (real)
    double center_kd = 0.0;  // center-of-excitation K*d: 0 or pi
    int dominant_delta = 1;  // 1 for type I, 2 for type II
};

// Type I: q d = -i ln cos kd, omega = 2 gamma cot kd.
// Type II: q d = [pi - i ln cos 2kd] / 2, omega = 2 gamma cot 2kd; at 2kd = pi/2
// omega = 0 and the decay length vanishes (Im q = +inf).
// Requires 0 < kd < pi/2; type II additionally 2kd != pi/2 is allowed.
DimerTheory asymptotic_dimer(double kd, DimerType type, double gamma = 1.0);

// Normalized separation distribution p(Delta/d = 1..delta_max).
// Type I: p ~ (cos kd)^(2 Delta/d). Type II: p ~ (cos 2kd)^(Delta/d) on even
// Delta/d, zero on odd.
std::vector<double> dimer_profile_pdf(double kd, DimerType type, int delta_max);

// One-excitation / defect-model dispersion (gamma/4) sum_pm cot((kd +- qd)/2).
cplx omega_q(double kd, cplx qd, double gamma = 1.0);

struct BoundaryCoefficients {
    int n = 0;
    double kd = 0.0;
    cplx qd{0.0, 0.0};
    cplx omega_q{0.0, 0.0};  // dispersion of the K = 0 relative model: 2 * omega_q()
    cplx g0{0.0, 0.0};
    cplx h0{0.0, 0.0};
};

// Coefficients of H^0 |q> = w |q> - i gamma (g0 |k> - h0 |-k>) for the K = 0
// relative model with M = N - 1 and |p> = sum_{Delta = 1..M} e^{i p Delta}|Delta>.
BoundaryCoefficients boundary_coefficients(int n, double kd, cplx qd, double gamma = 1.0);

// Root of g0 = 0 once e^{iqNd} is dropped; equals -i ln cos kd.
cplx large_n_boundary_root(double kd);

struct DefectSolution {
    int n = 0;
    int m = 0;        // missing site label, 1..N
    int min_nlr = 0;  // length of the shorter subchain
    double kd = 0.0;
    cplx qd{0.0, 0.0};         // root of the secular equation
    cplx omega{0.0, 0.0};      // omega_q at the root
    cplx delta{0.0, 0.0};      // qd - q_I d
    cplx delta_closed_form{0.0, 0.0};   // (-i/2) cot^2 kd (cos kd)^minNLR
    cplx delta_linear{0.0, 0.0};  // first-order shift of the reduced equation
    bool full_equation = false;   // true when the untruncated equation was solved
    int iterations = 0;
    double residual = 0.0;
    cplx g_l, g_r, h_l, h_r, beta, theta, a_q;  // boundary coefficients at the root

    double decay() const noexcept { return decay_rate(omega); }
};

// Secular function of the missing-site chain, with the trivial double root
// at q = 0 divided out. `reduced` drops the e^{iqNd} terms and replaces the
// end corrections by powers of cos kd.
cplx defect_secular(int n, double kd, int m, cplx qd, bool reduced);

// Damped Newton solve seeded at q_I. Requires 2 <= m <= N-1, 0 < kd < pi/2.
DefectSolution solve_defect_secular(int n, double kd, int m, double gamma = 1.0);

// Even extension psi_def(+-Delta) = psi_rel(Delta), stored in the defect
// ordering {-M..-1, 1..M}.
Vec fold_even_extension(const Vec& psi_rel);
// Restriction to Delta > 0.
Vec unfold_even_extension(const Vec& psi_def);
// Even-parity block of H_def in the basis (|Delta> + |-Delta>)/sqrt(2).
Mat even_block(const Mat& h_def);

struct ParityReduction {
    double kd = 0.0;
    double kd_reduced = 0.0;  // 2 kd
    int M = 0;
    int M_reduced = 0;        // floor(M / 2)
    std::vector<Index> rows;  // defect indices of Delta = 2 xi, xi in {-Mr..-1, 1..Mr}
    std::vector<double> gauge;  // (-1)^xi per row

    // Gauge-transformed even-Delta block of a K = pi defect matrix.
    Mat reduce(const Mat& h_def_pi) const;
};

// Map under which H_def^{K=pi}(kd) on even Delta equals H_def^{0}(2kd).
// The identity holds for any kd; the type II reading needs 0 < kd < pi/4.
ParityReduction parity_reduce(double kd, int M);

}  // namespace subrad
