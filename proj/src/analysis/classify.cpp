#include "subrad/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace subrad {

double decay_rate(const EigenPair& pair) { return decay_rate(pair.lambda); }

const char* to_string(StateLabel label) {
    switch (label) {
        case StateLabel::DimerI: return "DimerI";
        case StateLabel::DimerII: return "DimerII";
        case StateLabel::Fermionic: return "Fermionic";
        case StateLabel::Other: return "Other";
    }
    return "Other";
}

ClassifierContext::ClassifierContext(const ChainGeometry& chain, ClassifierThresholds thresholds)
    : chain_(chain), thr_(thresholds) {
    chain_.validate();
    if (chain_.n < 2) throw std::invalid_argument("ClassifierContext: N must be >= 2");
    const double kd = chain_.kd();
    const double g = chain_.gamma1d;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double s1 = std::sin(kd), s2 = std::sin(2.0 * kd);
    omega_i_ = std::abs(s1) > 1e-12 ? 2.0 * g * std::cos(kd) / s1 : nan;
    omega_ii_ = std::abs(s2) > 1e-12 ? 2.0 * g * std::cos(2.0 * kd) / s2 : nan;
    single_ = eig_dense_all(build_single_hamiltonian(chain_, CouplingKernel::of(chain_)));
}

Vec ClassifierContext::fermionic_state(int a, int b) const {
    const int n = chain_.n;
    const Vec& pa = single_[static_cast<std::size_t>(a)].vector;
    const Vec& pb = single_[static_cast<std::size_t>(b)].vector;
    Vec out(static_cast<Index>(n) * (n - 1) / 2);
    Index f = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++f) out(f) = pa(i) * pb(j) - pa(j) * pb(i);
    const double nrm = out.norm();
    if (nrm > 0.0) out /= nrm;
    return out;
}

std::pair<double, std::pair<int, int>> ClassifierContext::best_fermionic_overlap(const Vec& psi) const {
    const int n = chain_.n;
    const int modes = std::min<int>(thr_.fermionic_modes, n);
    const double pn = psi.norm();
    if (pn == 0.0 || modes < 2) return {0.0, {-1, -1}};
    // Upper-triangular amplitude matrix U; overlap = conj(a)^T U conj(b) - conj(b)^T U conj(a).
    Mat u = Mat::Zero(n, n);
    Index f = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++f) u(i, j) = psi(f);
    Mat phi(n, modes);
    for (int a = 0; a < modes; ++a) phi.col(a) = single_[static_cast<std::size_t>(a)].vector.conjugate();
    const Mat up = u * phi;                    // U conj(phi_b)
    const Mat cross = phi.transpose() * up;    // conj(a)^T U conj(b)
    const Mat gram = phi.adjoint() * phi;      // conj of <a|b>
    double best = 0.0;
    std::pair<int, int> arg{-1, -1};
    for (int a = 0; a < modes; ++a)
        for (int b = a + 1; b < modes; ++b) {
            const double ref2 = gram(a, a).real() * gram(b, b).real() - std::norm(gram(a, b));
            if (ref2 <= 1e-14) continue;
            const double ov = std::abs(cross(a, b) - cross(b, a)) / (std::sqrt(ref2) * pn);
            if (ov > best) {
                best = ov;
                arg = {a, b};
            }
        }
    return {best, arg};
}

StateClass classify_state(const EigenPair& pair, const ClassifierContext& ctx) {
    const auto& thr = ctx.thresholds();
    const KDeltaDecomposition kd = k_delta_decompose(pair.vector, ctx.chain().n);
    StateClass c;
    c.distance_omega_i = std::abs(pair.lambda.real() - ctx.omega_i());
    c.distance_omega_ii = std::abs(pair.lambda.real() - ctx.omega_ii());
    c.k_concentration_0 = kd.k_concentration(0.0, thr.k_window);
    c.k_concentration_pi = kd.k_concentration(kPi, thr.k_window);
    c.dominant_delta = kd.dominant_delta;
    c.dominant_kd = kd.dominant_kd;
    c.odd_weight = kd.odd_weight();
    const auto [ov, modes] = ctx.best_fermionic_overlap(pair.vector);
    c.fermionic_overlap = ov;
    c.fermionic_modes = modes;

    if (c.distance_omega_i <= thr.eigenvalue_window && c.dominant_delta == 1 &&
        c.k_concentration_0 >= thr.k_concentration)
        c.label = StateLabel::DimerI;
    else if (c.distance_omega_ii <= thr.eigenvalue_window && c.dominant_delta == 2 &&
             c.k_concentration_pi >= thr.k_concentration)
        c.label = StateLabel::DimerII;
    else if (c.fermionic_overlap > thr.overlap)
        c.label = StateLabel::Fermionic;
    else
        c.label = StateLabel::Other;
    return c;
}

StateClass classify_state(const EigenPair& pair, const ChainGeometry& chain) {
    return classify_state(pair, ClassifierContext(chain));
}

double fermionic_reference(const ChainGeometry& chain) {
    const Vec ev = eigenvalues_dense(build_single_hamiltonian(chain, CouplingKernel::of(chain)));
    std::vector<double> rates;
    for (Index i = 0; i < ev.size(); ++i) rates.push_back(decay_rate(ev(i)));
    std::sort(rates.begin(), rates.end());
    if (rates.size() < 2) throw std::invalid_argument("fermionic_reference: need N >= 2");
    return rates[0] + rates[1];
}

std::vector<LabeledPair> classify_spectrum(const Spectrum& spectrum, const ClassifierContext& ctx) {
    std::vector<LabeledPair> out;
    out.reserve(spectrum.size());
    for (const auto& p : spectrum.pairs) out.push_back({p, classify_state(p, ctx)});
    return out;
}

const LabeledPair& most_subradiant(const std::vector<LabeledPair>& states, StateLabel label,
                                   double omega_reference) {
    const LabeledPair* best = nullptr;
    for (const auto& s : states) {
        if (s.cls.label != label) continue;
        if (!best) {
            best = &s;
            continue;
        }
        const double d = s.pair.decay(), bd = best->pair.decay();
        if (d < bd || (d == bd && std::abs(s.pair.lambda.real() - omega_reference) <
                                      std::abs(best->pair.lambda.real() - omega_reference)))
            best = &s;
    }
    if (!best) throw std::runtime_error(std::string("most_subradiant: no state labelled ") + to_string(label));
    return *best;
}

}  // namespace subrad
