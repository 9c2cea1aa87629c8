#include "subrad/model.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace subrad {

void RelativeModelSpec::validate() const {
    if (M < 1) throw std::invalid_argument("RelativeModelSpec: M must be >= 1");
    if (!(Kd >= 0.0 && Kd < 2.0 * kPi)) throw std::invalid_argument("RelativeModelSpec: K*d must lie in [0, 2*pi)");
    if (!std::isfinite(kd)) throw std::invalid_argument("RelativeModelSpec: k1D*d must be finite");
    if (!(gamma1d > 0.0)) throw std::invalid_argument("RelativeModelSpec: gamma1d must be positive");
}

RelativeModelSpec RelativeModelSpec::from_chain(const ChainGeometry& chain, double Kd) {
    chain.validate();
    if (chain.n < 2) throw std::invalid_argument("RelativeModelSpec::from_chain: N must be >= 2");
    RelativeModelSpec s{Kd, chain.n - 1, chain.kd(), chain.gamma1d};
    s.validate();
    return s;
}

namespace {

// cos(pi t), exact at half-integers so that cancellations at K = pi/d are exact.
double cospi(double t) {
    double r = std::fmod(std::abs(t), 2.0);
    if (r == 0.5 || r == 1.5) return 0.0;
    if (r == 0.0) return 1.0;
    if (r == 1.0) return -1.0;
    return std::cos(kPi * r);
}

// sum_{eps = +-1} exp(i (kd + eps Kd / 2) s) = 2 exp(i kd s) cos(Kd s / 2), s >= 0.
cplx wave_pair(double kd, double Kd, int s) {
    const double c = cospi(0.5 * (Kd / kPi) * s);
    return 2.0 * c * std::polar(1.0, reduced_phase(kd, static_cast<double>(s)));
}

}  // namespace

Mat build_relative_hamiltonian(const RelativeModelSpec& spec) {
    spec.validate();
    const int M = spec.M;
    const cplx pref{0.0, -0.5 * spec.gamma1d};
    Mat h(M, M);
    for (int a = 1; a <= M; ++a)
        for (int b = a; b <= M; ++b) {
            const cplx sum = wave_pair(spec.kd, spec.Kd, b - a) + wave_pair(spec.kd, spec.Kd, a + b);
            h(a - 1, b - 1) = pref * sum;
            h(b - 1, a - 1) = pref * sum;
        }
    return h;
}

Index defect_index(int M, int s) {
    if (s == 0 || std::abs(s) > M) throw std::out_of_range("defect_index: need 0 < |s| <= M");
    return s < 0 ? static_cast<Index>(s + M) : static_cast<Index>(M + s - 1);
}

Mat build_defect_relative_hamiltonian(const RelativeModelSpec& spec) {
    spec.validate();
    const int M = spec.M;
    const cplx pref{0.0, -0.25 * spec.gamma1d};
    Mat h(2 * M, 2 * M);
    for (int a = -M; a <= M; ++a) {
        if (a == 0) continue;
        for (int b = -M; b <= M; ++b) {
            if (b == 0) continue;
            const int s = std::abs(a - b);
            h(defect_index(M, a), defect_index(M, b)) =
                pref * wave_pair(spec.kd, spec.Kd, s);
        }
    }
    return h;
}

Vec k_delta_state(const ChainGeometry& chain, double Kd, int delta) {
    chain.validate();
    if (delta < 1 || delta > chain.n - 1) throw std::invalid_argument("k_delta_state: need 1 <= delta <= N-1");
    const TwoExcitationBasis basis(chain.n);
    Vec v = Vec::Zero(basis.dim());
    for (int i = 0; i + delta < chain.n; ++i) {
        // Center coordinate in units of d on the nominal lattice.
        const double zc = (i + 1) + 0.5 * delta;
        v(basis.flatten(i, i + delta)) = std::polar(1.0, reduced_phase(Kd, zc));
    }
    return v;
}

Vec tails_residual(const ChainGeometry& chain, double Kd, int delta) {
    const RelativeModelSpec spec = RelativeModelSpec::from_chain(chain, Kd);
    if (delta < 1 || delta > spec.M) throw std::invalid_argument("tails_residual: need 1 <= delta <= N-1");
    const TwoExcitationOperator op(chain, CouplingKernel::of(chain));
    const Mat hk = build_relative_hamiltonian(spec);
    Vec res = op.apply(k_delta_state(chain, Kd, delta));
    for (int dp = 1; dp <= spec.M; ++dp) res -= hk(delta - 1, dp - 1) * k_delta_state(chain, Kd, dp);
    return res;
}

}  // namespace subrad
