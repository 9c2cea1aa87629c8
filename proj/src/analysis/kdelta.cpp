#include "subrad/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subrad {

namespace {

int pair_count_to_n(Index dim) {
    const int n = static_cast<int>(std::lround((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(dim))) / 2.0));
    if (static_cast<Index>(n) * (n - 1) / 2 != dim)
        throw std::invalid_argument("state length is not N(N-1)/2 for any N");
    return n;
}

double circular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * kPi);
    return std::min(d, 2.0 * kPi - d);
}

}  // namespace

std::vector<double> delta_marginal(const Vec& state, int n) {
    const TwoExcitationBasis basis(n);
    if (state.size() != basis.dim()) throw std::invalid_argument("delta_marginal: state dimension mismatch");
    std::vector<double> w(static_cast<std::size_t>(n - 1), 0.0);
    Index f = 0;
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++f) {
            const double a = std::norm(state(f));
            w[static_cast<std::size_t>(j - i - 1)] += a;
            total += a;
        }
    if (total > 0.0)
        for (double& x : w) x /= total;
    return w;
}

KDeltaDecomposition k_delta_decompose(const Vec& state, int n) {
    const TwoExcitationBasis basis(n);
    if (state.size() != basis.dim()) throw std::invalid_argument("k_delta_decompose: state dimension mismatch");
    KDeltaDecomposition out;
    out.n = n;
    out.coeff = Mat::Zero(n, n - 1);
    out.delta_marginal = delta_marginal(state, n);
    out.state_norm2 = state.squaredNorm();
    out.rank_deficient = n < 2;

    // K_j Z_c = 2 pi j (2l + 2 + s) / (2N): exact roots of unity of order 2N.
    const int order = 2 * n;
    Vec roots(order);
    for (int p = 0; p < order; ++p) roots(p) = std::polar(1.0, 2.0 * kPi * p / order);

    double synth_err2 = 0.0;
    Vec psi, rebuilt;
    for (int s = 1; s < n; ++s) {
        const int len = n - s;
        psi.resize(len);
        for (int l = 0; l < len; ++l) psi(l) = state(basis.flatten(l, l + s));
        const double scale = std::sqrt(static_cast<double>(len)) / n;
        for (int j = 0; j < n; ++j) {
            cplx acc{0.0, 0.0};
            for (int l = 0; l < len; ++l) {
                const long p = (static_cast<long>(j) * (2 * l + 2 + s)) % order;
                acc += std::conj(roots(p)) * psi(l);
            }
            out.coeff(j, s - 1) = scale * acc;
        }
        rebuilt = Vec::Zero(len);
        const double inv = 1.0 / std::sqrt(static_cast<double>(len));
        for (int l = 0; l < len; ++l) {
            cplx acc{0.0, 0.0};
            for (int j = 0; j < n; ++j) {
                const long p = (static_cast<long>(j) * (2 * l + 2 + s)) % order;
                acc += roots(p) * out.coeff(j, s - 1);
            }
            rebuilt(l) = inv * acc;
        }
        synth_err2 += (psi - rebuilt).squaredNorm();
    }
    const double norm2 = out.state_norm2 > 0.0 ? out.state_norm2 : 1.0;
    out.coefficient_norm2 = out.coeff.squaredNorm() / norm2;
    out.residual = std::sqrt(synth_err2 / norm2);

    out.k_marginal.assign(static_cast<std::size_t>(n), 0.0);
    double ktotal = 0.0;
    for (int j = 0; j < n; ++j) {
        const double w = out.coeff.row(j).squaredNorm();
        out.k_marginal[static_cast<std::size_t>(j)] = w;
        ktotal += w;
    }
    if (ktotal > 0.0)
        for (double& x : out.k_marginal) x /= ktotal;
    out.dominant_delta =
        1 + static_cast<int>(std::max_element(out.delta_marginal.begin(), out.delta_marginal.end()) -
                             out.delta_marginal.begin());
    const int jmax = static_cast<int>(std::max_element(out.k_marginal.begin(), out.k_marginal.end()) -
                                      out.k_marginal.begin());
    out.dominant_kd = out.kd_of(jmax);
    return out;
}

KDeltaDecomposition k_delta_decompose(const Vec& state, const ChainGeometry& chain) {
    chain.validate();
    if (pair_count_to_n(state.size()) != chain.n)
        throw std::invalid_argument("k_delta_decompose: state does not belong to this chain");
    return k_delta_decompose(state, chain.n);
}

double KDeltaDecomposition::k_concentration(double target_kd, double window) const {
    double w = 0.0;
    for (int j = 0; j < n; ++j)
        if (circular_distance(kd_of(j), target_kd) <= window + 1e-12) w += k_marginal[static_cast<std::size_t>(j)];
    return w;
}

double KDeltaDecomposition::odd_weight() const {
    double w = 0.0;
    for (std::size_t s = 0; s < delta_marginal.size(); s += 2) w += delta_marginal[s];
    return w;
}

double KDeltaDecomposition::weight_beyond(int s) const {
    double w = 0.0;
    for (std::size_t i = static_cast<std::size_t>(std::max(s, 0)); i < delta_marginal.size(); ++i)
        w += delta_marginal[i];
    return w;
}

}  // namespace subrad
