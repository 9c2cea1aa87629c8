#include "subrad/model.hpp"

#include <stdexcept>

namespace subrad {

TwoExcitationOperator::TwoExcitationOperator(const ChainGeometry& chain, const CouplingKernel& kernel)
    : basis_(chain.n), kernel_(kernel) {
    chain.validate();
    const auto z = chain.positions();
    single_ = build_single_hamiltonian(std::span<const double>(z), kernel);
    if (has_fast_path()) init_phases(z);
}

TwoExcitationOperator::TwoExcitationOperator(std::span<const double> positions,
                                             const CouplingKernel& kernel)
    : basis_(static_cast<int>(positions.size())), kernel_(kernel) {
    for (std::size_t i = 1; i < positions.size(); ++i)
        if (!(positions[i] > positions[i - 1]))
            throw std::invalid_argument("TwoExcitationOperator: positions must be strictly increasing");
    single_ = build_single_hamiltonian(positions, kernel);
    if (has_fast_path()) init_phases(positions);
}

void TwoExcitationOperator::init_phases(std::span<const double> positions) {
    const Index n = static_cast<Index>(positions.size());
    fwd_.resize(n);
    bwd_.resize(n);
    for (Index a = 0; a < n; ++a) {
        const double phi = reduced_phase(kernel_.k, positions[a]);
        fwd_(a) = std::polar(1.0, phi);
        bwd_(a) = std::conj(fwd_(a));
    }
}

Mat TwoExcitationOperator::to_symmetric(const Vec& psi) const {
    if (psi.size() != dim()) throw std::invalid_argument("two-excitation vector has wrong dimension");
    const int n = basis_.n();
    Mat x = Mat::Zero(n, n);
    Index f = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++f) {
            x(i, j) = psi(f);
            x(j, i) = psi(f);
        }
    return x;
}

Vec TwoExcitationOperator::from_matrix(const Mat& x) const {
    const int n = basis_.n();
    if (x.rows() != n || x.cols() != n) throw std::invalid_argument("from_matrix: expected N x N");
    Vec out(dim());
    Index f = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++f) out(f) = x(i, j);
    return out;
}

// z(:, c) = h1 * x(:, c) via two running sums of the semiseparable kernel.
void TwoExcitationOperator::apply_kernel_columns(const Mat& x, Mat& z) const {
    const Index n = x.rows();
    const cplx pref{0.0, -0.5 * kernel_.rate};
    z.resize(n, n);
    for (Index c = 0; c < n; ++c) {
        const cplx* xc = x.col(c).data();
        cplx* zc = z.col(c).data();
        // Backward pass: tail(m) = sum_{a>m} e^{ikz_a} x_a.
        cplx tail{0.0, 0.0};
        for (Index m = n - 1; m >= 0; --m) {
            zc[m] = bwd_(m) * tail;
            tail += fwd_(m) * xc[m];
        }
        // Forward pass: head(m) = sum_{a<=m} e^{-ikz_a} x_a.
        cplx head{0.0, 0.0};
        for (Index m = 0; m < n; ++m) {
            head += bwd_(m) * xc[m];
            zc[m] = pref * (zc[m] + fwd_(m) * head);
        }
    }
}

void TwoExcitationOperator::apply(const Vec& psi, Vec& out) const {
    const Mat x = to_symmetric(psi);
    Mat z;
    if (has_fast_path())
        apply_kernel_columns(x, z);
    else
        z.noalias() = single_ * x;
    const int n = basis_.n();
    out.resize(dim());
    Index f = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++f) out(f) = z(i, j) + z(j, i);
}

Vec TwoExcitationOperator::apply(const Vec& psi) const {
    Vec out;
    apply(psi, out);
    return out;
}

Vec TwoExcitationOperator::apply_via_single(const Vec& psi) const {
    const Mat x = to_symmetric(psi);
    const Mat z = single_ * x;
    return from_matrix(z + z.transpose());
}

cplx TwoExcitationOperator::element(Index row, Index col) const {
    const auto [m, n] = basis_.unflatten(row);
    const auto [p, q] = basis_.unflatten(col);
    if (m == p && n == q) return single_(m, m) + single_(n, n);
    if (m == p) return single_(n, q);
    if (n == q) return single_(m, p);
    if (m == q) return single_(n, p);
    if (n == p) return single_(m, q);
    return {0.0, 0.0};
}

}  // namespace subrad
