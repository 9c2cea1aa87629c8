#include "subrad/model.hpp"

#include <cmath>
#include <stdexcept>

namespace subrad {

Mat build_single_hamiltonian(std::span<const double> positions, const CouplingKernel& kernel) {
    const Index n = static_cast<Index>(positions.size());
    if (n < 1) throw std::invalid_argument("build_single_hamiltonian: no emitters");
    Mat h(n, n);
    for (Index a = 0; a < n; ++a) {
        h(a, a) = coupling_element(kernel, 0.0);
        for (Index b = a + 1; b < n; ++b) {
            const cplx v = coupling_element(kernel, std::abs(positions[a] - positions[b]));
            h(a, b) = v;
            h(b, a) = v;
        }
    }
    return h;
}

Mat build_single_hamiltonian(const ChainGeometry& chain, const CouplingKernel& kernel) {
    chain.validate();
    const auto z = chain.positions();
    return build_single_hamiltonian(std::span<const double>(z), kernel);
}

std::vector<double> missing_site_positions(const ChainGeometry& chain, int label) {
    chain.validate();
    if (label < 1 || label > chain.n)
        throw std::invalid_argument("missing site label must lie in 1..N");
    if (chain.n < 2) throw std::invalid_argument("missing site chain needs N >= 2");
    std::vector<double> z;
    z.reserve(static_cast<std::size_t>(chain.n - 1));
    for (int i = 0; i < chain.n; ++i)
        if (i + 1 != label) z.push_back(chain.position(i));
    return z;
}

Mat build_missing_site_hamiltonian(const ChainGeometry& chain, const CouplingKernel& kernel,
                                   int label) {
    const auto z = missing_site_positions(chain, label);
    return build_single_hamiltonian(std::span<const double>(z), kernel);
}

Mat build_two_hamiltonian(const Mat& h, const TwoExcitationBasis& basis) {
    if (h.rows() != basis.n() || h.cols() != basis.n())
        throw std::invalid_argument("build_two_hamiltonian: basis size does not match");
    const Index dim = basis.dim();
    const int n = basis.n();
    Mat out = Mat::Zero(dim, dim);
    for (int m = 0; m < n; ++m) {
        for (int k = m + 1; k < n; ++k) {
            const Index row = basis.flatten(m, k);
            // Move the excitation at k to any free site a, keeping m.
            for (int a = 0; a < n; ++a) {
                if (a == m) continue;
                const Index col = a < m ? basis.flatten(a, m) : basis.flatten(m, a);
                out(row, col) += h(k, a);
            }
            // Move the excitation at m, keeping k.
            for (int a = 0; a < n; ++a) {
                if (a == k) continue;
                const Index col = a < k ? basis.flatten(a, k) : basis.flatten(k, a);
                out(row, col) += h(m, a);
            }
        }
    }
    return out;
}

Mat build_two_hamiltonian(const ChainGeometry& chain, const CouplingKernel& kernel,
                          const TwoExcitationBasis& basis) {
    if (basis.n() != chain.n) throw std::invalid_argument("build_two_hamiltonian: basis.N != chain.N");
    return build_two_hamiltonian(build_single_hamiltonian(chain, kernel), basis);
}

Vec apply_two_fast(const ChainGeometry& chain, const CouplingKernel& kernel,
                   const TwoExcitationBasis& basis, const Vec& psi) {
    if (!kernel.is_waveguide())
        throw std::invalid_argument("apply_two_fast: only the waveguide kernel is semiseparable");
    if (basis.n() != chain.n) throw std::invalid_argument("apply_two_fast: basis.N != chain.N");
    TwoExcitationOperator op(chain, kernel);
    return op.apply(psi);
}

}  // namespace subrad
