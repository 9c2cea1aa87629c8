#include "subrad/theory.hpp"

#include <stdexcept>

namespace subrad {

Vec fold_even_extension(const Vec& psi_rel) {
    const Index M = psi_rel.size();
    if (M < 1) throw std::invalid_argument("fold_even_extension: empty vector");
    Vec out(2 * M);
    for (Index s = 1; s <= M; ++s) {
        out(M - s) = psi_rel(s - 1);      // Delta = -s
        out(M + s - 1) = psi_rel(s - 1);  // Delta = +s
    }
    return out;
}

Vec unfold_even_extension(const Vec& psi_def) {
    if (psi_def.size() < 2 || psi_def.size() % 2 != 0)
        throw std::invalid_argument("unfold_even_extension: expected 2M entries");
    const Index M = psi_def.size() / 2;
    return psi_def.tail(M);
}

Mat even_block(const Mat& h_def) {
    if (h_def.rows() != h_def.cols() || h_def.rows() % 2 != 0)
        throw std::invalid_argument("even_block: expected a 2M x 2M matrix");
    const int M = static_cast<int>(h_def.rows() / 2);
    Mat e(M, M);
    for (int a = 1; a <= M; ++a)
        for (int b = 1; b <= M; ++b) {
            const Index pa = defect_index(M, a), na = defect_index(M, -a);
            const Index pb = defect_index(M, b), nb = defect_index(M, -b);
            e(a - 1, b - 1) = 0.5 * (h_def(pa, pb) + h_def(pa, nb) + h_def(na, pb) + h_def(na, nb));
        }
    return e;
}

ParityReduction parity_reduce(double kd, int M) {
    if (M < 2) throw std::invalid_argument("parity_reduce: M must be >= 2");
    ParityReduction p;
    p.kd = kd;
    p.kd_reduced = 2.0 * kd;
    p.M = M;
    p.M_reduced = M / 2;
    for (int xi = -p.M_reduced; xi <= p.M_reduced; ++xi) {
        if (xi == 0) continue;
        p.rows.push_back(defect_index(M, 2 * xi));
        p.gauge.push_back(xi % 2 == 0 ? 1.0 : -1.0);
    }
    return p;
}

Mat ParityReduction::reduce(const Mat& h_def_pi) const {
    if (h_def_pi.rows() != 2 * M || h_def_pi.cols() != 2 * M)
        throw std::invalid_argument("ParityReduction::reduce: matrix size does not match M");
    const Index r = static_cast<Index>(rows.size());
    Mat out(r, r);
    for (Index a = 0; a < r; ++a)
        for (Index b = 0; b < r; ++b)
            out(a, b) = gauge[static_cast<std::size_t>(a)] * gauge[static_cast<std::size_t>(b)] *
                        h_def_pi(rows[static_cast<std::size_t>(a)], rows[static_cast<std::size_t>(b)]);
    return out;
}

}  // namespace subrad
