#include "subrad/eig.hpp"

#include <algorithm>
#include <cmath>

namespace subrad {

GmresResult gmres(const LinearOperator& a, const LinearOperator& precond, const Vec& b, Vec& x,
                  double tol, int restart, int max_iter) {
    if (restart < 1) throw std::invalid_argument("gmres: restart must be >= 1");
    GmresResult res;
    const Index n = b.size();
    if (x.size() != n) x = Vec::Zero(n);
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        x.setZero();
        res.converged = true;
        return res;
    }

    Vec ax;
    a(x, ax);
    Vec r = b - ax;
    double beta = r.norm();
    res.relative_residual = beta / bnorm;
    if (res.relative_residual <= tol) {
        res.converged = true;
        return res;
    }

    const Index m = restart;
    Mat v(n, m + 1);
    Mat h = Mat::Zero(m + 1, m);
    Vec cs(m), sn(m), g(m + 1);
    Vec w, z;
    while (res.iterations < max_iter) {
        v.col(0) = r / beta;
        h.setZero();
        g.setZero();
        g(0) = beta;
        Index j = 0;
        for (; j < m && res.iterations < max_iter; ++j) {
            if (precond) {
                precond(v.col(j), z);
                a(z, w);
            } else {
                a(v.col(j), w);
            }
            ++res.iterations;
            for (int pass = 0; pass < 2; ++pass) {
                const Vec c = v.leftCols(j + 1).adjoint() * w;
                w.noalias() -= v.leftCols(j + 1) * c;
                h.col(j).head(j + 1) += c;
            }
            const double hn = w.norm();
            h(j + 1, j) = hn;
            if (hn > 0.0) v.col(j + 1) = w / hn;
            for (Index i = 0; i < j; ++i) {
                const cplx t = cs(i) * h(i, j) + sn(i) * h(i + 1, j);
                h(i + 1, j) = -std::conj(sn(i)) * h(i, j) + std::conj(cs(i)) * h(i + 1, j);
                h(i, j) = t;
            }
            const cplx f = h(j, j), gg = h(j + 1, j);
            const double den = std::hypot(std::abs(f), std::abs(gg));
            if (den == 0.0) {
                cs(j) = 1.0;
                sn(j) = 0.0;
            } else if (std::abs(f) == 0.0) {
                cs(j) = 0.0;
                sn(j) = std::conj(gg) / std::abs(gg);
            } else {
                const cplx phase = f / std::abs(f);
                cs(j) = std::abs(f) / den;
                sn(j) = phase * std::conj(gg) / den;
            }
            h(j, j) = cs(j) * f + sn(j) * gg;
            h(j + 1, j) = 0.0;
            g(j + 1) = -std::conj(sn(j)) * g(j);
            g(j) = cs(j) * g(j);
            if (std::abs(g(j + 1)) / bnorm <= tol || hn == 0.0) {
                ++j;
                break;
            }
        }
        const Vec y = h.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
        const Vec u = v.leftCols(j) * y;
        if (precond) {
            precond(u, z);
            x += z;
        } else {
            x += u;
        }
        a(x, ax);
        r = b - ax;
        const double prev = beta;
        beta = r.norm();
        res.relative_residual = beta / bnorm;
        if (res.relative_residual <= tol) {
            res.converged = true;
            return res;
        }
        if (beta > 0.95 * prev) break;  // stagnation
    }
    return res;
}

}  // namespace subrad
