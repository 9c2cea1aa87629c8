#include "subrad/eig.hpp"
#include "subrad/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace subrad {

namespace {

Vec random_start(Index dim, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Vec v(dim);
    for (Index i = 0; i < dim; ++i) {
        const double re = rng.uniform(-1.0, 1.0);
        const double im = rng.uniform(-1.0, 1.0);
        v(i) = cplx{re, im};
    }
    return v / v.norm();
}

// Classical Gram-Schmidt with one reorthogonalization pass against the
// first `cols` columns of basis. Returns the projection coefficients.
Vec orthogonalize(const Mat& basis, Index cols, Vec& w) {
    Vec h = basis.leftCols(cols).adjoint() * w;
    w.noalias() -= basis.leftCols(cols) * h;
    const Vec h2 = basis.leftCols(cols).adjoint() * w;
    w.noalias() -= basis.leftCols(cols) * h2;
    h += h2;
    return h;
}

// Swap adjacent diagonal entries j, j+1 of the upper triangular t, updating q.
void swap_schur(Mat& t, Mat& q, Index j) {
    const cplx a = t(j, j), b = t(j, j + 1), c = t(j + 1, j + 1);
    cplx x0 = b, x1 = c - a;
    const double nrm = std::hypot(std::abs(x0), std::abs(x1));
    if (nrm == 0.0) return;
    x0 /= nrm;
    x1 /= nrm;
    // Unitary with first column (x0, x1): the eigenvector for c.
    Eigen::Matrix2cd g;
    g << x0, -std::conj(x1), x1, std::conj(x0);
    t.middleCols(j, 2) = t.middleCols(j, 2) * g;
    t.middleRows(j, 2) = g.adjoint() * t.middleRows(j, 2);
    q.middleCols(j, 2) = q.middleCols(j, 2) * g;
    t(j + 1, j) = cplx{0.0, 0.0};
    t(j, j) = c;
    t(j + 1, j + 1) = a;
}

// Reorder the Schur form so that |t_ii| is non-increasing.
void sort_schur(Mat& t, Mat& q) {
    const Index m = t.rows();
    for (Index p = 0; p < m; ++p) {
        Index best = p;
        for (Index i = p + 1; i < m; ++i)
            if (std::abs(t(i, i)) > std::abs(t(best, best))) best = i;
        for (Index i = best; i > p; --i) swap_schur(t, q, i - 1);
    }
}

// Eigenvector of upper triangular t for diagonal entry i.
Vec triangular_eigenvector(const Mat& t, Index i) {
    const Index m = t.rows();
    Vec s = Vec::Zero(m);
    s(i) = 1.0;
    const cplx lam = t(i, i);
    const double floor = std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lam));
    for (Index l = i - 1; l >= 0; --l) {
        cplx acc{0.0, 0.0};
        for (Index p = l + 1; p <= i; ++p) acc += t(l, p) * s(p);
        cplx den = t(l, l) - lam;
        if (std::abs(den) < floor) den = floor;
        s(l) = -acc / den;
    }
    return s / s.norm();
}

}  // namespace

KrylovSchurResult krylov_schur(const LinearOperator& op_inv, const LinearOperator& apply_h,
                               Index dim, cplx sigma, const KrylovSchurOptions& opts) {
    if (dim < 1) throw std::invalid_argument("krylov_schur: empty operator");
    if (opts.count < 1) throw std::invalid_argument("krylov_schur: count must be >= 1");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("krylov_schur: tol must be positive");
    const Index m = std::min<Index>(std::max(opts.max_subspace, opts.count + 1), dim);
    const Index nev = std::min<Index>(opts.count, m);
    if (nev > m) throw std::invalid_argument("krylov_schur: count exceeds subspace");

    KrylovSchurResult result;
    Mat v = Mat::Zero(dim, m + 1);
    Mat hb = Mat::Zero(m + 1, m);
    v.col(0) = random_start(dim, opts.seed);
    Index k = 0;
    double best_worst = std::numeric_limits<double>::infinity();
    std::uint64_t fresh = 0;

    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        result.restarts = restart;
        for (Index j = k; j < m; ++j) {
            Vec w;
            op_inv(v.col(j), w);
            ++result.applications;
            const Vec h = orthogonalize(v, j + 1, w);
            double beta = w.norm();
            hb.col(j).head(j + 1) = h;
            if (beta <= 1e-13 * std::max(1.0, h.norm())) {
                // Invariant subspace: continue with a fresh orthogonal direction.
                hb(j + 1, j) = 0.0;
                if (j + 1 < m) {
                    Vec r = random_start(dim, splitmix64(opts.seed ^ (0xabcdefULL + ++fresh)));
                    orthogonalize(v, j + 1, r);
                    v.col(j + 1) = r / r.norm();
                } else {
                    v.col(j + 1).setZero();
                }
                continue;
            }
            hb(j + 1, j) = beta;
            v.col(j + 1) = w / beta;
        }

        Eigen::ComplexSchur<Mat> schur(hb.topLeftCorner(m, m));
        if (schur.info() != Eigen::Success)
            throw ConvergenceError("krylov_schur: projected Schur decomposition failed", best_worst, restart);
        Mat t = schur.matrixT();
        Mat q = schur.matrixU();
        t.triangularView<Eigen::StrictlyLower>().setZero();
        sort_schur(t, q);
        const Eigen::RowVectorXcd b = hb.row(m).head(m) * q;

        // Explicit residuals of the leading Ritz pairs.
        std::vector<EigenPair> pairs;
        pairs.reserve(static_cast<std::size_t>(nev));
        double worst = 0.0;
        Index converged = 0;
        for (Index i = 0; i < nev; ++i) {
            const cplx theta = t(i, i);
            EigenPair p;
            const Vec s = triangular_eigenvector(t, i);
            p.vector = v.leftCols(m) * (q * s);
            p.vector /= p.vector.norm();
            Vec hv;
            apply_h(p.vector, hv);
            const cplx ritz = std::abs(theta) > 0.0 ? sigma + 1.0 / theta : sigma;
            const cplx rq = p.vector.dot(hv);
            const double r_ritz = (hv - ritz * p.vector).norm();
            const double r_rq = (hv - rq * p.vector).norm();
            p.lambda = r_rq < r_ritz ? rq : ritz;
            p.residual = std::min(r_rq, r_ritz);
            worst = std::max(worst, p.residual);
            if (p.residual <= opts.tol && converged == i) ++converged;
            pairs.push_back(std::move(p));
        }
        best_worst = std::min(best_worst, worst);
        if (converged == nev) {
            result.pairs = std::move(pairs);
            return result;
        }
        if (restart == opts.max_restarts) break;
        if (m == dim) {
            // The whole space is spanned; residuals are at their floor.
            throw ConvergenceError("krylov_schur: full subspace reached without meeting tol, worst residual " +
                                       std::to_string(worst),
                                   worst, restart);
        }

        // Thick restart: keep the leading kk Schur vectors.
        const Index kk = std::min<Index>(m - 1, std::max<Index>(nev + converged, (m + nev) / 2));
        const Mat kept = v.leftCols(m) * q.leftCols(kk);
        v.col(kk) = v.col(m);
        v.leftCols(kk) = kept;
        hb.setZero();
        hb.topLeftCorner(kk, kk) = t.topLeftCorner(kk, kk);
        hb.row(kk).head(kk) = b.head(kk);
        k = kk;
    }
    throw ConvergenceError("krylov_schur: restart limit exceeded, best worst-case residual " +
                               std::to_string(best_worst),
                           best_worst, opts.max_restarts);
}

}  // namespace subrad
