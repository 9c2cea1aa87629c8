#include "subrad/eig.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace subrad {

// ------------------------------------------------------------ PairShiftInvert --

PairShiftInvert::PairShiftInvert(const TwoExcitationOperator& op, cplx sigma, bool with_capacitance,
                                 int refinement_steps)
    : op_(op), sigma_(sigma), capacitance_(with_capacitance), refine_(refinement_steps) {
    Vec lam;
    eig_dense_raw(op_.single(), lam, v_);
    Eigen::PartialPivLU<Mat> vlu(v_);
    w_ = vlu.inverse();
    cond_v_ = v_.cwiseAbs().colwise().sum().maxCoeff() * w_.cwiseAbs().colwise().sum().maxCoeff();
    const Index n = lam.size();
    g_.resize(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) g_(i, j) = 1.0 / (lam(i) + lam(j) - sigma_);
    if (!capacitance_) return;

    // C(m, m') = sum_i V(m,i) W(i,m') [V diag(G(i,:)) W](m, m').
    Mat c = Mat::Zero(n, n);
    Mat scaled(n, n), block(n, n);
    for (Index i = 0; i < n; ++i) {
        scaled = v_ * g_.row(i).transpose().asDiagonal();
        block.noalias() = scaled * w_;
        c += ((v_.col(i) * w_.row(i)).array() * block.array()).matrix();
    }
    cap_lu_.compute(c);
}

Mat PairShiftInvert::kron_solve(const Mat& b) const {
    const Mat y = ((w_ * b * w_.transpose()).array() * g_.array()).matrix();
    return v_ * y * v_.transpose();
}

void PairShiftInvert::solve_unconstrained(const Vec& b, Vec& x) const {
    x = op_.from_matrix(kron_solve(op_.to_symmetric(b)));
}

void PairShiftInvert::solve(const Vec& b, Vec& x) const {
    if (!capacitance_) throw std::logic_error("PairShiftInvert::solve: built without capacitance");
    auto once = [this](const Vec& rhs) {
        const Mat bm = op_.to_symmetric(rhs);
        const Mat y0 = ((w_ * bm * w_.transpose()).array() * g_.array()).matrix();
        const Mat vy = v_ * y0;
        const Vec diag = (vy.array() * v_.array()).rowwise().sum().matrix();
        const Vec c = -cap_lu_.solve(diag);
        const Mat y = y0 + ((w_ * c.asDiagonal() * w_.transpose()).array() * g_.array()).matrix();
        return op_.from_matrix(v_ * y * v_.transpose());
    };
    x = once(b);
    Vec hx;
    for (int s = 0; s < refine_; ++s) {
        op_.apply(x, hx);
        const Vec r = b - (hx - sigma_ * x);
        x += once(r);
    }
}

// ------------------------------------------------------------------ front-ends --

namespace {

using Clock = std::chrono::steady_clock;

KrylovSchurOptions ks_options(const SolverConfig& cfg) {
    KrylovSchurOptions o;
    o.count = cfg.count;
    o.max_subspace = cfg.subspace();
    o.tol = cfg.tol;
    o.max_restarts = cfg.max_restarts;
    o.seed = cfg.seed;
    return o;
}

Spectrum finish(KrylovSchurResult&& r, SolverMode mode, Clock::time_point t0) {
    Spectrum s;
    s.pairs = std::move(r.pairs);
    s.sort();
    s.meta.mode = mode;
    s.meta.restarts = r.restarts;
    s.meta.operator_applications = r.applications;
    s.meta.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return s;
}

Spectrum nearest_dense(const Mat& h, const SolverConfig& cfg, Clock::time_point t0) {
    Spectrum all = eig_dense_all(h, cfg.dense_cap);
    std::stable_sort(all.pairs.begin(), all.pairs.end(), [&](const EigenPair& a, const EigenPair& b) {
        return std::abs(a.lambda - cfg.target) < std::abs(b.lambda - cfg.target);
    });
    if (all.pairs.size() > static_cast<std::size_t>(cfg.count)) all.pairs.resize(static_cast<std::size_t>(cfg.count));
    all.sort();
    all.meta.mode = SolverMode::DenseAll;
    all.meta.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return all;
}

LinearOperator gmres_inverse(const LinearOperator& apply_h, cplx sigma, const SolverConfig& cfg,
                             const LinearOperator& precond) {
    LinearOperator shifted = [apply_h, sigma](const Vec& x, Vec& y) {
        apply_h(x, y);
        y -= sigma * x;
    };
    const double inner = cfg.inner_tol_factor * cfg.tol;
    return [shifted, precond, inner, cfg](const Vec& b, Vec& x) {
        x = Vec::Zero(b.size());
        const GmresResult r = gmres(shifted, precond, b, x, inner, cfg.gmres_restart, cfg.gmres_max_iter);
        // Stagnation at a level that still supports the outer tolerance is accepted;
        // the outer iteration checks explicit residuals.
        if (!r.converged && r.relative_residual > cfg.tol)
            throw ConvergenceError("inner GMRES stagnated at relative residual " +
                                       std::to_string(r.relative_residual) + " after " +
                                       std::to_string(r.iterations) + " iterations",
                                   r.relative_residual, r.iterations);
    };
}

}  // namespace

Spectrum eig_target(const Mat& h, const SolverConfig& cfg) {
    if (h.rows() != h.cols()) throw std::invalid_argument("eig_target: matrix is not square");
    cfg.validate(h.rows());
    const auto t0 = Clock::now();
    const Index dim = h.rows();
    if (cfg.mode == SolverMode::DenseAll) return nearest_dense(h, cfg, t0);
    if (dim > cfg.dense_cap && cfg.mode == SolverMode::ShiftInvertDirect)
        throw std::length_error("eig_target: dimension " + std::to_string(dim) + " exceeds dense cap");
    LinearOperator apply_h = [&h](const Vec& x, Vec& y) { y.noalias() = h * x; };
    if (cfg.mode == SolverMode::ShiftInvertDirect) {
        const Eigen::PartialPivLU<Mat> lu(h - cfg.target * Mat::Identity(dim, dim));
        LinearOperator inv = [&lu](const Vec& x, Vec& y) { y = lu.solve(x); };
        return finish(krylov_schur(inv, apply_h, dim, cfg.target, ks_options(cfg)), cfg.mode, t0);
    }
    const Vec diag = h.diagonal();
    LinearOperator jacobi = [diag, &cfg](const Vec& x, Vec& y) {
        y = (x.array() / (diag.array() - cfg.target)).matrix();
    };
    return finish(krylov_schur(gmres_inverse(apply_h, cfg.target, cfg, jacobi), apply_h, dim, cfg.target,
                               ks_options(cfg)),
                  cfg.mode, t0);
}

Spectrum eig_target(const TwoExcitationOperator& op, const SolverConfig& cfg) {
    const Index dim = op.dim();
    cfg.validate(dim);
    const auto t0 = Clock::now();
    if (cfg.mode == SolverMode::DenseAll) {
        if (dim > cfg.dense_cap)
            throw std::length_error("eig_target: dimension " + std::to_string(dim) + " exceeds dense cap");
        return nearest_dense(op.dense(), cfg, t0);
    }
    LinearOperator apply_h = [&op](const Vec& x, Vec& y) { op.apply(x, y); };
    if (cfg.mode == SolverMode::ShiftInvertDirect) {
        const PairShiftInvert si(op, cfg.target);
        LinearOperator inv = [&si](const Vec& x, Vec& y) { si.solve(x, y); };
        return finish(krylov_schur(inv, apply_h, dim, cfg.target, ks_options(cfg)), cfg.mode, t0);
    }
    LinearOperator precond;
    std::unique_ptr<PairShiftInvert> kron;
    if (cfg.precond == Preconditioner::KroneckerSum) {
        kron = std::make_unique<PairShiftInvert>(op, cfg.target, false, 0);
        const PairShiftInvert* k = kron.get();
        precond = [k](const Vec& x, Vec& y) { k->solve_unconstrained(x, y); };
    } else {
        Vec diag(dim);
        for (Index i = 0; i < dim; ++i) diag(i) = op.element(i, i);
        precond = [diag, sigma = cfg.target](const Vec& x, Vec& y) {
            y = (x.array() / (diag.array() - sigma)).matrix();
        };
    }
    return finish(krylov_schur(gmres_inverse(apply_h, cfg.target, cfg, precond), apply_h, dim, cfg.target,
                               ks_options(cfg)),
                  cfg.mode, t0);
}

Spectrum eig_target(const LinearOperator& apply_h, Index dim, const SolverConfig& cfg,
                    const LinearOperator& precond) {
    cfg.validate(dim);
    if (cfg.mode != SolverMode::ShiftInvertMatrixFree)
        throw std::invalid_argument("eig_target: an operator closure requires the matrix-free mode");
    const auto t0 = Clock::now();
    return finish(krylov_schur(gmres_inverse(apply_h, cfg.target, cfg, precond), apply_h, dim, cfg.target,
                               ks_options(cfg)),
                  cfg.mode, t0);
}

}  // namespace subrad
