// eig.hpp: dense and shift-invert Krylov-Schur eigensolvers

#pragma once

#include "subrad/model.hpp"
#include "subrad/types.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace subrad {

enum class SolverMode { DenseAll, ShiftInvertDirect, ShiftInvertMatrixFree };
enum class Preconditioner { Jacobi, KroneckerSum };

std::string to_string(SolverMode mode);
SolverMode solver_mode_from_string(const std::string& s);  // dense | si-direct | si-matfree

struct EigenPair {
    cplx lambda{0.0, 0.0};
    Vec vector;
    double residual = 0.0;

    double decay() const noexcept { return decay_rate(lambda); }
};

struct SolverConfig {
    cplx target{0.0, 0.0};
    int count = 10;
    int max_subspace = 0;  // 0 means 4 * count
    double tol = 1e-10;
    int max_restarts = 200;
    SolverMode mode = SolverMode::ShiftInvertDirect;
    std::uint64_t seed = 1;
    Index dense_cap = 2415;  // N = 70 in the pair sector
    double inner_tol_factor = 1e-3;
    int gmres_restart = 60;
    int gmres_max_iter = 3000;
    Preconditioner precond = Preconditioner::KroneckerSum;

    int subspace() const noexcept { return max_subspace > 0 ? max_subspace : 4 * count; }
    void validate(Index dim) const;
};

struct SpectrumMeta {
    int n = 0;
    double kd = 0.0;
    std::string sector;
    SolverMode mode = SolverMode::DenseAll;
    double wall_seconds = 0.0;
    int restarts = 0;
    long long operator_applications = 0;
};

// Eigenpairs sorted by ascending decay rate, ties by real part.
struct Spectrum {
    std::vector<EigenPair> pairs;
    SpectrumMeta meta;

    void sort();
    std::size_t size() const noexcept { return pairs.size(); }
    bool empty() const noexcept { return pairs.empty(); }
    const EigenPair& operator[](std::size_t i) const { return pairs[i]; }
    std::vector<cplx> eigenvalues() const;
};

// Solver failure carrying the best residual seen and the iteration count.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_residual, int iterations)
        : std::runtime_error(what), best_residual_(best_residual), iterations_(iterations) {}
    double best_residual() const noexcept { return best_residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double best_residual_;
    int iterations_;
};

// y = A x. Implementations must not retain references to x or y.
using LinearOperator = std::function<void(const Vec& x, Vec& y)>;

// ------------------------------------------------------------------ dense --

// All eigenpairs through LAPACK zgeev. Throws std::length_error above cap.
Spectrum eig_dense_all(const Mat& h, Index cap = 2415);
// Eigenvalues only, unsorted.
Vec eigenvalues_dense(const Mat& h, Index cap = 2415);
// Raw zgeev output: unit-norm right eigenvectors in LAPACK order.
void eig_dense_raw(const Mat& h, Vec& values, Mat& vectors);

// --------------------------------------------------------------- residual --

double residual_norm(const LinearOperator& apply, const EigenPair& pair);
double residual_norm(const Mat& h, const EigenPair& pair);

// ------------------------------------------------------------------ GMRES --

struct GmresResult {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

// Right-preconditioned restarted GMRES for A x = b. `precond` may be empty.
// x holds the initial guess on entry.
GmresResult gmres(const LinearOperator& a, const LinearOperator& precond, const Vec& b, Vec& x,
                  double tol, int restart, int max_iter);

// ----------------------------------------------------- two-excitation solves --

// Exact solver for (H2 - sigma) x = b in the hard-core pair sector. Uses the
// eigendecomposition h1 = V diag(l) V^{-1} to diagonalize the unconstrained
// Kronecker sum, and an N x N capacitance system to remove the doubly
// occupied components. Each solve is O(N^3).
class PairShiftInvert {
public:
    PairShiftInvert(const TwoExcitationOperator& op, cplx sigma, bool with_capacitance = true,
                    int refinement_steps = 2);

    void solve(const Vec& b, Vec& x) const;
    // Unconstrained Kronecker-sum solve; used as a preconditioner.
    void solve_unconstrained(const Vec& b, Vec& x) const;
    cplx sigma() const noexcept { return sigma_; }
    double eigenvector_condition() const noexcept { return cond_v_; }

private:
    Mat kron_solve(const Mat& b) const;

    TwoExcitationOperator op_;
    cplx sigma_;
    bool capacitance_;
    int refine_;
    Mat v_, w_, g_;
    Eigen::PartialPivLU<Mat> cap_lu_;
    double cond_v_ = 0.0;
};

// ----------------------------------------------------------- Krylov-Schur --

struct KrylovSchurOptions {
    int count = 10;
    int max_subspace = 40;
    double tol = 1e-10;
    int max_restarts = 200;
    std::uint64_t seed = 1;
};

struct KrylovSchurResult {
    std::vector<EigenPair> pairs;  // eigenpairs of H, nearest sigma first
    int restarts = 0;
    long long applications = 0;
};

// Krylov-Schur iteration on the shift-inverted operator op_inv = (H - sigma)^{-1}.
// Convergence is decided on the explicit residual ||H v - lambda v|| <= tol.
KrylovSchurResult krylov_schur(const LinearOperator& op_inv, const LinearOperator& apply_h,
                               Index dim, cplx sigma, const KrylovSchurOptions& opts);

// -------------------------------------------------------------- front-ends --

// DenseAll: full decomposition, then the `count` eigenvalues nearest target.
// ShiftInvertDirect: LU factorization of H - sigma.
Spectrum eig_target(const Mat& h, const SolverConfig& config);

// ShiftInvertDirect: PairShiftInvert. ShiftInvertMatrixFree: GMRES with the
// fast matvec. DenseAll: dense matrix, subject to config.dense_cap.
Spectrum eig_target(const TwoExcitationOperator& op, const SolverConfig& config);

// Generic matrix-free front-end with an inner GMRES on (H - sigma).
Spectrum eig_target(const LinearOperator& apply_h, Index dim, const SolverConfig& config,
                    const LinearOperator& precond = {});

// Nearest-neighbour pairing of two eigenvalue lists. Returns, for each entry
// of `a`, the index into `b` or -1 when the nearest partner is already taken
// by a closer entry. Ties prefer the smaller decay rate.
std::vector<int> match_eigenvalues(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace subrad
