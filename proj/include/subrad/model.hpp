// model.hpp: chain geometry, coupling kernels, and effective Hamiltonians
//
// Sites are addressed by array index i = 0..N-1 throughout; the physical
// label of site i is m = i + 1 and its position is z_m = m*d + offset_m.
// Lengths are in arbitrary units (usually d = 1), rates in units of the
// single-emitter rate of the kernel.

#pragma once

#include "subrad/types.hpp"

#include <span>
#include <utility>
#include <vector>

namespace subrad {

// --------------------------------------------------------------- geometry --

struct ChainGeometry {
    int n = 1;              // emitter count
    double d = 1.0;         // lattice spacing
    double k1d = 0.0;       // resonant waveguide wavenumber
    double gamma1d = 1.0;   // single-emitter decay rate into the waveguide
    std::vector<double> offsets;  // per-site shifts, empty means all zero

    static ChainGeometry regular(int n, double kd, double gamma1d = 1.0);

    // Throws std::invalid_argument on N < 1, d <= 0, gamma <= 0, wrong
    // offset count, or |offset| >= d/2.
    void validate() const;

    double kd() const noexcept { return k1d * d; }
    double offset(int i) const noexcept {
        return offsets.empty() ? 0.0 : offsets[static_cast<std::size_t>(i)];
    }
    double position(int i) const noexcept { return (i + 1) * d + offset(i); }
    std::vector<double> positions() const;
};

// ---------------------------------------------------------------- kernels --

enum class KernelKind { Waveguide1D, FreeSpace3DTransverse, FreeSpace3DParallel };

struct CouplingKernel {
    KernelKind kind = KernelKind::Waveguide1D;
    double k = 0.0;     // resonant wavenumber (k1D, or 2*pi/lambda0 in 3D)
    double rate = 1.0;  // Gamma_1D, or gamma_0 in 3D

    static CouplingKernel waveguide(double k1d, double gamma1d = 1.0);
    static CouplingKernel free_space(KernelKind kind, double lambda0, double gamma0 = 1.0);
    static CouplingKernel of(const ChainGeometry& chain) {
        return waveguide(chain.k1d, chain.gamma1d);
    }

    bool is_waveguide() const noexcept { return kind == KernelKind::Waveguide1D; }
    double lambda0() const noexcept { return 2.0 * kPi / k; }
};

// k*r reduced into [0, 2*pi) using extended precision.
double reduced_phase(double k, double r);

// Coefficient multiplying sigma_m^dagger sigma_n for sites separated by r.
// r must be a finite, non-negative value; -0.0 and NaN are rejected.
cplx coupling_element(const CouplingKernel& kernel, double r);

// -------------------------------------------------------- one excitation --

Mat build_single_hamiltonian(std::span<const double> positions, const CouplingKernel& kernel);
Mat build_single_hamiltonian(const ChainGeometry& chain, const CouplingKernel& kernel);

// Chain with the emitter labelled `label` (1..N) removed; the remaining N-1
// emitters keep their original positions.
Mat build_missing_site_hamiltonian(const ChainGeometry& chain, const CouplingKernel& kernel,
                                   int label);
std::vector<double> missing_site_positions(const ChainGeometry& chain, int label);

// -------------------------------------------------------- two excitations --

// Bijection between unordered pairs of distinct sites {i < j} and flat
// indices 0..N(N-1)/2-1, in lexicographic order of (i, j).
class TwoExcitationBasis {
public:
    explicit TwoExcitationBasis(int n);

    int n() const noexcept { return n_; }
    Index dim() const noexcept { return dim_; }
    Index flatten(int i, int j) const;
    std::pair<int, int> unflatten(Index flat) const;

private:
    int n_;
    Index dim_;
};

// Dense hard-core two-excitation Hamiltonian. Only sensible for small N.
Mat build_two_hamiltonian(const ChainGeometry& chain, const CouplingKernel& kernel,
                          const TwoExcitationBasis& basis);
Mat build_two_hamiltonian(const Mat& single, const TwoExcitationBasis& basis);

// O(N^2) application for the waveguide kernel. Throws std::invalid_argument
// for any other kernel.
Vec apply_two_fast(const ChainGeometry& chain, const CouplingKernel& kernel,
                   const TwoExcitationBasis& basis, const Vec& psi);

// Reusable two-excitation operator. Holds the one-excitation matrix and, for
// the waveguide kernel, the phase tables for the prefix-sum application.
class TwoExcitationOperator {
public:
    TwoExcitationOperator(const ChainGeometry& chain, const CouplingKernel& kernel);
    TwoExcitationOperator(std::span<const double> positions, const CouplingKernel& kernel);

    int n() const noexcept { return basis_.n(); }
    Index dim() const noexcept { return basis_.dim(); }
    const TwoExcitationBasis& basis() const noexcept { return basis_; }
    const Mat& single() const noexcept { return single_; }
    const CouplingKernel& kernel() const noexcept { return kernel_; }
    bool has_fast_path() const noexcept { return kernel_.is_waveguide(); }

    // y = H psi; prefix sums for the waveguide kernel, O(N^3) otherwise.
    Vec apply(const Vec& psi) const;
    void apply(const Vec& psi, Vec& out) const;
    // Reference O(N^3) path through the dense one-excitation matrix.
    Vec apply_via_single(const Vec& psi) const;
    // One row of the dense D x D matrix, built on the fly.
    cplx element(Index row, Index col) const;

    // Pair amplitudes <-> symmetric N x N matrix with zero diagonal.
    Mat to_symmetric(const Vec& psi) const;
    Vec from_matrix(const Mat& x) const;

    Mat dense() const { return build_two_hamiltonian(single_, basis_); }

private:
    void init_phases(std::span<const double> positions);
    void apply_kernel_columns(const Mat& x, Mat& z) const;

    TwoExcitationBasis basis_;
    CouplingKernel kernel_;
    Mat single_;
    Vec fwd_;  // exp(+i k z_a)
    Vec bwd_;  // exp(-i k z_a)
};

// ------------------------------------------------- relative-coordinate models --

struct RelativeModelSpec {
    double Kd = 0.0;      // center-of-excitation wavenumber times d
    int M = 1;            // truncation: Delta/d in 1..M
    double kd = 0.0;      // k1D * d
    double gamma1d = 1.0;

    // M >= 1, Kd in [0, 2*pi).
    void validate() const;
    static RelativeModelSpec from_chain(const ChainGeometry& chain, double Kd);
};

// M x M matrix on Delta/d = 1..M.
Mat build_relative_hamiltonian(const RelativeModelSpec& spec);

// 2M x 2M matrix on Delta/d in {-M..-1, 1..M}, stored in that order.
Mat build_defect_relative_hamiltonian(const RelativeModelSpec& spec);

// Row/column of Delta/d = s (s != 0, |s| <= M) in the defect ordering.
Index defect_index(int M, int s);

// |K; Delta> expanded on the pair basis, with Delta = delta * d and center
// coordinates taken from the nominal lattice.
Vec k_delta_state(const ChainGeometry& chain, double Kd, int delta);

// H|K;Delta> - sum_Delta' H^K_{Delta,Delta'} |K;Delta'>, i.e. the part of the
// action that does not conserve K. Requires 1 <= delta <= N-1.
Vec tails_residual(const ChainGeometry& chain, double Kd, int delta);

}  // namespace subrad
