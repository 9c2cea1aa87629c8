// analysis.hpp: K-Delta decomposition, state classification, and fits

#pragma once

#include "subrad/eig.hpp"
#include "subrad/model.hpp"
#include "subrad/theory.hpp"
#include "subrad/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace subrad {

double decay_rate(const EigenPair& pair);

// ------------------------------------------------------------- K-Delta grid --

struct KDeltaDecomposition {
    int n = 0;
    // coeff(j, s - 1): frame coefficient at K_j d = 2 pi j / N and Delta = s d.
    Mat coeff;
    std::vector<double> delta_marginal;  // exact |psi|^2 per separation, unit total
    std::vector<double> k_marginal;      // sum_Delta |coeff|^2, unit total
    double state_norm2 = 0.0;
    double coefficient_norm2 = 0.0;  // sum |coeff|^2 / ||psi||^2, <= 1
    double residual = 0.0;           // ||psi - synthesis(coeff)|| / ||psi||
    int dominant_delta = 0;          // in units of d
    double dominant_kd = 0.0;        // in [0, 2 pi)
    bool rank_deficient = false;

    double kd_of(int j) const { return 2.0 * kPi * j / n; }
    // Fraction of the K marginal within +-window of target (circular distance).
    double k_concentration(double target_kd, double window = 0.25 * kPi) const;
    // Weight on odd Delta/d.
    double odd_weight() const;
    // Weight on Delta/d > s.
    double weight_beyond(int s) const;
};

// Least-squares frame coefficients on the |K;Delta> states, with center
// coordinates taken from the nominal lattice.
KDeltaDecomposition k_delta_decompose(const Vec& state, int n);
KDeltaDecomposition k_delta_decompose(const Vec& state, const ChainGeometry& chain);

// Delta marginal alone, cheaper than the full decomposition.
std::vector<double> delta_marginal(const Vec& state, int n);

// ----------------------------------------------------------- classification --

enum class StateLabel { DimerI, DimerII, Fermionic, Other };
const char* to_string(StateLabel label);

struct ClassifierThresholds {
    double eigenvalue_window = 0.5;  // units of gamma
    double overlap = 0.9;
    double k_concentration = 0.5;
    double k_window = 0.25 * kPi;
    int fermionic_modes = 12;  // one-excitation modes searched for pair products
};

struct StateClass {
    StateLabel label = StateLabel::Other;
    double distance_omega_i = 0.0;
    double distance_omega_ii = 0.0;
    double k_concentration_0 = 0.0;
    double k_concentration_pi = 0.0;
    int dominant_delta = 0;
    double dominant_kd = 0.0;
    double odd_weight = 0.0;
    double fermionic_overlap = 0.0;
    std::pair<int, int> fermionic_modes{-1, -1};
};

// Per-chain data reused across many classifications.
class ClassifierContext {
public:
    explicit ClassifierContext(const ChainGeometry& chain, ClassifierThresholds thresholds = {});

    const ChainGeometry& chain() const noexcept { return chain_; }
    const ClassifierThresholds& thresholds() const noexcept { return thr_; }
    double omega_i() const noexcept { return omega_i_; }
    double omega_ii() const noexcept { return omega_ii_; }
    // One-excitation spectrum, sorted by decay rate.
    const Spectrum& single_spectrum() const noexcept { return single_; }
    // Normalized antisymmetrized pair product of single modes a and b.
    Vec fermionic_state(int a, int b) const;
    // Best overlap |<ref|psi>| over pairs of the most subradiant modes.
    std::pair<double, std::pair<int, int>> best_fermionic_overlap(const Vec& psi) const;

private:
    ChainGeometry chain_;
    ClassifierThresholds thr_;
    double omega_i_ = 0.0;
    double omega_ii_ = 0.0;
    Spectrum single_;
};

StateClass classify_state(const EigenPair& pair, const ClassifierContext& ctx);
StateClass classify_state(const EigenPair& pair, const ChainGeometry& chain);

// Sum of the two smallest one-excitation decay rates.
double fermionic_reference(const ChainGeometry& chain);

struct LabeledPair {
    EigenPair pair;
    StateClass cls;
};

// Minimal decay among entries with `label`; ties prefer the smaller
// |Re lambda - omega| of the label's dimer type. Throws std::runtime_error
// when none match.
const LabeledPair& most_subradiant(const std::vector<LabeledPair>& states, StateLabel label,
                                   double omega_reference = 0.0);
std::vector<LabeledPair> classify_spectrum(const Spectrum& spectrum, const ClassifierContext& ctx);

// --------------------------------------------------------------------- fits --

enum class FitModel { PowerLaw, Exponential };

struct FitResult {
    FitModel model = FitModel::PowerLaw;
    double exponent = 0.0;   // power-law exponent, or log of the per-step ratio
    double ratio = 0.0;      // exp(exponent) for the exponential model
    double amplitude = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    int points = 0;
    double r2 = 0.0;
};

// Least squares of log y against log x over x in [lo, hi]; needs >= 5 points.
FitResult fit_power_law(const std::vector<std::pair<double, double>>& series,
                        std::optional<std::pair<double, double>> window = std::nullopt);
// Default window: exclude the 10 smallest x values of the series.
std::pair<double, double> default_fit_window(const std::vector<std::pair<double, double>>& series);

// Least squares of log y against x; ratio = per-unit geometric factor. Needs >= 4 points.
FitResult fit_exponential_tail(const std::vector<std::pair<double, double>>& profile);

struct ModulationReport {
    int points = 0;
    std::vector<double> autocorrelation;  // lags 1..8
    int dominant_period = 0;              // lag in 2..8 with the largest autocorrelation
    double period4_amplitude = 0.0;       // relative modulation depth at period 4
    double noise_floor = 0.0;
    bool significant = false;
};

// Detrends log(rate) with a quadratic in log N, then inspects the residual
// autocorrelation and its period-4 Fourier component. Needs >= 16
// consecutive N. `noise_floor` is the relative uncertainty of the rates.
ModulationReport period4_modulation(const std::vector<std::pair<double, double>>& series,
                                    double noise_floor = 0.0);

// ------------------------------------------------------------ branch finding --

struct Branch {
    double re_min = 0.0;
    double re_max = 0.0;
    int members = 0;
    double min_decay = 0.0;
};

// Subradiant states (decay < rate_cut) sorted by Re lambda and split at gaps
// wider than `gap`.
std::vector<Branch> cluster_branches(const std::vector<cplx>& eigenvalues, double rate_cut = 0.03,
                                     double gap = 0.25);

}  // namespace subrad
