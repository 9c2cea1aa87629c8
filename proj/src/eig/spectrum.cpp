#include "subrad/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace subrad {

std::string to_string(SolverMode mode) {
    switch (mode) {
        case SolverMode::DenseAll: return "dense";
        case SolverMode::ShiftInvertDirect: return "si-direct";
        case SolverMode::ShiftInvertMatrixFree: return "si-matfree";
    }
    return "unknown";
}

SolverMode solver_mode_from_string(const std::string& s) {
    if (s == "dense") return SolverMode::DenseAll;
    if (s == "si-direct") return SolverMode::ShiftInvertDirect;
    if (s == "si-matfree") return SolverMode::ShiftInvertMatrixFree;
    throw std::invalid_argument("unknown solver mode '" + s + "' (dense | si-direct | si-matfree)");
}

void SolverConfig::validate(Index dim) const {
    if (count < 1) throw std::invalid_argument("SolverConfig: count must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
    if (count > subspace()) throw std::invalid_argument("SolverConfig: count exceeds max_subspace");
    if (max_restarts < 0) throw std::invalid_argument("SolverConfig: max_restarts must be >= 0");
    if (dim < 1) throw std::invalid_argument("SolverConfig: empty operator");
    if (!(inner_tol_factor > 0.0)) throw std::invalid_argument("SolverConfig: inner_tol_factor must be positive");
    if (gmres_restart < 2) throw std::invalid_argument("SolverConfig: gmres_restart must be >= 2");
}

void Spectrum::sort() {
    std::stable_sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) {
        const double da = a.decay(), db = b.decay();
        if (da != db) return da < db;
        return a.lambda.real() < b.lambda.real();
    });
}

std::vector<cplx> Spectrum::eigenvalues() const {
    std::vector<cplx> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back(p.lambda);
    return out;
}

double residual_norm(const LinearOperator& apply, const EigenPair& pair) {
    Vec hv;
    apply(pair.vector, hv);
    return (hv - pair.lambda * pair.vector).norm();
}

double residual_norm(const Mat& h, const EigenPair& pair) {
    if (h.cols() != pair.vector.size()) throw std::invalid_argument("residual_norm: dimension mismatch");
    return (h * pair.vector - pair.lambda * pair.vector).norm();
}

std::vector<int> match_eigenvalues(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    struct Cand {
        double dist;
        double decay;
        int ia;
        int ib;
    };
    std::vector<Cand> cands;
    cands.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        int best = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double dist = std::abs(a[i] - b[j]);
            if (dist < bd || (dist == bd && best >= 0 && decay_rate(b[j]) < decay_rate(b[static_cast<std::size_t>(best)]))) {
                bd = dist;
                best = static_cast<int>(j);
            }
        }
        cands.push_back({bd, decay_rate(a[i]), static_cast<int>(i), best});
    }
    // Closer pairs claim their partner first; collisions lose the match.
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (x.dist != y.dist) return x.dist < y.dist;
        return x.decay < y.decay;
    });
    std::vector<int> out(a.size(), -1);
    std::vector<char> taken(b.size(), 0);
    for (const auto& c : cands) {
        if (c.ib < 0 || taken[static_cast<std::size_t>(c.ib)]) continue;
        taken[static_cast<std::size_t>(c.ib)] = 1;
        out[static_cast<std::size_t>(c.ia)] = c.ib;
    }
    return out;
}

}  // namespace subrad
