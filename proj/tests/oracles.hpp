// Independent reference computations used only by the tests.

#pragma once

#include "subrad/rng.hpp"
#include "subrad/types.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

namespace oracle {

using subrad::cplx;
using subrad::Index;
using subrad::Mat;
using subrad::Vec;

// Two-excitation block of sum_ab h(a,b) s+_a s-_b assembled on all 2^N
// product states and projected onto bit strings with two set bits. Rows are
// ordered lexicographically by (lower site, upper site).
inline Mat two_excitation_brute_force(const Mat& h) {
    const int n = static_cast<int>(h.rows());
    const int full = 1 << n;
    Mat big = Mat::Zero(full, full);
    for (int s = 0; s < full; ++s)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                // s+_a s-_b |s>: needs b occupied, then a empty after lowering b.
                if (!(s >> b & 1)) continue;
                const int lowered = s & ~(1 << b);
                if (lowered >> a & 1) continue;
                const int raised = lowered | (1 << a);
                big(raised, s) += h(a, b);
            }
    std::vector<int> states;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) states.push_back((1 << i) | (1 << j));
    const Index d = static_cast<Index>(states.size());
    Mat out(d, d);
    for (Index r = 0; r < d; ++r)
        for (Index c = 0; c < d; ++c) out(r, c) = big(states[static_cast<std::size_t>(r)], states[static_cast<std::size_t>(c)]);
    return out;
}

// Roots of a monic polynomial (coefficients of z^0..z^{n-1}) by
// Durand-Kerner iteration followed by Newton polishing.
inline std::vector<cplx> monic_roots(const std::vector<cplx>& c) {
    const std::size_t n = c.size();
    auto p = [&](cplx z) {
        cplx v{1.0, 0.0};
        for (std::size_t k = n; k-- > 0;) v = v * z + c[k];
        return v;
    };
    auto dp = [&](cplx z) {
        cplx v = static_cast<double>(n);
        for (std::size_t k = n; k-- > 1;) v = v * z + static_cast<double>(k) * c[k];
        return v;
    };
    std::vector<cplx> z(n);
    for (std::size_t k = 0; k < n; ++k) z[k] = std::pow(cplx{0.4, 0.9}, static_cast<double>(k));
    for (int it = 0; it < 500; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            cplx den{1.0, 0.0};
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) den *= z[i] - z[j];
            z[i] -= p(z[i]) / den;
        }
    }
    for (auto& r : z)
        for (int it = 0; it < 5; ++it) r -= p(r) / dp(r);
    return z;
}

// Characteristic polynomial coefficients of a 3x3 matrix.
inline std::vector<cplx> charpoly3(const Mat& a) {
    const cplx tr = a.trace();
    const cplx m2 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0) +
                    a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    const cplx det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                     a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                     a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    return {-det, m2, -tr};
}

inline Vec random_unit(Index n, std::uint64_t seed) {
    subrad::SplitMix64 rng(seed);
    Vec v(n);
    for (Index i = 0; i < n; ++i) v(i) = cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    return v / v.norm();
}

// Greedy nearest matching of two eigenvalue lists; returns the worst distance.
inline double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
    double worst = 0.0;
    for (const auto& x : a) {
        std::size_t best = 0;
        double bd = 1e300;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (std::abs(b[j] - x) < bd) {
                bd = std::abs(b[j] - x);
                best = j;
            }
        worst = std::max(worst, bd);
        b.erase(b.begin() + static_cast<long>(best));
    }
    return worst;
}

inline std::vector<cplx> to_list(const Vec& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace oracle
