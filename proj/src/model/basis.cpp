#include "subrad/model.hpp"

#include <cmath>
#include <stdexcept>

namespace subrad {

TwoExcitationBasis::TwoExcitationBasis(int n) : n_(n), dim_(static_cast<Index>(n) * (n - 1) / 2) {
    if (n < 2) throw std::invalid_argument("TwoExcitationBasis: N must be >= 2");
}

Index TwoExcitationBasis::flatten(int i, int j) const {
    if (i < 0 || j >= n_ || i >= j)
        throw std::out_of_range("TwoExcitationBasis::flatten: need 0 <= i < j < N");
    const Index ii = i;
    return ii * n_ - ii * (ii + 1) / 2 + (j - i - 1);
}

std::pair<int, int> TwoExcitationBasis::unflatten(Index flat) const {
    if (flat < 0 || flat >= dim_) throw std::out_of_range("TwoExcitationBasis::unflatten: index out of range");
    // Row i starts at s(i) = i*N - i(i+1)/2; invert the quadratic, then fix rounding.
    const double b = 2.0 * n_ - 1.0;
    Index i = static_cast<Index>(std::floor((b - std::sqrt(b * b - 8.0 * static_cast<double>(flat))) / 2.0));
    auto start = [this](Index r) { return r * n_ - r * (r + 1) / 2; };
    while (i > 0 && start(i) > flat) --i;
    while (i + 1 < n_ - 1 && start(i + 1) <= flat) ++i;
    const Index j = flat - start(i) + i + 1;
    return {static_cast<int>(i), static_cast<int>(j)};
}

}  // namespace subrad
