#include "subrad/model.hpp"

#include <cmath>
#include <stdexcept>

namespace subrad {

ChainGeometry ChainGeometry::regular(int n, double kd, double gamma1d) {
    ChainGeometry c;
    c.n = n;
    c.d = 1.0;
    c.k1d = kd;
    c.gamma1d = gamma1d;
    c.validate();
    return c;
}

void ChainGeometry::validate() const {
    if (n < 1) throw std::invalid_argument("ChainGeometry: N must be >= 1");
    if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("ChainGeometry: d must be positive");
    if (!(gamma1d > 0.0) || !std::isfinite(gamma1d))
        throw std::invalid_argument("ChainGeometry: gamma1d must be positive");
    if (!std::isfinite(k1d)) throw std::invalid_argument("ChainGeometry: k1d must be finite");
    if (!offsets.empty()) {
        if (offsets.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("ChainGeometry: offsets must have N entries");
        for (double o : offsets)
            if (!std::isfinite(o) || std::abs(o) >= 0.5 * d)
                throw std::invalid_argument("ChainGeometry: |offset| must be < d/2");
    }
}

std::vector<double> ChainGeometry::positions() const {
    std::vector<double> z(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = position(i);
    return z;
}

}  // namespace subrad
