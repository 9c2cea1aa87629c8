// rng.hpp: counter-based splitmix64 streams

#pragma once

#include <cstdint>

namespace subrad {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double to_unit(std::uint64_t x) noexcept {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Stateless draw keyed by (seed, stream, index); reproducible in any order.
inline double keyed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
    return to_unit(splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index));
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
    std::uint64_t next() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return splitmix64(state_ - 0x9e3779b97f4a7c15ULL);
    }
    double uniform() noexcept { return to_unit(next()); }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

}  // namespace subrad
