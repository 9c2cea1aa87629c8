#include "subrad/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace subrad {

CouplingKernel CouplingKernel::waveguide(double k1d, double gamma1d) {
    if (!std::isfinite(k1d)) throw std::invalid_argument("waveguide kernel: k1d must be finite");
    if (!(gamma1d > 0.0)) throw std::invalid_argument("waveguide kernel: gamma1d must be positive");
    return {KernelKind::Waveguide1D, k1d, gamma1d};
}

CouplingKernel CouplingKernel::free_space(KernelKind kind, double lambda0, double gamma0) {
    if (kind == KernelKind::Waveguide1D)
        throw std::invalid_argument("free_space: kind must be a 3D polarization");
    if (!(lambda0 > 0.0) || !std::isfinite(lambda0))
        throw std::invalid_argument("free_space: lambda0 must be positive");
    if (!(gamma0 > 0.0)) throw std::invalid_argument("free_space: gamma0 must be positive");
    return {kind, 2.0 * kPi / lambda0, gamma0};
}

double reduced_phase(double k, double r) {
    const long double two_pi = 6.283185307179586476925286766559L;
    long double x = std::fmod(static_cast<long double>(k) * static_cast<long double>(r), two_pi);
    if (x < 0) x += two_pi;
    return static_cast<double>(x);
}

cplx coupling_element(const CouplingKernel& kernel, double r) {
    if (std::isnan(r)) throw std::invalid_argument("coupling_element: separation is NaN");
    if (!std::isfinite(r)) throw std::invalid_argument("coupling_element: separation is infinite");
    if (r < 0.0) throw std::invalid_argument("coupling_element: separation is negative");
    if (r == 0.0 && std::signbit(r))
        throw std::invalid_argument("coupling_element: separation is negative zero");

    const double g = kernel.rate;
    if (r == 0.0) return cplx{0.0, -0.5 * g};

    const double phi = reduced_phase(kernel.k, r);
    const cplx e = std::polar(1.0, phi);
    switch (kernel.kind) {
        case KernelKind::Waveguide1D:
            return cplx{0.0, -0.5 * g} * e;
        case KernelKind::FreeSpace3DTransverse: {
            const double x = kernel.k * r;
            return -0.75 * g * e * cplx{x * x - 1.0, x} / (x * x * x);
        }
        case KernelKind::FreeSpace3DParallel: {
            const double x = kernel.k * r;
            return -1.5 * g * e * cplx{1.0, -x} / (x * x * x);
        }
    }
    throw std::logic_error("coupling_element: unknown kernel kind");
}

}  // namespace subrad
