#include "novikov/spectral_ops.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace novikov {

namespace {

// Applies a per-mode transform to the stored half spectrum and resynthesizes.
template <typename Fn>
SpectralField map_modes(const SpectralField& f, Fn&& fn)
{
    const Grid1D& grid = f.grid();
    const auto in = f.coefficients();
    std::vector<Complex> out(in.size());
    for (int k = 0; k <= grid.nyquist(); ++k) {
        out[static_cast<std::size_t>(k)] = fn(k, grid.wavenumber(k), in[static_cast<std::size_t>(k)]);
    }
    return SpectralField::from_coefficients(grid, std::move(out));
}

Complex i_pow(int order)
{
    switch (order % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

} // namespace

SpectralField spectral_derivative(const SpectralField& f, int order)
{
    if (order < 1) {
        throw std::invalid_argument("spectral_derivative: order must be positive");
    }
    f.require_finite("spectral_derivative");
    const int nyq = f.grid().nyquist();
    const Complex phase = i_pow(order);
    return map_modes(f, [&](int k, double kappa, Complex c) -> Complex {
        if (k == nyq) {
            return 0.0;
        }
        return phase * std::pow(kappa, order) * c;
    });
}

SpectralField helmholtz_forward(const SpectralField& f)
{
    f.require_finite("helmholtz_forward");
    return map_modes(f, [](int, double kappa, Complex c) { return (1.0 + kappa * kappa) * c; });
}

SpectralField helmholtz_inverse(const SpectralField& f)
{
    f.require_finite("helmholtz_inverse");
    return map_modes(f, [](int, double kappa, Complex c) { return c / (1.0 + kappa * kappa); });
}

SpectralField green_convolve(const SpectralField& f)
{
    return helmholtz_inverse(f);
}

SpectralField green_deriv_convolve(const SpectralField& f)
{
    f.require_finite("green_deriv_convolve");
    const int nyq = f.grid().nyquist();
    return map_modes(f, [&](int k, double kappa, Complex c) -> Complex {
        if (k == nyq) {
            return 0.0;
        }
        // Same operation order as differentiating the stored g*f coefficients.
        return Complex(0.0, 1.0) * std::pow(kappa, 1) * (c / (1.0 + kappa * kappa));
    });
}

GreenResult green_convolve_checked(const SpectralField& f, double tolerance)
{
    GreenResult r{green_convolve(f), std::exp(-0.5 * f.grid().length()), std::nullopt};
    if (r.wrap_estimate > tolerance) {
        std::ostringstream os;
        os << "periodic kernel images exp(-L/2) = " << r.wrap_estimate << " exceed tolerance " << tolerance
           << " (L = " << f.grid().length() << ")";
        r.warning = os.str();
    }
    return r;
}

SpectralField dealias(const SpectralField& f, double fraction)
{
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw std::invalid_argument("dealias: fraction must lie in (0, 1]");
    }
    const double cutoff = fraction * f.grid().nyquist();
    return map_modes(f, [&](int k, double, Complex c) -> Complex { return k <= cutoff ? c : Complex(0.0); });
}

} // namespace novikov
