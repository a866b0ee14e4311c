#pragma once

#include "novikov/spectral_field.hpp"

#include <optional>
#include <string>

namespace novikov {

/// d^order f / dx^order. The unmatched Nyquist mode is always zeroed.
SpectralField spectral_derivative(const SpectralField& f, int order = 1);

/// (1 - d^2/dx^2) f.
SpectralField helmholtz_forward(const SpectralField& f);

/// Solves (1 - d^2/dx^2) u = f.
SpectralField helmholtz_inverse(const SpectralField& f);

/// g * f with g(x) = exp(-|x|)/2, periodized. Same multiplier as helmholtz_inverse.
SpectralField green_convolve(const SpectralField& f);

/// (d/dx g) * f; bitwise equal to spectral_derivative(green_convolve(f), 1).
SpectralField green_deriv_convolve(const SpectralField& f);

struct GreenResult {
    SpectralField field;
    double wrap_estimate = 0.0; ///< exp(-L/2), the relative size of the periodic image
    std::optional<std::string> warning;
};

/// green_convolve that also reports whether the periodic images of the kernel
/// exceed `tolerance`.
GreenResult green_convolve_checked(const SpectralField& f, double tolerance);

/// Zeroes every mode with |k| > fraction * n/2.
SpectralField dealias(const SpectralField& f, double fraction = 0.5);

} // namespace novikov
