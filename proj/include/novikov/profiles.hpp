#pragma once

#include "novikov/spectral_field.hpp"

#include <string>

namespace novikov {

enum class ProfileFamily {
    zero,
    constant,
    gaussian,  ///< amplitude * exp(-(x - center)^2 / (2 width^2))
    sech,      ///< amplitude * sech(rate * (x - center))
    peakon,    ///< amplitude * exp(-|x - center|) smoothed by a Gaussian of std `mollifier`
    bump,      ///< amplitude * exp(1 - 1/(1 - s^2)), s = (x - center)/width, zero for |s| >= 1
};

std::string to_string(ProfileFamily f);
ProfileFamily profile_from_string(const std::string& name);

struct ProfileSpec {
    ProfileFamily family = ProfileFamily::zero;
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;     ///< gaussian std, bump radius
    double rate = 1.0;      ///< sech decay rate
    double mollifier = 0.1; ///< peakon smoothing width

    /// Value of the unperiodized profile on the line.
    double operator()(double x) const;

    /// Exponential decay rate of the profile tail (infinity for gaussian/bump/zero).
    double tail_rate() const;
};

/// Samples the profile periodized over |m| <= 3 copies of the grid period.
SpectralField sample_profile(const Grid1D& grid, const ProfileSpec& spec);

/// The Gaussian-smoothed exp(-|x|), in closed form.
double mollified_peakon(double x, double eps);

} // namespace novikov
