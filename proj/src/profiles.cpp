#include "novikov/profiles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace novikov {

std::string to_string(ProfileFamily f)
{
    switch (f) {
    case ProfileFamily::zero: return "zero";
    case ProfileFamily::constant: return "constant";
    case ProfileFamily::gaussian: return "gaussian";
    case ProfileFamily::sech: return "sech";
    case ProfileFamily::peakon: return "peakon";
    case ProfileFamily::bump: return "bump";
    }
    return "unknown";
}

ProfileFamily profile_from_string(const std::string& name)
{
    for (auto f : {ProfileFamily::zero, ProfileFamily::constant, ProfileFamily::gaussian, ProfileFamily::sech,
                   ProfileFamily::peakon, ProfileFamily::bump}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    throw std::invalid_argument("unknown profile family '" + name +
                                "' (expected zero, constant, gaussian, sech, peakon or bump)");
}

double mollified_peakon(double x, double eps)
{
    if (eps <= 0.0) {
        return std::exp(-std::abs(x));
    }
    // exp(-|.|) * N(0, eps^2), written with |x| so the large exponential is always paired
    // with the small erfc factor.
    const double a = std::abs(x);
    const double s = eps * std::sqrt(2.0);
    const double e2 = 0.5 * eps * eps;
    return 0.5 * (std::exp(e2 - a) * std::erfc((eps * eps - a) / s) + std::exp(e2 + a) * std::erfc((eps * eps + a) / s));
}

double ProfileSpec::operator()(double x) const
{
    const double z = x - center;
    switch (family) {
    case ProfileFamily::zero: return 0.0;
    case ProfileFamily::constant: return amplitude;
    case ProfileFamily::gaussian: return amplitude * std::exp(-0.5 * z * z / (width * width));
    case ProfileFamily::sech: return amplitude / std::cosh(rate * z);
    case ProfileFamily::peakon: return amplitude * mollified_peakon(z, mollifier);
    case ProfileFamily::bump: {
        const double s = z / width;
        if (std::abs(s) >= 1.0) {
            return 0.0;
        }
        return amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
    }
    }
    return 0.0;
}

double ProfileSpec::tail_rate() const
{
    switch (family) {
    case ProfileFamily::sech: return rate;
    case ProfileFamily::peakon: return 1.0;
    case ProfileFamily::constant: return 0.0;
    default: return std::numeric_limits<double>::infinity();
    }
}

SpectralField sample_profile(const Grid1D& grid, const ProfileSpec& spec)
{
    if (spec.family == ProfileFamily::constant) {
        return SpectralField::constant(grid, spec.amplitude);
    }
    const double L = grid.length();
    return SpectralField::sample(grid, [&](double x) {
        double s = 0.0;
        for (int m = -3; m <= 3; ++m) {
            s += spec(x + m * L);
        }
        return s;
    });
}

} // namespace novikov
