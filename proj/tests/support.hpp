#pragma once

#include "novikov/spectral_field.hpp"
#include "novikov/system.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace novikov::testing {

/// Real trigonometric polynomial on a period L, evaluable anywhere.
struct TrigPoly {
    double length = 2.0 * M_PI;
    double mean = 0.0;
    std::vector<double> a; // cos coefficients for modes 1..K
    std::vector<double> b; // sin coefficients

    double operator()(double x) const
    {
        double s = mean;
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double w = 2.0 * M_PI * static_cast<double>(k + 1) / length;
            s += a[k] * std::cos(w * x) + b[k] * std::sin(w * x);
        }
        return s;
    }

    double derivative(double x) const
    {
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double w = 2.0 * M_PI * static_cast<double>(k + 1) / length;
            s += w * (-a[k] * std::sin(w * x) + b[k] * std::cos(w * x));
        }
        return s;
    }

    SpectralField on(const Grid1D& g) const
    {
        return SpectralField::sample(g, [this](double x) { return (*this)(x); });
    }
};

/// Coefficients decay like 1/k^2 so the polynomial is smooth at the scale of its top mode.
inline TrigPoly random_trig(double length, int max_mode, std::uint64_t seed, double scale = 1.0)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    TrigPoly p;
    p.length = length;
    p.mean = scale * nd(rng);
    for (int k = 1; k <= max_mode; ++k) {
        const double damp = scale / (1.0 + 0.1 * k * k);
        p.a.push_back(damp * nd(rng));
        p.b.push_back(damp * nd(rng));
    }
    return p;
}

inline SpectralField random_field(const Grid1D& g, int max_mode, std::uint64_t seed, double scale = 1.0)
{
    return random_trig(g.length(), max_mode, seed, scale).on(g);
}

inline double max_diff(const SpectralField& a, const SpectralField& b)
{
    double m = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a.value(i) - b.value(i)));
    }
    return m;
}

/// Sum of a few Gaussians with widths in [2, 4]; at N = 512, L = 40 pi every cubic
/// product of such fields and their derivatives sits inside the dealiased band.
inline SpectralField random_bumps(const Grid1D& g, std::mt19937_64& rng, double amplitude)
{
    std::uniform_real_distribution<double> amp(-amplitude, amplitude);
    std::uniform_real_distribution<double> width(2.0, 4.0);
    std::uniform_real_distribution<double> center(-0.2 * g.length(), 0.2 * g.length());
    struct Bump { double a, w, c; };
    std::vector<Bump> bumps;
    for (int i = 0; i < 3; ++i) {
        bumps.push_back({amp(rng), width(rng), center(rng)});
    }
    return SpectralField::sample(g, [&](double x) {
        double s = 0.0;
        for (const auto& b : bumps) {
            const double z = (x - b.c) / b.w;
            s += b.a * std::exp(-0.5 * z * z);
        }
        return s;
    });
}

inline PrimitiveState random_state(const Grid1D& g, std::uint64_t seed, double amplitude = 1.0)
{
    std::mt19937_64 rng(seed);
    auto rho = random_bumps(g, rng, amplitude);
    auto u = random_bumps(g, rng, amplitude);
    auto v = random_bumps(g, rng, amplitude);
    return {rho, u, v, 0.0, ReductionTag::full_3ns};
}

} // namespace novikov::testing
