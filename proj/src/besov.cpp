#include "novikov/besov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace novikov {

namespace {

// C^4 smoothstep on [0,1].
double smoothstep(double t)
{
    if (t <= 0.0) {
        return 0.0;
    }
    if (t >= 1.0) {
        return 1.0;
    }
    const double t5 = t * t * t * t * t;
    return t5 * (126.0 + t * (-420.0 + t * (540.0 + t * (-315.0 + t * 70.0))));
}

double mode_multiplicity(int k, int nyquist)
{
    return (k == 0 || k == nyquist) ? 1.0 : 2.0;
}

} // namespace

double DyadicPartition::chi(double xi)
{
    xi = std::abs(xi);
    return 1.0 - smoothstep((xi - 0.75) / (4.0 / 3.0 - 0.75));
}

double DyadicPartition::phi(double xi)
{
    return chi(0.5 * xi) - chi(xi);
}

double DyadicPartition::annulus_lo(int j) { return 0.75 * std::ldexp(1.0, j); }
double DyadicPartition::annulus_hi(int j) { return 8.0 / 3.0 * std::ldexp(1.0, j); }
double DyadicPartition::plateau_lo(int j) { return 4.0 / 3.0 * std::ldexp(1.0, j); }
double DyadicPartition::plateau_hi(int j) { return 1.5 * std::ldexp(1.0, j); }

DyadicPartition::DyadicPartition(const Grid1D& grid) : grid_(grid)
{
    const int nyq = grid.nyquist();
    const double xi_max = grid.wavenumber(nyq);
    j_max_ = -1;
    while (annulus_lo(j_max_ + 1) <= xi_max) {
        ++j_max_;
    }
    weights_.assign(static_cast<std::size_t>(j_max_ + 2), std::vector<double>(static_cast<std::size_t>(nyq + 1), 0.0));
    for (int k = 0; k <= nyq; ++k) {
        const double xi = grid.wavenumber(k);
        double total = 0.0;
        for (int j = -1; j <= j_max_; ++j) {
            const double w = j < 0 ? chi(xi) : phi(std::ldexp(xi, -j));
            weights_[static_cast<std::size_t>(j + 1)][static_cast<std::size_t>(k)] = w;
            total += w;
        }
        if (total <= 0.0) {
            throw std::logic_error("DyadicPartition: wavenumber not covered by any block");
        }
        for (int j = -1; j <= j_max_; ++j) {
            weights_[static_cast<std::size_t>(j + 1)][static_cast<std::size_t>(k)] /= total;
        }
    }
}

double DyadicPartition::weight(int j, int k) const
{
    if (j < -1 || j > j_max_) {
        throw std::out_of_range("DyadicPartition: block index " + std::to_string(j) + " outside [-1, " +
                                std::to_string(j_max_) + "]");
    }
    return weights_[static_cast<std::size_t>(j + 1)][static_cast<std::size_t>(std::abs(k))];
}

std::pair<double, double> DyadicPartition::square_sum_band() const
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int k = 0; k <= grid_.nyquist(); ++k) {
        double s = 0.0;
        for (const auto& w : weights_) {
            s += w[static_cast<std::size_t>(k)] * w[static_cast<std::size_t>(k)];
        }
        lo = std::min(lo, std::sqrt(s));
        hi = std::max(hi, std::sqrt(s));
    }
    return {lo, hi};
}

SpectralField dyadic_block(const SpectralField& f, int j, const DyadicPartition& part)
{
    require_same_grid(f.grid(), part.grid(), "dyadic_block");
    const auto c = f.coefficients();
    std::vector<Complex> out(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        out[k] = part.weight(j, static_cast<int>(k)) * c[k];
    }
    return SpectralField::from_coefficients(f.grid(), std::move(out));
}

SpectralField low_cutoff(const SpectralField& f, int n, const DyadicPartition& part)
{
    require_same_grid(f.grid(), part.grid(), "low_cutoff");
    if (n < -1) {
        throw std::invalid_argument("low_cutoff: n must be >= -1");
    }
    if (n >= part.j_max()) {
        return f;
    }
    const auto c = f.coefficients();
    std::vector<Complex> out(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        double w = 0.0;
        for (int j = -1; j <= n; ++j) {
            w += part.weight(j, static_cast<int>(k));
        }
        out[k] = w * c[k];
    }
    return SpectralField::from_coefficients(f.grid(), std::move(out));
}

std::vector<double> block_l2_norms(const SpectralField& f, const DyadicPartition& part)
{
    require_same_grid(f.grid(), part.grid(), "block_l2_norms");
    const auto c = f.coefficients();
    const int nyq = f.grid().nyquist();
    std::vector<double> out(static_cast<std::size_t>(part.j_max() + 2), 0.0);
    for (int j = -1; j <= part.j_max(); ++j) {
        double s = 0.0;
        for (int k = 0; k <= nyq; ++k) {
            const double w = part.weight(j, k);
            if (w != 0.0) {
                s += mode_multiplicity(k, nyq) * w * w * std::norm(c[static_cast<std::size_t>(k)]);
            }
        }
        out[static_cast<std::size_t>(j + 1)] = std::sqrt(f.grid().length() * s);
    }
    return out;
}

double l2_norm(const SpectralField& f)
{
    const auto c = f.coefficients();
    const int nyq = f.grid().nyquist();
    double s = 0.0;
    for (int k = 0; k <= nyq; ++k) {
        s += mode_multiplicity(k, nyq) * std::norm(c[static_cast<std::size_t>(k)]);
    }
    return std::sqrt(f.grid().length() * s);
}

double lp_norm(const SpectralField& f, double p)
{
    if (std::isinf(p)) {
        return f.max_abs();
    }
    if (!(p >= 1.0)) {
        throw std::invalid_argument("lp_norm: p must be >= 1");
    }
    const double scale = f.max_abs();
    if (scale == 0.0) {
        return 0.0;
    }
    double s = 0.0;
    for (double v : f.values()) {
        s += std::pow(std::abs(v) / scale, p);
    }
    return scale * std::pow(f.grid().spacing() * s, 1.0 / p);
}

double besov_from_blocks(const std::vector<double>& block_norms, double s, double r)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < block_norms.size(); ++i) {
        const int j = static_cast<int>(i) - 1;
        const double term = std::pow(2.0, j * s) * block_norms[i];
        if (std::isinf(r)) {
            acc = std::max(acc, term);
        } else if (r == 1.0) {
            acc += term;
        } else {
            acc += std::pow(term, r);
        }
    }
    if (!std::isinf(r) && r != 1.0) {
        acc = std::pow(acc, 1.0 / r);
    }
    return acc;
}

double besov_norm(const SpectralField& f, const BesovParams& params, const DyadicPartition& part)
{
    if (!(params.r >= 1.0)) {
        throw std::invalid_argument("besov_norm: r must be >= 1");
    }
    if (params.p == 2.0) {
        return besov_from_blocks(block_l2_norms(f, part), params.s, params.r);
    }
    std::vector<double> blocks;
    for (int j = -1; j <= part.j_max(); ++j) {
        blocks.push_back(lp_norm(dyadic_block(f, j, part), params.p));
    }
    return besov_from_blocks(blocks, params.s, params.r);
}

InterpolationRatio interpolation_probe(const SpectralField& f, double s, const DyadicPartition& part)
{
    const auto blocks = block_l2_norms(f, part);
    InterpolationRatio out;
    out.b_s_21 = besov_from_blocks(blocks, s, 1.0);
    out.b_s_2inf = besov_from_blocks(blocks, s, BesovParams::inf);
    out.b_s1_2inf = besov_from_blocks(blocks, s + 1.0, BesovParams::inf);
    if (out.b_s_2inf == 0.0) {
        return out;
    }
    out.ratio = out.b_s_21 / (out.b_s_2inf * std::log(std::numbers::e + out.b_s1_2inf / out.b_s_2inf));
    return out;
}

double algebra_probe(const SpectralField& f, const SpectralField& g, const DyadicPartition& part)
{
    const BesovParams crit{0.5, 2.0, 1.0};
    const double nf = besov_norm(f, crit, part);
    const double ng = besov_norm(g, crit, part);
    if (nf == 0.0 || ng == 0.0) {
        throw std::invalid_argument("algebra_probe: inputs must be nonzero");
    }
    return besov_norm(multiply(f, g), crit, part) / (nf * ng);
}

} // namespace novikov
