#pragma once

#include "novikov/spectral_field.hpp"

#include <limits>
#include <vector>

namespace novikov {

/// Littlewood-Paley partition on the wavenumbers of one grid.
///
/// The low block j = -1 uses chi(xi), equal to 1 for xi <= 3/4 and 0 for xi >= 4/3.
/// Block j >= 0 uses phi(xi / 2^j) with phi(xi) = chi(xi/2) - chi(xi), supported in
/// [3/4, 8/3] and equal to 1 on [4/3, 3/2]. Blocks whose annulus starts beyond the
/// largest grid wavenumber are dropped, and the profiles are renormalized so they
/// sum to 1 at every grid mode.
class DyadicPartition {
public:
    explicit DyadicPartition(const Grid1D& grid);

    const Grid1D& grid() const { return grid_; }
    int j_min() const { return -1; }
    int j_max() const { return j_max_; }

    /// Profile of block j at the non-negative mode k (0 <= k <= n/2).
    double weight(int j, int k) const;

    static double chi(double xi);
    static double phi(double xi);

    /// Support and plateau of block j >= 0 in wavenumber units.
    static double annulus_lo(int j);
    static double annulus_hi(int j);
    static double plateau_lo(int j);
    static double plateau_hi(int j);

    /// [min_k, max_k] of sqrt(sum_j weight(j,k)^2) over grid modes.
    std::pair<double, double> square_sum_band() const;

private:
    Grid1D grid_;
    int j_max_ = -1;
    std::vector<std::vector<double>> weights_; // [j + 1][k]
};

struct BesovParams {
    double s = 0.5;
    double p = 2.0; ///< infinity allowed
    double r = 1.0; ///< infinity allowed

    static constexpr double inf = std::numeric_limits<double>::infinity();
};

SpectralField dyadic_block(const SpectralField& f, int j, const DyadicPartition& part);

/// S_{n+1} f = sum_{j=-1}^{n} Delta_j f. Returns f unchanged for n >= j_max.
SpectralField low_cutoff(const SpectralField& f, int n, const DyadicPartition& part);

/// L^2 norms of every block j = -1..j_max, from the coefficients.
std::vector<double> block_l2_norms(const SpectralField& f, const DyadicPartition& part);

/// L^2 norm on one period, by Parseval.
double l2_norm(const SpectralField& f);

/// L^p norm on one period, trapezoid rule (p = infinity gives the max).
double lp_norm(const SpectralField& f, double p);

double besov_norm(const SpectralField& f, const BesovParams& params, const DyadicPartition& part);

/// Combines precomputed block norms into a Besov norm.
double besov_from_blocks(const std::vector<double>& block_norms, double s, double r);

struct InterpolationRatio {
    double ratio = 0.0; ///< ||f||_{B^s_{2,1}} / (||f||_{B^s_{2,inf}} log(e + ||f||_{B^{s+1}_{2,inf}}/||f||_{B^s_{2,inf}}))
    double b_s_21 = 0.0;
    double b_s_2inf = 0.0;
    double b_s1_2inf = 0.0;
};

InterpolationRatio interpolation_probe(const SpectralField& f, double s, const DyadicPartition& part);

/// ||f g||_{B^{1/2}_{2,1}} / (||f||_{B^{1/2}_{2,1}} ||g||_{B^{1/2}_{2,1}}).
double algebra_probe(const SpectralField& f, const SpectralField& g, const DyadicPartition& part);

} // namespace novikov
