#pragma once

#include "novikov/grid.hpp"

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace novikov {

using Complex = std::complex<double>;

/// A real periodic field held both as samples and as Fourier coefficients.
///
/// Coefficients are stored for modes k = 0..n/2 (the negative half follows
/// from Hermitian symmetry) and are normalized so that
///     f(x_j) = sum_k c_k exp(2 pi i j k / n).
/// Fields are immutable once built; every operation returns a new field.
class SpectralField {
public:
    /// Samples are kept verbatim; coefficients come from a forward transform.
    static SpectralField from_values(const Grid1D& grid, std::vector<double> values);

    /// Coefficients for k = 0..n/2. Imaginary parts of the k = 0 and Nyquist
    /// modes are discarded so the field stays real.
    static SpectralField from_coefficients(const Grid1D& grid, std::vector<Complex> coefficients);

    static SpectralField zeros(const Grid1D& grid);
    static SpectralField constant(const Grid1D& grid, double value);

    /// Samples a callable at the grid points.
    static SpectralField sample(const Grid1D& grid, const std::function<double(double)>& f);

    const Grid1D& grid() const { return grid_; }
    int size() const { return grid_.n_points(); }

    std::span<const double> values() const { return values_; }
    std::span<const Complex> coefficients() const { return coefficients_; }
    double value(int i) const { return values_[static_cast<std::size_t>(i)]; }

    /// Coefficient for a signed mode k in {-n/2, ..., n/2 - 1}.
    Complex coefficient(int k) const;

    bool is_finite() const;
    double max_abs() const;

    /// Throws std::invalid_argument naming the first non-finite sample.
    void require_finite(const char* where) const;

    friend SpectralField operator+(const SpectralField& a, const SpectralField& b);
    friend SpectralField operator-(const SpectralField& a, const SpectralField& b);
    friend SpectralField operator*(double alpha, const SpectralField& a);
    SpectralField operator-() const { return (-1.0) * (*this); }

    /// Returns a + alpha * b without a new transform (both representations are
    /// combined linearly).
    friend SpectralField axpy(const SpectralField& a, double alpha, const SpectralField& b);

private:
    SpectralField(Grid1D grid, std::vector<double> values, std::vector<Complex> coefficients)
        : grid_(grid), values_(std::move(values)), coefficients_(std::move(coefficients))
    {
    }

    Grid1D grid_;
    std::vector<double> values_;
    std::vector<Complex> coefficients_;
};

/// Pointwise product computed in physical space.
SpectralField multiply(const SpectralField& a, const SpectralField& b);

/// A diagonal operator in Fourier space, k -> symbol(k) c_k.
///
/// The symbol receives the signed integer mode and its angular wavenumber.
/// At the Nyquist mode only the real part of the symbol is applied.
class FourierMultiplier {
public:
    using Symbol = std::function<Complex(int k, double wavenumber)>;

    explicit FourierMultiplier(Symbol symbol) : symbol_(std::move(symbol)) {}

    static FourierMultiplier identity();

    SpectralField apply(const SpectralField& f) const;

    Complex operator()(int k, double wavenumber) const { return symbol_(k, wavenumber); }

    /// Composition: (this * other)(k) = this(k) * other(k).
    FourierMultiplier then(const FourierMultiplier& other) const;

    bool is_identity() const { return identity_; }

private:
    Symbol symbol_;
    bool identity_ = false;
};

} // namespace novikov
