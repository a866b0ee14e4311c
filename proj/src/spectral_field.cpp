#include "novikov/spectral_field.hpp"

#include "novikov/fft.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace novikov {

SpectralField SpectralField::from_values(const Grid1D& grid, std::vector<double> values)
{
    if (values.size() != static_cast<std::size_t>(grid.n_points())) {
        throw std::invalid_argument("SpectralField: sample count does not match grid");
    }
    std::vector<Complex> coeffs(static_cast<std::size_t>(grid.n_modes()));
    detail::forward_real(values, coeffs);
    return SpectralField(grid, std::move(values), std::move(coeffs));
}

SpectralField SpectralField::from_coefficients(const Grid1D& grid, std::vector<Complex> coefficients)
{
    if (coefficients.size() != static_cast<std::size_t>(grid.n_modes())) {
        throw std::invalid_argument("SpectralField: coefficient count must be n/2 + 1");
    }
    coefficients.front().imag(0.0);
    coefficients.back().imag(0.0);
    std::vector<double> values(static_cast<std::size_t>(grid.n_points()));
    detail::inverse_real(coefficients, values);
    return SpectralField(grid, std::move(values), std::move(coefficients));
}

SpectralField SpectralField::zeros(const Grid1D& grid)
{
    return SpectralField(grid, std::vector<double>(static_cast<std::size_t>(grid.n_points()), 0.0),
                         std::vector<Complex>(static_cast<std::size_t>(grid.n_modes())));
}

SpectralField SpectralField::constant(const Grid1D& grid, double value)
{
    std::vector<Complex> coeffs(static_cast<std::size_t>(grid.n_modes()));
    coeffs[0] = value;
    return SpectralField(grid, std::vector<double>(static_cast<std::size_t>(grid.n_points()), value),
                         std::move(coeffs));
}

SpectralField SpectralField::sample(const Grid1D& grid, const std::function<double(double)>& f)
{
    std::vector<double> values(static_cast<std::size_t>(grid.n_points()));
    for (int i = 0; i < grid.n_points(); ++i) {
        values[static_cast<std::size_t>(i)] = f(grid.x(i));
    }
    return from_values(grid, std::move(values));
}

Complex SpectralField::coefficient(int k) const
{
    const int n = size();
    if (k < -n / 2 || k > n / 2) {
        throw std::out_of_range("SpectralField::coefficient: mode out of range");
    }
    if (k >= 0) {
        return coefficients_[static_cast<std::size_t>(k)];
    }
    return std::conj(coefficients_[static_cast<std::size_t>(-k)]);
}

bool SpectralField::is_finite() const
{
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double SpectralField::max_abs() const
{
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

void SpectralField::require_finite(const char* where) const
{
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            std::ostringstream os;
            os << where << ": non-finite sample " << values_[i] << " at index " << i << " (x = "
               << grid_.x(static_cast<int>(i)) << ")";
            throw std::invalid_argument(os.str());
        }
    }
}

SpectralField axpy(const SpectralField& a, double alpha, const SpectralField& b)
{
    require_same_grid(a.grid_, b.grid_, "axpy");
    std::vector<double> values(a.values_);
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] += alpha * b.values_[i];
    }
    std::vector<Complex> coeffs(a.coefficients_);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        coeffs[k] += alpha * b.coefficients_[k];
    }
    return SpectralField(a.grid_, std::move(values), std::move(coeffs));
}

SpectralField operator+(const SpectralField& a, const SpectralField& b)
{
    return axpy(a, 1.0, b);
}

SpectralField operator-(const SpectralField& a, const SpectralField& b)
{
    return axpy(a, -1.0, b);
}

SpectralField operator*(double alpha, const SpectralField& a)
{
    std::vector<double> values(a.values_);
    for (double& v : values) {
        v *= alpha;
    }
    std::vector<Complex> coeffs(a.coefficients_);
    for (Complex& c : coeffs) {
        c *= alpha;
    }
    return SpectralField(a.grid_, std::move(values), std::move(coeffs));
}

SpectralField multiply(const SpectralField& a, const SpectralField& b)
{
    require_same_grid(a.grid(), b.grid(), "multiply");
    std::vector<double> values(static_cast<std::size_t>(a.size()));
    for (int i = 0; i < a.size(); ++i) {
        values[static_cast<std::size_t>(i)] = a.value(i) * b.value(i);
    }
    return SpectralField::from_values(a.grid(), std::move(values));
}

FourierMultiplier FourierMultiplier::identity()
{
    FourierMultiplier m([](int, double) { return Complex(1.0, 0.0); });
    m.identity_ = true;
    return m;
}

SpectralField FourierMultiplier::apply(const SpectralField& f) const
{
    if (identity_) {
        return f;
    }
    const Grid1D& grid = f.grid();
    const auto in = f.coefficients();
    std::vector<Complex> out(in.size());
    const int nyq = grid.nyquist();
    for (int k = 0; k < nyq; ++k) {
        out[static_cast<std::size_t>(k)] = symbol_(k, grid.wavenumber(k)) * in[static_cast<std::size_t>(k)];
    }
    out[static_cast<std::size_t>(nyq)] = symbol_(-nyq, grid.wavenumber(-nyq)).real() * in[static_cast<std::size_t>(nyq)];
    return SpectralField::from_coefficients(grid, std::move(out));
}

FourierMultiplier FourierMultiplier::then(const FourierMultiplier& other) const
{
    if (identity_) {
        return other;
    }
    if (other.identity_) {
        return *this;
    }
    return FourierMultiplier([a = symbol_, b = other.symbol_](int k, double kappa) { return a(k, kappa) * b(k, kappa); });
}

} // namespace novikov
