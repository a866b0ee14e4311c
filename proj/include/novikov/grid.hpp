#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace novikov {

/// Uniform periodic grid on [-L/2, L/2), centered so that x = 0 is a sample.
class Grid1D {
public:
    Grid1D(int n_points, double length) : n_(n_points), length_(length)
    {
        if (n_points < 8 || n_points % 2 != 0) {
            throw std::invalid_argument("Grid1D: n_points must be even and >= 8, got " +
                                        std::to_string(n_points));
        }
        if (!(length > 0.0) || !std::isfinite(length)) {
            throw std::invalid_argument("Grid1D: length must be positive and finite");
        }
    }

    int n_points() const { return n_; }
    double length() const { return length_; }
    double spacing() const { return length_ / n_; }

    double x(int i) const { return -0.5 * length_ + i * spacing(); }

    /// Angular wavenumber 2*pi*k/L for an integer mode index.
    double wavenumber(int k) const { return 2.0 * std::numbers::pi * k / length_; }

    /// Number of stored (non-negative) modes of a real field, 0..n/2.
    int n_modes() const { return n_ / 2 + 1; }

    int nyquist() const { return n_ / 2; }

    bool operator==(const Grid1D& o) const { return n_ == o.n_ && length_ == o.length_; }
    bool operator!=(const Grid1D& o) const { return !(*this == o); }

private:
    int n_;
    double length_;
};

inline void require_same_grid(const Grid1D& a, const Grid1D& b, const char* where)
{
    if (a != b) {
        throw std::invalid_argument(std::string(where) + ": fields live on different grids");
    }
}

} // namespace novikov
