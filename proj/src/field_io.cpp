#include "novikov/field_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace novikov {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_field(std::ostream& os, const SpectralField& f)
{
    const Grid1D& g = f.grid();
    os << g.n_points() << ' ' << format_double(g.length()) << '\n';
    for (int i = 0; i < g.n_points(); ++i) {
        os << format_double(g.x(i)) << ' ' << format_double(f.value(i)) << '\n';
    }
}

SpectralField read_field(std::istream& is)
{
    int n = 0;
    double length = 0.0;
    if (!(is >> n >> length)) {
        throw std::runtime_error("read_field: malformed header");
    }
    Grid1D grid(n, length);
    std::vector<double> values(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = 0.0;
        if (!(is >> x >> values[static_cast<std::size_t>(i)])) {
            throw std::runtime_error("read_field: truncated data at row " + std::to_string(i));
        }
    }
    return SpectralField::from_values(grid, std::move(values));
}

} // namespace novikov
