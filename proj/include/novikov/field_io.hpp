#pragma once

#include "novikov/spectral_field.hpp"

#include <iosfwd>
#include <string>

namespace novikov {

/// Formats a double with 17 significant digits.
std::string format_double(double v);

/// Columnar text: a header line "<n_points> <length>", then one "x value" row per sample.
void write_field(std::ostream& os, const SpectralField& f);
SpectralField read_field(std::istream& is);

} // namespace novikov
