#pragma once

#include <complex>
#include <span>

namespace novikov::detail {

/// Real-to-complex forward transform, normalized by 1/n.
/// `out` must hold n/2 + 1 entries.
void forward_real(std::span<const double> in, std::span<std::complex<double>> out);

/// Complex-to-real inverse transform (no normalization); `in` holds n/2 + 1 entries.
void inverse_real(std::span<const std::complex<double>> in, std::span<double> out);

} // namespace novikov::detail
