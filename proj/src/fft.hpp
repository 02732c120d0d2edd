#pragma once

#include <complex>
#include <span>

namespace strichartz::detail {

/// In-place unnormalized DFT: X_m = sum_j x_j exp(sign * 2 pi i j m / n).
void dft(std::span<std::complex<double>> data, int sign);

}  // namespace strichartz::detail
