#pragma once

#include <complex>
#include <span>
#include <vector>

namespace vibrelab {

using cplx = std::complex<double>;

/// Forward DFT, X[k] = sum_n x[n] exp(-2 pi i k n / N), for any N >= 1.
/// Powers of two use an iterative radix-2 transform; other lengths go
/// through Bluestein's chirp-z convolution on a padded radix-2 grid.
std::vector<cplx> dft(std::span<const cplx> x);
std::vector<cplx> dft(std::span<const double> x);

/// Inverse DFT including the 1/N factor.
std::vector<cplx> idft(std::span<const cplx> x);

bool is_power_of_two(std::size_t n) noexcept;

}  // namespace vibrelab
