#include "vibrelab/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <utility>

namespace vibrelab {

namespace {

// In-place radix-2 decimation-in-time. Twiddles are evaluated directly from
// a table rather than by recurrence so the error stays O(log N) eps.
void radix2(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const double sign = inverse ? 1.0 : -1.0;
  std::vector<cplx> twiddle(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n);
    twiddle[k] = {std::cos(angle), std::sin(angle)};
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx u = a[start + k];
        const cplx v = a[start + k + half] * twiddle[k * stride];
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

std::vector<cplx> bluestein(std::span<const cplx> x, bool inverse) {
  const std::size_t n = x.size();
  const std::size_t m = std::bit_ceil(2 * n - 1);
  const double sign = inverse ? 1.0 : -1.0;

  // chirp[k] = exp(sign * i pi k^2 / n); k^2 is reduced mod 2n to keep the angle small.
  std::vector<cplx> chirp(n);
  const auto two_n = static_cast<unsigned long long>(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const unsigned long long kk = (static_cast<unsigned long long>(k) * k) % two_n;
    const double angle = sign * std::numbers::pi * static_cast<double>(kk) / static_cast<double>(n);
    chirp[k] = {std::cos(angle), std::sin(angle)};
  }

  std::vector<cplx> a(m);
  std::vector<cplx> b(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);

  radix2(a, false);
  radix2(b, false);
  for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
  radix2(a, true);

  const double inv_m = 1.0 / static_cast<double>(m);
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * inv_m * chirp[k];
  return out;
}

std::vector<cplx> transform(std::span<const cplx> x, bool inverse) {
  if (x.empty()) return {};
  if (is_power_of_two(x.size())) {
    std::vector<cplx> a(x.begin(), x.end());
    radix2(a, inverse);
    return a;
  }
  return bluestein(x, inverse);
}

}  // namespace

bool is_power_of_two(std::size_t n) noexcept { return std::has_single_bit(n); }

std::vector<cplx> dft(std::span<const cplx> x) { return transform(x, false); }

std::vector<cplx> dft(std::span<const double> x) {
  std::vector<cplx> c(x.begin(), x.end());
  return transform(c, false);
}

std::vector<cplx> idft(std::span<const cplx> x) {
  auto out = transform(x, true);
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (auto& v : out) v *= inv_n;
  return out;
}

}  // namespace vibrelab
