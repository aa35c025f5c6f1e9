#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vibrelab/signal.hpp"

namespace vibrelab {

enum class Window { rectangular, hann };
enum class Scaling { amplitude, power };

std::string_view to_string(Window w) noexcept;
std::string_view to_string(Scaling s) noexcept;
std::optional<Window> window_from_string(std::string_view name) noexcept;
std::optional<Scaling> scaling_from_string(std::string_view name) noexcept;

/// One-sided spectrum over bins 0..floor(N/2).
///
/// amplitude scaling: 2|X_k| / sum(w) for interior bins, |X_k| / sum(w) for DC
/// and Nyquist, so a bin-centred tone of amplitude A reads A under either
/// window (the coherent-gain correction is folded into sum(w)).
/// power scaling: the same bins squared with energy normalisation
/// sum(w^2) * N, so that under the rectangular window the bins sum to the
/// mean square of the input.
struct Spectrum {
  double bin_width_hz = 0.0;
  std::vector<double> magnitudes;
  std::vector<double> phases_rad;
  Window window = Window::rectangular;
  Scaling scaling = Scaling::amplitude;
  Unit source_unit = Unit::dimensionless;

  std::size_t size() const noexcept { return magnitudes.size(); }
  double frequency(std::size_t bin) const noexcept {
    return static_cast<double>(bin) * bin_width_hz;
  }
};

Spectrum fft_spectrum(const Signal& x, Window window = Window::hann,
                      Scaling scaling = Scaling::amplitude);

/// Periodic (DFT-even) window coefficients of length n.
std::vector<double> window_coefficients(Window window, std::size_t n);

struct SpectralPeak {
  double frequency_hz = 0.0;
  double magnitude = 0.0;
};

/// Bin with the largest magnitude. Magnitudes within a relative 1e-9 of the
/// maximum count as ties and resolve to the lowest frequency.
SpectralPeak dominant_frequency(const Spectrum& s, bool exclude_dc = true);

void write_spectrum_csv(std::ostream& out, const Spectrum& s);
void write_spectrum_csv(const std::string& path, const Spectrum& s);

enum class FilterKind { lowpass, highpass, bandpass };

std::string_view to_string(FilterKind k) noexcept;
std::optional<FilterKind> filter_kind_from_string(std::string_view name) noexcept;

struct FilterSpec {
  FilterKind kind = FilterKind::lowpass;
  double cutoff_hz = 0.0;
  double cutoff_high_hz = 0.0;  // bandpass upper edge; cutoff_hz is the lower edge
  int taps = 101;               // odd, >= 11
};

/// Throws InvalidFilter for malformed specs and CutoffAboveNyquist when an edge
/// reaches sample_rate_hz / 2.
void validate(const FilterSpec& spec, double sample_rate_hz);

/// Hann-windowed sinc taps. Lowpass is normalised to unit DC gain; highpass
/// and bandpass are formed by spectral subtraction of lowpass prototypes.
std::vector<double> design_fir(const FilterSpec& spec, double sample_rate_hz);

/// Linear-phase FIR with (taps - 1) / 2 samples of delay compensation; the
/// input is zero-extended, so that many samples at either end are edge
/// affected (flagged in the label as "edge=<k>").
Signal filter(const Signal& x, const FilterSpec& spec);

struct IntegrateOptions {
  bool remove_mean = true;
  std::optional<double> highpass_hz;
};

/// Cumulative trapezoidal integral, y[0] = 0. With remove_mean the input mean
/// is removed first and the output mean afterwards; highpass_hz runs a FIR
/// highpass over the result to suppress residual drift.
Signal integrate(const Signal& x, const IntegrateOptions& opts = {});

/// Second-order differences: central in the interior, one-sided at the ends.
Signal differentiate(const Signal& x);

/// Removes the mean, or the least-squares line when linear is set.
Signal detrend(const Signal& x, bool linear = false);

/// Damping ratio from the logarithmic decrement of successive positive peaks.
double estimate_damping(const Signal& x);

/// Peak value of each complete positive half-cycle, parabolically refined.
std::vector<double> positive_peaks(const Signal& x);

}  // namespace vibrelab
