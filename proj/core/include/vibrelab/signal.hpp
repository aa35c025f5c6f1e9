#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vibrelab {

enum class Unit {
  meter,
  meter_per_s,
  meter_per_s2,
  volt,
  newton,
  dimensionless,
  adc_code,
};

std::string_view to_string(Unit unit) noexcept;

/// Throws Errc::MalformedDocument for names outside the Unit enumeration.
Unit unit_from_string(std::string_view name);

/// Uniformly sampled real-valued time series. Sample n sits at
/// start_time_s + n / sample_rate_hz. Immutable once constructed; the
/// constructor rejects empty sequences, non-positive rates and any
/// non-finite sample.
class Signal {
 public:
  Signal(double sample_rate_hz, std::vector<double> samples, Unit unit,
         std::string label = {}, double start_time_s = 0.0);

  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  double start_time_s() const noexcept { return start_time_s_; }
  Unit unit() const noexcept { return unit_; }
  const std::string& label() const noexcept { return label_; }

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double operator[](std::size_t n) const noexcept { return samples_[n]; }

  double dt() const noexcept { return 1.0 / sample_rate_hz_; }
  double time_at(std::size_t n) const noexcept {
    return start_time_s_ + static_cast<double>(n) / sample_rate_hz_;
  }

  /// Same timebase, new content.
  Signal derive(std::vector<double> samples, Unit unit, std::string label) const;

 private:
  double sample_rate_hz_;
  double start_time_s_;
  std::vector<double> samples_;
  Unit unit_;
  std::string label_;
};

struct SignalStats {
  double peak = 0.0;          // max |x|
  double peak_to_peak = 0.0;  // max x - min x
  double rms = 0.0;
  double mean = 0.0;
};

// Elementwise arithmetic. Binary operations require equal length, equal
// sample rate (relative tolerance 1e-9) and, for add/subtract, identical
// units. Metadata (rate, start time) comes from the left operand.
Signal add(const Signal& a, const Signal& b);
Signal subtract(const Signal& a, const Signal& b);

/// The product unit is only defined when one side is dimensionless; any
/// other combination yields a dimensionless result whose label carries a
/// "[unit-dropped]" flag.
Signal multiply(const Signal& a, const Signal& b);

/// Elementwise square root. Result is dimensionless; a dimensioned input
/// gets the "[unit-dropped]" flag. Throws NegativeInput naming the first
/// offending index.
Signal sqrt_signal(const Signal& a);

Signal scale(const Signal& a, double k);

SignalStats stats(const Signal& a);
SignalStats stats(std::span<const double> samples);

inline constexpr std::string_view kUnitDroppedFlag = "[unit-dropped]";

// CSV exchange format:
//   # sample_rate_hz=<r>
//   # unit=<u>
//   # label=<s>
//   # start_time_s=<t>
//   <one sample per line>
// Reals are written in scientific notation with 9 significant digits,
// adc_code samples as integers. LF line endings, no locale.
void write_signal_csv(std::ostream& out, const Signal& signal);
void write_signal_csv(const std::string& path, const Signal& signal);
Signal read_signal_csv(std::istream& in, std::string_view source_name = "<stream>");
Signal read_signal_csv(const std::string& path);

/// Distance in units in the last place between two finite doubles.
std::uint64_t ulp_distance(double a, double b) noexcept;

/// Locale-independent scientific formatting, 9 significant digits.
std::string format_sci(double value);

/// Locale-independent parse of a complete string as a double.
bool parse_double(std::string_view text, double& value) noexcept;

}  // namespace vibrelab
