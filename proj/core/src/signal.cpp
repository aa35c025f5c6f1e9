#include "vibrelab/signal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <utility>

#include "vibrelab/error.hpp"

namespace vibrelab {

namespace {

void require_compatible(const Signal& a, const Signal& b, bool same_unit) {
  if (a.size() != b.size()) {
    throw Error(Errc::LengthMismatch, "lengths " + std::to_string(a.size()) + " and " +
                                          std::to_string(b.size()));
  }
  const double ra = a.sample_rate_hz();
  const double rb = b.sample_rate_hz();
  if (std::abs(ra - rb) > 1e-9 * std::max(ra, rb)) {
    throw Error(Errc::RateMismatch,
                "sample rates " + format_sci(ra) + " Hz and " + format_sci(rb) + " Hz");
  }
  if (same_unit && a.unit() != b.unit()) {
    throw Error(Errc::UnitMismatch, std::string(to_string(a.unit())) + " vs " +
                                        std::string(to_string(b.unit())));
  }
}

std::string flagged(std::string label) {
  if (!label.empty()) label += ' ';
  label += kUnitDroppedFlag;
  return label;
}

}  // namespace

std::string_view to_string(Unit unit) noexcept {
  switch (unit) {
    case Unit::meter: return "meter";
    case Unit::meter_per_s: return "meter_per_s";
    case Unit::meter_per_s2: return "meter_per_s2";
    case Unit::volt: return "volt";
    case Unit::newton: return "newton";
    case Unit::dimensionless: return "dimensionless";
    case Unit::adc_code: return "adc_code";
  }
  return "dimensionless";
}

Unit unit_from_string(std::string_view name) {
  for (Unit u : {Unit::meter, Unit::meter_per_s, Unit::meter_per_s2, Unit::volt, Unit::newton,
                 Unit::dimensionless, Unit::adc_code}) {
    if (to_string(u) == name) return u;
  }
  throw Error(Errc::MalformedDocument, "unknown unit '" + std::string(name) + "'");
}

Signal::Signal(double sample_rate_hz, std::vector<double> samples, Unit unit, std::string label,
               double start_time_s)
    : sample_rate_hz_(sample_rate_hz),
      start_time_s_(start_time_s),
      samples_(std::move(samples)),
      unit_(unit),
      label_(std::move(label)) {
  if (!(std::isfinite(sample_rate_hz_) && sample_rate_hz_ > 0.0)) {
    throw Error(Errc::InvalidSignal, "sample_rate_hz must be finite and > 0");
  }
  if (!std::isfinite(start_time_s_)) {
    throw Error(Errc::InvalidSignal, "start_time_s must be finite");
  }
  if (samples_.empty()) {
    throw Error(Errc::InvalidSignal, "signal needs at least one sample");
  }
  const auto bad = std::find_if(samples_.begin(), samples_.end(),
                                [](double x) { return !std::isfinite(x); });
  if (bad != samples_.end()) {
    throw Error(Errc::NonFiniteSample,
                "sample " + std::to_string(bad - samples_.begin()) + " is not finite");
  }
}

Signal Signal::derive(std::vector<double> samples, Unit unit, std::string label) const {
  return Signal(sample_rate_hz_, std::move(samples), unit, std::move(label), start_time_s_);
}

Signal add(const Signal& a, const Signal& b) {
  require_compatible(a, b, true);
  std::vector<double> out(a.size());
  std::transform(a.samples().begin(), a.samples().end(), b.samples().begin(), out.begin(),
                 std::plus<>{});
  return a.derive(std::move(out), a.unit(), a.label());
}

Signal subtract(const Signal& a, const Signal& b) {
  require_compatible(a, b, true);
  std::vector<double> out(a.size());
  std::transform(a.samples().begin(), a.samples().end(), b.samples().begin(), out.begin(),
                 std::minus<>{});
  return a.derive(std::move(out), a.unit(), a.label());
}

Signal multiply(const Signal& a, const Signal& b) {
  require_compatible(a, b, false);
  std::vector<double> out(a.size());
  std::transform(a.samples().begin(), a.samples().end(), b.samples().begin(), out.begin(),
                 std::multiplies<>{});
  if (b.unit() == Unit::dimensionless) return a.derive(std::move(out), a.unit(), a.label());
  if (a.unit() == Unit::dimensionless) return a.derive(std::move(out), b.unit(), a.label());
  return a.derive(std::move(out), Unit::dimensionless, flagged(a.label()));
}

Signal sqrt_signal(const Signal& a) {
  const auto s = a.samples();
  const auto neg = std::find_if(s.begin(), s.end(), [](double x) { return x < 0.0; });
  if (neg != s.end()) {
    throw Error(Errc::NegativeInput, "first negative sample at index " +
                                         std::to_string(neg - s.begin()));
  }
  std::vector<double> out(s.size());
  std::transform(s.begin(), s.end(), out.begin(), [](double x) { return std::sqrt(x); });
  std::string label = a.unit() == Unit::dimensionless ? a.label() : flagged(a.label());
  return a.derive(std::move(out), Unit::dimensionless, std::move(label));
}

Signal scale(const Signal& a, double k) {
  if (!std::isfinite(k)) throw Error(Errc::NonFiniteScalar, "scale factor is not finite");
  std::vector<double> out(a.size());
  std::transform(a.samples().begin(), a.samples().end(), out.begin(),
                 [k](double x) { return k * x; });
  return a.derive(std::move(out), a.unit(), a.label());
}

SignalStats stats(std::span<const double> samples) {
  SignalStats st;
  if (samples.empty()) return st;
  double lo = samples.front();
  double hi = samples.front();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double x : samples) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    sum += x;
    sum_sq += x * x;
  }
  const auto n = static_cast<double>(samples.size());
  st.peak = std::max(std::abs(lo), std::abs(hi));
  st.peak_to_peak = hi - lo;
  st.mean = sum / n;
  st.rms = std::sqrt(sum_sq / n);
  return st;
}

SignalStats stats(const Signal& a) { return stats(a.samples()); }

std::uint64_t ulp_distance(double a, double b) noexcept {
  // Map the sign-magnitude encoding onto a monotone unsigned line.
  const auto ordered = [](double x) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    return (bits >> 63) ? ~bits + 1 : bits | (std::uint64_t{1} << 63);
  };
  const std::uint64_t ua = ordered(a);
  const std::uint64_t ub = ordered(b);
  return ua > ub ? ua - ub : ub - ua;
}

}  // namespace vibrelab
