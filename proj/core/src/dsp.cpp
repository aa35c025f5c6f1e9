#include "vibrelab/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <ostream>

#include "vibrelab/error.hpp"
#include "vibrelab/fft.hpp"

namespace vibrelab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string with_flag(const std::string& label, const std::string& flag) {
  return label.empty() ? flag : label + " " + flag;
}

Unit integrated_unit(Unit u, bool& known) {
  known = true;
  switch (u) {
    case Unit::meter_per_s2: return Unit::meter_per_s;
    case Unit::meter_per_s: return Unit::meter;
    default: known = false; return Unit::dimensionless;
  }
}

Unit differentiated_unit(Unit u, bool& known) {
  known = true;
  switch (u) {
    case Unit::meter: return Unit::meter_per_s;
    case Unit::meter_per_s: return Unit::meter_per_s2;
    default: known = false; return Unit::dimensionless;
  }
}

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x); }

// Lowpass prototype with unit DC gain; cutoff is a fraction of the sample rate.
std::vector<double> lowpass_taps(double cutoff_fraction, int taps) {
  const auto m = static_cast<std::size_t>(taps);
  const double centre = 0.5 * static_cast<double>(taps - 1);
  std::vector<double> h(m);
  for (std::size_t n = 0; n < m; ++n) {
    // Hann without the zero end points: the full length stays effective.
    const double w =
        0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(n + 1) / static_cast<double>(taps + 1));
    h[n] = 2.0 * cutoff_fraction * sinc(2.0 * cutoff_fraction * (static_cast<double>(n) - centre)) * w;
  }
  const double sum = std::accumulate(h.begin(), h.end(), 0.0);
  for (double& v : h) v /= sum;
  return h;
}

}  // namespace

std::string_view to_string(Window w) noexcept {
  return w == Window::hann ? "hann" : "rectangular";
}

std::string_view to_string(Scaling s) noexcept {
  return s == Scaling::power ? "power" : "amplitude";
}

std::optional<Window> window_from_string(std::string_view name) noexcept {
  if (name == "hann") return Window::hann;
  if (name == "rectangular") return Window::rectangular;
  return std::nullopt;
}

std::optional<Scaling> scaling_from_string(std::string_view name) noexcept {
  if (name == "amplitude") return Scaling::amplitude;
  if (name == "power") return Scaling::power;
  return std::nullopt;
}

std::vector<double> window_coefficients(Window window, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (window == Window::hann) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
    }
  }
  return w;
}

Spectrum fft_spectrum(const Signal& x, Window window, Scaling scaling) {
  const std::size_t n = x.size();
  if (n < 2) throw Error(Errc::TooShort, "spectrum needs N >= 2, got " + std::to_string(n));

  const auto w = window_coefficients(window, n);
  std::vector<cplx> buf(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = x[i] * w[i];
  const auto spec = dft(buf);

  const double sum_w = std::accumulate(w.begin(), w.end(), 0.0);
  const double sum_w2 = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
  const std::size_t bins = n / 2 + 1;

  Spectrum out;
  out.bin_width_hz = x.sample_rate_hz() / static_cast<double>(n);
  out.window = window;
  out.scaling = scaling;
  out.source_unit = x.unit();
  out.magnitudes.resize(bins);
  out.phases_rad.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const bool single = k == 0 || (n % 2 == 0 && k == n / 2);
    const double mag = std::abs(spec[k]);
    if (scaling == Scaling::amplitude) {
      out.magnitudes[k] = (single ? 1.0 : 2.0) * mag / sum_w;
    } else {
      out.magnitudes[k] = (single ? 1.0 : 2.0) * mag * mag / (sum_w2 * static_cast<double>(n));
    }
    out.phases_rad[k] = std::arg(spec[k]);
  }
  return out;
}

SpectralPeak dominant_frequency(const Spectrum& s, bool exclude_dc) {
  const std::size_t first = exclude_dc ? 1 : 0;
  if (s.magnitudes.size() <= first) throw Error(Errc::EmptySpectrum, "no eligible bins");
  const double top = *std::max_element(s.magnitudes.begin() + static_cast<std::ptrdiff_t>(first),
                                       s.magnitudes.end());
  const double threshold = top * (1.0 - 1e-9);
  for (std::size_t k = first; k < s.magnitudes.size(); ++k) {
    if (s.magnitudes[k] >= threshold) return {s.frequency(k), s.magnitudes[k]};
  }
  return {s.frequency(first), s.magnitudes[first]};
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "# bin_width_hz=" << format_sci(s.bin_width_hz) << '\n'
      << "# window=" << to_string(s.window) << '\n'
      << "# scaling=" << to_string(s.scaling) << '\n'
      << "# source_unit=" << to_string(s.source_unit) << '\n'
      << "frequency_hz,magnitude,phase_rad\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    out << format_sci(s.frequency(k)) << ',' << format_sci(s.magnitudes[k]) << ','
        << format_sci(s.phases_rad[k]) << '\n';
  }
}

void write_spectrum_csv(const std::string& path, const Spectrum& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
  write_spectrum_csv(out, s);
}

std::string_view to_string(FilterKind k) noexcept {
  switch (k) {
    case FilterKind::lowpass: return "lowpass";
    case FilterKind::highpass: return "highpass";
    case FilterKind::bandpass: return "bandpass";
  }
  return "lowpass";
}

std::optional<FilterKind> filter_kind_from_string(std::string_view name) noexcept {
  for (auto k : {FilterKind::lowpass, FilterKind::highpass, FilterKind::bandpass}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

void validate(const FilterSpec& spec, double sample_rate_hz) {
  if (spec.taps < 11 || spec.taps % 2 == 0) {
    throw Error(Errc::InvalidFilter, "taps must be odd and >= 11, got " + std::to_string(spec.taps));
  }
  if (!(std::isfinite(spec.cutoff_hz) && spec.cutoff_hz > 0.0)) {
    throw Error(Errc::InvalidFilter, "cutoff_hz must be > 0");
  }
  double top = spec.cutoff_hz;
  if (spec.kind == FilterKind::bandpass) {
    if (!(std::isfinite(spec.cutoff_high_hz) && spec.cutoff_high_hz > spec.cutoff_hz)) {
      throw Error(Errc::InvalidFilter, "bandpass edges must satisfy 0 < low < high");
    }
    top = spec.cutoff_high_hz;
  }
  const double nyquist = 0.5 * sample_rate_hz;
  if (top >= nyquist) {
    throw Error(Errc::CutoffAboveNyquist,
                "cutoff " + format_sci(top) + " Hz >= Nyquist " + format_sci(nyquist) + " Hz");
  }
}

std::vector<double> design_fir(const FilterSpec& spec, double sample_rate_hz) {
  validate(spec, sample_rate_hz);
  const double lo = spec.cutoff_hz / sample_rate_hz;
  auto h = lowpass_taps(lo, spec.taps);
  const std::size_t centre = static_cast<std::size_t>(spec.taps - 1) / 2;
  switch (spec.kind) {
    case FilterKind::lowpass:
      break;
    case FilterKind::highpass:
      for (double& v : h) v = -v;
      h[centre] += 1.0;
      break;
    case FilterKind::bandpass: {
      const auto upper = lowpass_taps(spec.cutoff_high_hz / sample_rate_hz, spec.taps);
      for (std::size_t n = 0; n < h.size(); ++n) h[n] = upper[n] - h[n];
      break;
    }
  }
  return h;
}

Signal filter(const Signal& x, const FilterSpec& spec) {
  const auto h = design_fir(spec, x.sample_rate_hz());
  const std::size_t n = x.size();
  const std::size_t m = h.size();
  if (n < m) {
    throw Error(Errc::SignalShorterThanFilter,
                std::to_string(n) + " samples < " + std::to_string(m) + " taps");
  }
  const auto delay = static_cast<std::ptrdiff_t>((m - 1) / 2);
  const auto len = static_cast<std::ptrdiff_t>(n);
  std::vector<double> y(n, 0.0);
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    // y[i] = sum_k h[k] x[i + delay - k], zero outside the record
    const std::ptrdiff_t k_lo = std::max<std::ptrdiff_t>(0, i + delay - (len - 1));
    const std::ptrdiff_t k_hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(m) - 1, i + delay);
    double acc = 0.0;
    for (std::ptrdiff_t k = k_lo; k <= k_hi; ++k) {
      acc += h[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(i + delay - k)];
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
  return x.derive(std::move(y), x.unit(), with_flag(x.label(), "edge=" + std::to_string(delay)));
}

Signal integrate(const Signal& x, const IntegrateOptions& opts) {
  const std::size_t n = x.size();
  if (n < 2) throw Error(Errc::TooShort, "integration needs N >= 2, got " + std::to_string(n));

  std::vector<double> in(x.samples().begin(), x.samples().end());
  if (opts.remove_mean) {
    const double mu = mean_of(in);
    for (double& v : in) v -= mu;
  }

  const double half_dt = 0.5 * x.dt();
  std::vector<double> y(n);
  y[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) y[i] = y[i - 1] + half_dt * (in[i - 1] + in[i]);

  if (opts.remove_mean) {
    const double mu = mean_of(y);
    for (double& v : y) v -= mu;
  }

  bool known = true;
  const Unit unit = integrated_unit(x.unit(), known);
  std::string label = known ? x.label() : with_flag(x.label(), std::string(kUnitDroppedFlag));
  Signal out = x.derive(std::move(y), unit, std::move(label));

  if (opts.highpass_hz) {
    // Long enough to resolve the cutoff, but never longer than the record.
    const double wanted = std::ceil(4.0 * x.sample_rate_hz() / *opts.highpass_hz);
    auto taps = static_cast<std::size_t>(std::clamp(wanted, 11.0, static_cast<double>(n)));
    if (taps % 2 == 0) --taps;
    FilterSpec hp{FilterKind::highpass, *opts.highpass_hz, 0.0, static_cast<int>(taps)};
    out = filter(out, hp);
  }
  return out;
}

Signal differentiate(const Signal& x) {
  const std::size_t n = x.size();
  if (n < 3) throw Error(Errc::TooShort, "differentiation needs N >= 3, got " + std::to_string(n));
  const double inv_2h = 0.5 * x.sample_rate_hz();
  const auto s = x.samples();
  std::vector<double> y(n);
  y[0] = (-3.0 * s[0] + 4.0 * s[1] - s[2]) * inv_2h;
  for (std::size_t i = 1; i + 1 < n; ++i) y[i] = (s[i + 1] - s[i - 1]) * inv_2h;
  y[n - 1] = (3.0 * s[n - 1] - 4.0 * s[n - 2] + s[n - 3]) * inv_2h;

  bool known = true;
  const Unit unit = differentiated_unit(x.unit(), known);
  std::string label = known ? x.label() : with_flag(x.label(), std::string(kUnitDroppedFlag));
  return x.derive(std::move(y), unit, std::move(label));
}

Signal detrend(const Signal& x, bool linear) {
  const auto s = x.samples();
  const std::size_t n = s.size();
  std::vector<double> y(s.begin(), s.end());
  const double mu = mean_of(s);
  if (!linear || n < 2) {
    for (double& v : y) v -= mu;
    return x.derive(std::move(y), x.unit(), x.label());
  }
  // Least squares on the sample index, centred so the slope decouples from the mean.
  const double centre = 0.5 * static_cast<double>(n - 1);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) - centre;
    sxy += t * (s[i] - mu);
    sxx += t * t;
  }
  const double slope = sxy / sxx;
  for (std::size_t i = 0; i < n; ++i) y[i] -= mu + slope * (static_cast<double>(i) - centre);
  return x.derive(std::move(y), x.unit(), x.label());
}

std::vector<double> positive_peaks(const Signal& x) {
  const auto s = x.samples();
  const std::size_t n = s.size();
  std::vector<double> peaks;
  std::size_t i = 0;
  while (i < n) {
    if (s[i] <= 0.0) {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    std::size_t best = i;
    while (i < n && s[i] > 0.0) {
      if (s[i] > s[best]) best = i;
      ++i;
    }
    // Only half-cycles bounded by non-positive samples on both sides count.
    if (begin == 0 || i == n) continue;
    double value = s[best];
    const double y0 = s[best - 1];
    const double y2 = s[best + 1];
    const double curvature = y0 - 2.0 * value + y2;
    if (curvature < 0.0) value -= (y0 - y2) * (y0 - y2) / (8.0 * curvature);
    peaks.push_back(value);
  }
  return peaks;
}

double estimate_damping(const Signal& x) {
  const auto peaks = positive_peaks(x);
  if (peaks.size() < 3) {
    throw Error(Errc::InsufficientPeaks,
                "need >= 3 positive peaks, found " + std::to_string(peaks.size()));
  }
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < peaks.size(); ++k) sum += std::log(peaks[k] / peaks[k + 1]);
  const double delta = sum / static_cast<double>(peaks.size() - 1);
  return delta / std::sqrt(4.0 * kPi * kPi + delta * delta);
}

}  // namespace vibrelab
