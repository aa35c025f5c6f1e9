#include "vibrelab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json_io.hpp"
#include "vibrelab/error.hpp"

namespace vibrelab {

namespace {

struct ModeTerms {
  double amp;
  double omega;
  double omega_d;
  double zeta;
  double phase;
};

ModeTerms terms(const ModalComponent& m) {
  const double omega = 2.0 * std::numbers::pi * m.frequency_hz;
  return {m.amplitude_D, omega, omega * std::sqrt(1.0 - m.damping_ratio * m.damping_ratio),
          m.damping_ratio, m.phase_rad};
}

double eval(const ModeTerms& m, Quantity q, double t) {
  const double theta = m.omega_d * t + m.phase;
  if (m.zeta == 0.0) {
    switch (q) {
      case Quantity::displacement: return m.amp * std::sin(theta);
      case Quantity::velocity: return m.amp * m.omega * std::cos(theta);
      case Quantity::acceleration: return -m.amp * m.omega * m.omega * std::sin(theta);
    }
  }
  const double envelope = m.amp * std::exp(-m.zeta * m.omega * t);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double zw = m.zeta * m.omega;
  switch (q) {
    case Quantity::displacement: return envelope * s;
    case Quantity::velocity: return envelope * (m.omega_d * c - zw * s);
    case Quantity::acceleration:
      return envelope * ((zw * zw - m.omega_d * m.omega_d) * s - 2.0 * zw * m.omega_d * c);
  }
  return 0.0;
}

Unit unit_of(Quantity q) {
  switch (q) {
    case Quantity::displacement: return Unit::meter;
    case Quantity::velocity: return Unit::meter_per_s;
    case Quantity::acceleration: return Unit::meter_per_s2;
  }
  return Unit::dimensionless;
}

}  // namespace

std::string_view to_string(Quantity q) noexcept {
  switch (q) {
    case Quantity::displacement: return "displacement";
    case Quantity::velocity: return "velocity";
    case Quantity::acceleration: return "acceleration";
  }
  return "displacement";
}

void validate(const VibrationModel& model) {
  if (model.modes.empty()) throw Error(Errc::InvalidModel, "model has no modes");
  for (std::size_t i = 0; i < model.modes.size(); ++i) {
    const auto& m = model.modes[i];
    const std::string at = "mode " + std::to_string(i) + ": ";
    if (!(std::isfinite(m.amplitude_D) && m.amplitude_D > 0.0)) {
      throw Error(Errc::InvalidModel, at + "amplitude_D must be > 0");
    }
    if (!(std::isfinite(m.frequency_hz) && m.frequency_hz > 0.0)) {
      throw Error(Errc::InvalidModel, at + "frequency_hz must be > 0");
    }
    if (!std::isfinite(m.phase_rad)) throw Error(Errc::InvalidModel, at + "phase_rad not finite");
    if (!(m.damping_ratio >= 0.0 && m.damping_ratio < 1.0)) {
      throw Error(Errc::InvalidModel, at + "damping_ratio must be in [0, 1)");
    }
  }
}

std::size_t sample_count(double rate_hz, double duration_s) {
  const double n = std::ceil(duration_s * rate_hz - 1e-9);
  return static_cast<std::size_t>(std::max(1.0, n));
}

Signal synthesize(const VibrationModel& model, Quantity q, double rate_hz, double duration_s) {
  validate(model);
  if (!(std::isfinite(duration_s) && duration_s > 0.0)) {
    throw Error(Errc::NonPositiveDuration, "duration_s must be > 0");
  }
  const auto top = std::max_element(
      model.modes.begin(), model.modes.end(),
      [](const auto& a, const auto& b) { return a.frequency_hz < b.frequency_hz; });
  if (!(std::isfinite(rate_hz) && rate_hz > 2.0 * top->frequency_hz)) {
    throw Error(Errc::NyquistViolation, "rate " + format_sci(rate_hz) +
                                            " Hz must exceed twice " +
                                            format_sci(top->frequency_hz) + " Hz");
  }

  std::vector<ModeTerms> modes;
  modes.reserve(model.modes.size());
  for (const auto& m : model.modes) modes.push_back(terms(m));

  std::vector<double> out(sample_count(rate_hz, duration_s));
  for (std::size_t n = 0; n < out.size(); ++n) {
    const double t = static_cast<double>(n) / rate_hz;
    double acc = 0.0;
    for (const auto& m : modes) acc += eval(m, q, t);
    out[n] = acc;
  }
  std::string label = model.label.empty() ? std::string(to_string(q))
                                          : model.label + " " + std::string(to_string(q));
  return Signal(rate_hz, std::move(out), unit_of(q), std::move(label), 0.0);
}

Signal synth_displacement(const VibrationModel& model, double rate_hz, double duration_s) {
  return synthesize(model, Quantity::displacement, rate_hz, duration_s);
}

Signal synth_velocity(const VibrationModel& model, double rate_hz, double duration_s) {
  return synthesize(model, Quantity::velocity, rate_hz, duration_s);
}

Signal synth_acceleration(const VibrationModel& model, double rate_hz, double duration_s) {
  return synthesize(model, Quantity::acceleration, rate_hz, duration_s);
}

VibrationModel model_from_json(std::string_view text) {
  return detail::model_from(detail::parse_json(text, "model"), "");
}

std::string model_to_json(const VibrationModel& model) {
  return detail::to_json(model).dump(2) + "\n";
}

}  // namespace vibrelab
