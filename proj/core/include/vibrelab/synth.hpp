#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vibrelab/signal.hpp"

namespace vibrelab {

/// One modal term D e^(-zeta w t) sin(w_d t + phi), w = 2 pi f,
/// w_d = w sqrt(1 - zeta^2). With zeta = 0 this is the plain sinusoid D sin(wt + phi).
struct ModalComponent {
  double amplitude_D = 0.0;  // meters
  double frequency_hz = 0.0;
  double phase_rad = 0.0;
  double damping_ratio = 0.0;  // [0, 1)
};

struct VibrationModel {
  std::vector<ModalComponent> modes;
  std::string label;
};

/// Throws Errc::InvalidModel if the model is empty or a mode is out of range.
void validate(const VibrationModel& model);

enum class Quantity { displacement, velocity, acceleration };

std::string_view to_string(Quantity q) noexcept;

// Analytic ground truth sampled at t = n / rate_hz for n in [0, ceil(duration * rate)).
// Preconditions: rate_hz > 2 * max mode frequency (NyquistViolation),
// duration_s > 0 (NonPositiveDuration).
Signal synth_displacement(const VibrationModel& model, double rate_hz, double duration_s);
Signal synth_velocity(const VibrationModel& model, double rate_hz, double duration_s);
Signal synth_acceleration(const VibrationModel& model, double rate_hz, double duration_s);
Signal synthesize(const VibrationModel& model, Quantity q, double rate_hz, double duration_s);

/// Number of samples produced for the given rate and duration.
std::size_t sample_count(double rate_hz, double duration_s);

// JSON: { "label": s, "modes": [{ "amplitude_D", "frequency_hz", "phase_rad", "damping_ratio" }] }
// phase_rad and damping_ratio default to 0 when absent.
VibrationModel model_from_json(std::string_view text);
std::string model_to_json(const VibrationModel& model);

}  // namespace vibrelab
