#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vibrelab/signal.hpp"
#include "vibrelab/synth.hpp"

namespace vibrelab {

/// Piezoelectric accelerometer. The output voltage is proportional to the
/// applied acceleration; the seismic mass only enters through F = m a.
struct SensorModel {
  double sensitivity_v_per_ms2 = 1.0;
  double seismic_mass_kg = 1.0;
  double noise_rms_v = 0.0;
  int axes = 1;  // 1 or 3
  /// Acceleration gain per axis; axis 0 is the bending axis of the beam.
  std::array<double, 3> axis_gains{1.0, 0.0, 0.0};
};

/// Bipolar converter spanning [-full_scale_v, +full_scale_v].
struct AdcModel {
  int bits = 16;  // [8, 24]
  double full_scale_v = 5.0;
  double sample_rate_hz = 1000.0;

  double lsb() const noexcept;
  std::int32_t min_code() const noexcept;
  std::int32_t max_code() const noexcept;
};

void validate(const SensorModel& sensor);
void validate(const AdcModel& adc);

inline constexpr std::string_view kNoiseAlgorithm = "mt19937_64/box-muller";

struct AcquisitionRecord {
  std::vector<std::vector<std::int32_t>> channels;
  std::vector<std::size_t> clipped;  // saturated samples per channel
  AdcModel adc;
  SensorModel sensor;
  std::uint64_t seed = 0;
  double start_time_s = 0.0;
  std::string label;
  std::string noise_algorithm{kNoiseAlgorithm};

  std::size_t channel_count() const noexcept { return channels.size(); }
};

Signal seismic_force(const Signal& accel, double mass_kg);

Signal transduce(const Signal& accel, const SensorModel& sensor, int axis = 0);

/// Inverse of transduce: volts / sensitivity, unit meter_per_s2.
Signal to_acceleration(const Signal& volts, double sensitivity_v_per_ms2);

/// Adds zero-mean Gaussian noise from a seeded mt19937_64 via Box-Muller.
/// Identical (seed, length) pairs give bit-identical noise on a given platform.
Signal add_noise(const Signal& x, double noise_rms_v, std::uint64_t seed);

/// Mid-tread quantizer: code = clamp(round(v / lsb)), round half away from
/// zero, saturating. The clip count is stored per channel and in the label.
AcquisitionRecord quantize(const Signal& volts, const AdcModel& adc);

Signal reconstruct(const AcquisitionRecord& rec, std::size_t channel);

/// Raw codes of one channel as an adc_code signal.
Signal channel_codes(const AcquisitionRecord& rec, std::size_t channel);

/// Seed used for the noise of the given axis. Axis 0 uses the base seed.
std::uint64_t axis_seed(std::uint64_t base_seed, int axis) noexcept;

/// synth_acceleration -> per-axis gain -> transduce -> add_noise -> quantize,
/// sampled at adc.sample_rate_hz.
AcquisitionRecord acquire(const VibrationModel& model, const SensorModel& sensor,
                          const AdcModel& adc, double duration_s, std::uint64_t seed);

// Directory layout: channel_<i>.csv (unit=adc_code) and record.json.
void write_record(const std::string& dir, const AcquisitionRecord& rec);
AcquisitionRecord read_record(const std::string& dir);

SensorModel sensor_from_json(std::string_view text);
AdcModel adc_from_json(std::string_view text);
std::string sensor_to_json(const SensorModel& sensor);
std::string adc_to_json(const AdcModel& adc);

}  // namespace vibrelab
