#include "vibrelab/daq.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "json_io.hpp"
#include "vibrelab/error.hpp"

namespace vibrelab {

namespace fs = std::filesystem;

namespace {

void require_unit(const Signal& s, Unit expected, const char* what) {
  if (s.unit() != expected) {
    throw Error(Errc::UnitMismatch, std::string(what) + " expects " +
                                        std::string(to_string(expected)) + ", got " +
                                        std::string(to_string(s.unit())));
  }
}

std::string axis_name(int axis) {
  static constexpr const char* names[] = {"x", "y", "z"};
  return axis >= 0 && axis < 3 ? names[axis] : std::to_string(axis);
}

// Uniform in (0, 1], 53-bit resolution.
double unit_open(std::mt19937_64& eng) {
  return (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

double AdcModel::lsb() const noexcept { return 2.0 * full_scale_v / std::ldexp(1.0, bits); }
std::int32_t AdcModel::min_code() const noexcept { return -(std::int32_t{1} << (bits - 1)); }
std::int32_t AdcModel::max_code() const noexcept { return (std::int32_t{1} << (bits - 1)) - 1; }

void validate(const SensorModel& sensor) {
  if (!(std::isfinite(sensor.sensitivity_v_per_ms2) && sensor.sensitivity_v_per_ms2 > 0.0)) {
    throw Error(Errc::InvalidSensor, "sensitivity_v_per_ms2 must be > 0");
  }
  if (!(std::isfinite(sensor.seismic_mass_kg) && sensor.seismic_mass_kg > 0.0)) {
    throw Error(Errc::InvalidSensor, "seismic_mass_kg must be > 0");
  }
  if (!(std::isfinite(sensor.noise_rms_v) && sensor.noise_rms_v >= 0.0)) {
    throw Error(Errc::InvalidSensor, "noise_rms_v must be >= 0");
  }
  if (sensor.axes != 1 && sensor.axes != 3) {
    throw Error(Errc::InvalidSensor, "axes must be 1 or 3");
  }
  for (double g : sensor.axis_gains) {
    if (!std::isfinite(g)) throw Error(Errc::InvalidSensor, "axis gains must be finite");
  }
}

void validate(const AdcModel& adc) {
  if (adc.bits < 8 || adc.bits > 24) {
    throw Error(Errc::InvalidAdc, "bits in [8,24] required, got " + std::to_string(adc.bits));
  }
  if (!(std::isfinite(adc.full_scale_v) && adc.full_scale_v > 0.0)) {
    throw Error(Errc::InvalidAdc, "full_scale_v must be > 0");
  }
  if (!(std::isfinite(adc.sample_rate_hz) && adc.sample_rate_hz > 0.0)) {
    throw Error(Errc::InvalidAdc, "sample_rate_hz must be > 0");
  }
}

Signal seismic_force(const Signal& accel, double mass_kg) {
  require_unit(accel, Unit::meter_per_s2, "seismic_force");
  if (!(std::isfinite(mass_kg) && mass_kg > 0.0)) {
    throw Error(Errc::NonPositiveMass, "mass must be > 0, got " + format_sci(mass_kg));
  }
  const Signal f = scale(accel, mass_kg);
  return f.derive({f.samples().begin(), f.samples().end()}, Unit::newton, accel.label());
}

Signal transduce(const Signal& accel, const SensorModel& sensor, int axis) {
  require_unit(accel, Unit::meter_per_s2, "transduce");
  validate(sensor);
  const Signal v = scale(accel, sensor.sensitivity_v_per_ms2);
  std::string label = "axis_" + axis_name(axis);
  if (!accel.label().empty()) label = accel.label() + " " + label;
  return v.derive({v.samples().begin(), v.samples().end()}, Unit::volt, std::move(label));
}

Signal to_acceleration(const Signal& volts, double sensitivity_v_per_ms2) {
  require_unit(volts, Unit::volt, "to_acceleration");
  if (!(std::isfinite(sensitivity_v_per_ms2) && sensitivity_v_per_ms2 > 0.0)) {
    throw Error(Errc::InvalidSensor, "sensitivity_v_per_ms2 must be > 0");
  }
  std::vector<double> out(volts.size());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = volts[n] / sensitivity_v_per_ms2;
  return volts.derive(std::move(out), Unit::meter_per_s2, volts.label());
}

Signal add_noise(const Signal& x, double noise_rms_v, std::uint64_t seed) {
  if (!(std::isfinite(noise_rms_v) && noise_rms_v >= 0.0)) {
    throw Error(Errc::InvalidSensor, "noise_rms_v must be >= 0");
  }
  if (noise_rms_v == 0.0) return x;

  std::mt19937_64 eng(seed);
  std::vector<double> out(x.samples().begin(), x.samples().end());
  for (std::size_t n = 0; n < out.size(); n += 2) {
    const double radius = std::sqrt(-2.0 * std::log(unit_open(eng)));
    const double angle = 2.0 * std::numbers::pi * unit_open(eng);
    out[n] += noise_rms_v * radius * std::cos(angle);
    if (n + 1 < out.size()) out[n + 1] += noise_rms_v * radius * std::sin(angle);
  }
  return x.derive(std::move(out), x.unit(), x.label());
}

AcquisitionRecord quantize(const Signal& volts, const AdcModel& adc) {
  require_unit(volts, Unit::volt, "quantize");
  validate(adc);
  const double lsb = adc.lsb();
  const double half = 0.5 * lsb;
  const auto lo = static_cast<double>(adc.min_code());
  const auto hi = static_cast<double>(adc.max_code());

  std::vector<std::int32_t> codes(volts.size());
  std::size_t clipped = 0;
  for (std::size_t n = 0; n < volts.size(); ++n) {
    const double v = volts[n];
    double code = std::round(v / lsb);
    // v / lsb can land on a rounding tie that the exact quotient does not
    // reach; settle on the code whose reconstruction is within half an lsb.
    const double residual = v - code * lsb;
    if (residual > half) {
      code += 1.0;
    } else if (residual < -half) {
      code -= 1.0;
    }
    if (code < lo || code > hi) {
      ++clipped;
      code = std::clamp(code, lo, hi);
    }
    codes[n] = static_cast<std::int32_t>(code);
  }

  AcquisitionRecord rec;
  rec.adc = adc;
  rec.adc.sample_rate_hz = volts.sample_rate_hz();
  rec.start_time_s = volts.start_time_s();
  rec.channels.push_back(std::move(codes));
  rec.clipped.push_back(clipped);
  rec.label = volts.label();
  if (!rec.label.empty()) rec.label += ' ';
  rec.label += "clipped=" + std::to_string(clipped);
  return rec;
}

Signal channel_codes(const AcquisitionRecord& rec, std::size_t channel) {
  if (channel >= rec.channels.size()) {
    throw Error(Errc::ChannelOutOfRange, "channel " + std::to_string(channel) + " of " +
                                             std::to_string(rec.channels.size()));
  }
  const auto& codes = rec.channels[channel];
  std::vector<double> out(codes.begin(), codes.end());
  return Signal(rec.adc.sample_rate_hz, std::move(out), Unit::adc_code,
                "channel_" + std::to_string(channel), rec.start_time_s);
}

Signal reconstruct(const AcquisitionRecord& rec, std::size_t channel) {
  if (channel >= rec.channels.size()) {
    throw Error(Errc::ChannelOutOfRange, "channel " + std::to_string(channel) + " of " +
                                             std::to_string(rec.channels.size()));
  }
  const double lsb = rec.adc.lsb();
  const auto& codes = rec.channels[channel];
  std::vector<double> out(codes.size());
  for (std::size_t n = 0; n < codes.size(); ++n) out[n] = static_cast<double>(codes[n]) * lsb;
  return Signal(rec.adc.sample_rate_hz, std::move(out), Unit::volt,
                "channel_" + std::to_string(channel), rec.start_time_s);
}

std::uint64_t axis_seed(std::uint64_t base_seed, int axis) noexcept {
  if (axis == 0) return base_seed;
  // splitmix64 finalizer
  std::uint64_t z = base_seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(axis);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

AcquisitionRecord acquire(const VibrationModel& model, const SensorModel& sensor,
                          const AdcModel& adc, double duration_s, std::uint64_t seed) {
  validate(sensor);
  validate(adc);
  const Signal accel = synth_acceleration(model, adc.sample_rate_hz, duration_s);

  AcquisitionRecord rec;
  rec.adc = adc;
  rec.sensor = sensor;
  rec.seed = seed;
  rec.label = model.label;
  for (int axis = 0; axis < sensor.axes; ++axis) {
    const Signal a = scale(accel, sensor.axis_gains[static_cast<std::size_t>(axis)]);
    const Signal v = add_noise(transduce(a, sensor, axis), sensor.noise_rms_v, axis_seed(seed, axis));
    AcquisitionRecord one = quantize(v, adc);
    rec.channels.push_back(std::move(one.channels.front()));
    rec.clipped.push_back(one.clipped.front());
  }
  return rec;
}

void write_record(const std::string& dir, const AcquisitionRecord& rec) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create '" + dir + "': " + ec.message());

  detail::json channels = detail::json::array();
  for (std::size_t c = 0; c < rec.channels.size(); ++c) {
    const std::string file = "channel_" + std::to_string(c) + ".csv";
    const Signal codes = channel_codes(rec, c);
    write_signal_csv((fs::path(dir) / file).string(),
                     codes.derive({codes.samples().begin(), codes.samples().end()},
                                  Unit::adc_code, "axis_" + axis_name(static_cast<int>(c))));
    channels.push_back({{"file", file}, {"clipped", rec.clipped.at(c)}});
  }
  detail::json doc = {
      {"label", rec.label},
      {"seed", rec.seed},
      {"noise_algorithm", rec.noise_algorithm},
      {"start_time_s", rec.start_time_s},
      {"sensor", detail::to_json(rec.sensor)},
      {"adc", detail::to_json(rec.adc)},
      {"channels", channels},
  };
  const std::string path = (fs::path(dir) / "record.json").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
}

AcquisitionRecord read_record(const std::string& dir) {
  const std::string path = (fs::path(dir) / "record.json").string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::FileNotFound, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto doc = detail::parse_json(buf.str(), path);

  AcquisitionRecord rec;
  rec.label = detail::get_string_or(doc, "label", "", "");
  rec.seed = doc.value("seed", std::uint64_t{0});
  rec.noise_algorithm = detail::get_string_or(doc, "noise_algorithm", "", "");
  rec.start_time_s = detail::get_number_or(doc, "start_time_s", 0.0, "");
  rec.sensor = detail::sensor_from(detail::get_object(doc, "sensor", ""), "/sensor");
  rec.adc = detail::adc_from(detail::get_object(doc, "adc", ""), "/adc");
  if (!doc.contains("channels") || !doc["channels"].is_array()) {
    throw Error(Errc::InvalidParams, path + ": /channels must be an array");
  }
  for (const auto& ch : doc["channels"]) {
    const std::string file = detail::get_string_or(ch, "file", "", "/channels");
    const Signal s = read_signal_csv((fs::path(dir) / file).string());
    std::vector<std::int32_t> codes;
    codes.reserve(s.size());
    for (double x : s.samples()) {
      const double r = std::round(x);
      if (r != x || r < rec.adc.min_code() || r > rec.adc.max_code()) {
        throw Error(Errc::MalformedDocument, file + ": code out of range");
      }
      codes.push_back(static_cast<std::int32_t>(r));
    }
    rec.channels.push_back(std::move(codes));
    rec.clipped.push_back(ch.value("clipped", std::size_t{0}));
  }
  return rec;
}

SensorModel sensor_from_json(std::string_view text) {
  return detail::sensor_from(detail::parse_json(text, "sensor"), "");
}

AdcModel adc_from_json(std::string_view text) {
  return detail::adc_from(detail::parse_json(text, "adc"), "");
}

std::string sensor_to_json(const SensorModel& sensor) {
  return detail::to_json(sensor).dump(2) + "\n";
}

std::string adc_to_json(const AdcModel& adc) { return detail::to_json(adc).dump(2) + "\n"; }

}  // namespace vibrelab
