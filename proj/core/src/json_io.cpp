#include "json_io.hpp"

#include <algorithm>
#include <cmath>

namespace vibrelab::detail {

namespace {

std::string at(const std::string& where, const char* key) { return where + "/" + key; }

}  // namespace

json parse_json(std::string_view text, std::string_view source_name) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points one past the offending character.
    const std::size_t offset = e.byte > 0 ? std::min<std::size_t>(e.byte - 1, text.size()) : 0;
    const std::string_view head = text.substr(0, offset);
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(head.begin(), head.end(), '\n'));
    const auto nl = head.rfind('\n');
    const std::size_t column = nl == std::string_view::npos ? offset + 1 : offset - nl;
    throw Error(Errc::MalformedDocument, std::string(source_name) + ": line " +
                                             std::to_string(line) + ", column " +
                                             std::to_string(column) + ": " + e.what());
  }
}

double get_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(Errc::InvalidParams, at(where, key) + ": required number missing");
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) throw Error(Errc::InvalidParams, at(where, key) + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw Error(Errc::InvalidParams, at(where, key) + ": not finite");
  return x;
}

double get_number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return get_number(obj, key, where);
}

std::string get_string_or(const json& obj, const char* key, std::string fallback,
                          const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw Error(Errc::InvalidParams, at(where, key) + ": expected a string");
  return v.get<std::string>();
}

bool get_bool_or(const json& obj, const char* key, bool fallback, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) throw Error(Errc::InvalidParams, at(where, key) + ": expected a boolean");
  return v.get<bool>();
}

const json& get_object(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_object()) {
    throw Error(Errc::InvalidParams, at(where, key) + ": expected an object");
  }
  return obj.at(key);
}

VibrationModel model_from(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(Errc::InvalidParams, where + ": model must be an object");
  VibrationModel model;
  model.label = get_string_or(j, "label", "", where);
  if (!j.contains("modes") || !j.at("modes").is_array()) {
    throw Error(Errc::InvalidParams, at(where, "modes") + ": expected an array");
  }
  const auto& modes = j.at("modes");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::string mw = at(where, "modes") + "/" + std::to_string(i);
    ModalComponent m;
    m.amplitude_D = get_number(modes[i], "amplitude_D", mw);
    m.frequency_hz = get_number(modes[i], "frequency_hz", mw);
    m.phase_rad = get_number_or(modes[i], "phase_rad", 0.0, mw);
    m.damping_ratio = get_number_or(modes[i], "damping_ratio", 0.0, mw);
    model.modes.push_back(m);
  }
  validate(model);
  return model;
}

json to_json(const VibrationModel& model) {
  json modes = json::array();
  for (const auto& m : model.modes) {
    modes.push_back({{"amplitude_D", m.amplitude_D},
                     {"frequency_hz", m.frequency_hz},
                     {"phase_rad", m.phase_rad},
                     {"damping_ratio", m.damping_ratio}});
  }
  return {{"label", model.label}, {"modes", modes}};
}

SensorModel sensor_from(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(Errc::InvalidParams, where + ": sensor must be an object");
  SensorModel s;
  s.sensitivity_v_per_ms2 = get_number(j, "sensitivity_v_per_ms2", where);
  s.seismic_mass_kg = get_number_or(j, "seismic_mass_kg", s.seismic_mass_kg, where);
  s.noise_rms_v = get_number_or(j, "noise_rms_v", s.noise_rms_v, where);
  const double axes = get_number_or(j, "axes", 1.0, where);
  if (axes != std::floor(axes)) throw Error(Errc::InvalidSensor, "axes must be an integer");
  s.axes = static_cast<int>(axes);
  if (j.contains("axis_gains")) {
    const auto& g = j.at("axis_gains");
    if (!g.is_array() || g.size() != 3) {
      throw Error(Errc::InvalidParams, at(where, "axis_gains") + ": expected 3 numbers");
    }
    for (std::size_t i = 0; i < 3; ++i) {
      if (!g[i].is_number()) {
        throw Error(Errc::InvalidParams, at(where, "axis_gains") + ": expected 3 numbers");
      }
      s.axis_gains[i] = g[i].get<double>();
    }
  }
  validate(s);
  return s;
}

json to_json(const SensorModel& s) {
  return {{"sensitivity_v_per_ms2", s.sensitivity_v_per_ms2},
          {"seismic_mass_kg", s.seismic_mass_kg},
          {"noise_rms_v", s.noise_rms_v},
          {"axes", s.axes},
          {"axis_gains", s.axis_gains}};
}

AdcModel adc_from(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(Errc::InvalidParams, where + ": adc must be an object");
  AdcModel a;
  const double bits = get_number(j, "bits", where);
  if (bits != std::floor(bits) || bits < 8 || bits > 24) {
    throw Error(Errc::InvalidAdc, "bits in [8,24] required, got " + j.at("bits").dump());
  }
  a.bits = static_cast<int>(bits);
  a.full_scale_v = get_number(j, "full_scale_v", where);
  a.sample_rate_hz = get_number(j, "sample_rate_hz", where);
  validate(a);
  return a;
}

json to_json(const AdcModel& a) {
  return {{"bits", a.bits}, {"full_scale_v", a.full_scale_v}, {"sample_rate_hz", a.sample_rate_hz}};
}

}  // namespace vibrelab::detail
