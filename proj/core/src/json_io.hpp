#pragma once

// nlohmann-backed conversions shared by the core translation units. Kept out
// of the public headers so consumers of the installed library never see json.hpp.

#include <json.hpp>
#include <string>
#include <string_view>

#include "vibrelab/daq.hpp"
#include "vibrelab/error.hpp"
#include "vibrelab/synth.hpp"

namespace vibrelab::detail {

using nlohmann::json;

/// Parses text, mapping parse errors to MalformedDocument with line/column.
json parse_json(std::string_view text, std::string_view source_name);

// Field readers raising InvalidParams with a JSON-pointer style location.
double get_number(const json& obj, const char* key, const std::string& where);
double get_number_or(const json& obj, const char* key, double fallback, const std::string& where);
std::string get_string_or(const json& obj, const char* key, std::string fallback,
                          const std::string& where);
bool get_bool_or(const json& obj, const char* key, bool fallback, const std::string& where);
const json& get_object(const json& obj, const char* key, const std::string& where);

VibrationModel model_from(const json& j, const std::string& where);
json to_json(const VibrationModel& model);

SensorModel sensor_from(const json& j, const std::string& where);
json to_json(const SensorModel& sensor);

AdcModel adc_from(const json& j, const std::string& where);
json to_json(const AdcModel& adc);

}  // namespace vibrelab::detail
