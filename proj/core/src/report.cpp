#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "json_io.hpp"
#include "vibrelab/error.hpp"
#include "vibrelab/pipeline.hpp"
#include "vibrelab/svg.hpp"

namespace vibrelab {

namespace fs = std::filesystem;
using detail::json;

namespace {

std::string tap_csv(const TapResult& t) { return "tap_" + t.label + ".csv"; }
std::string tap_svg(const TapResult& t) { return "tap_" + t.label + ".svg"; }
std::string spectrum_csv(const Measurement& m) {
  return "spectrum_block" + std::to_string(m.block) + ".csv";
}
std::string spectrum_svg(const Measurement& m) {
  return "spectrum_block" + std::to_string(m.block) + ".svg";
}

json stats_json(const SignalStats& s) {
  return {{"peak", s.peak}, {"peak_to_peak", s.peak_to_peak}, {"rms", s.rms}, {"mean", s.mean}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot open '" + path.string() + "' for writing");
  out << text;
}

std::vector<std::string> manifest(const FrontPanelReport& report) {
  std::vector<std::string> files{"report.json"};
  for (const auto& t : report.taps) {
    files.push_back(tap_csv(t));
    files.push_back(tap_svg(t));
  }
  for (const auto& m : report.measurements) {
    if (m.spectrum) {
      files.push_back(spectrum_csv(m));
      files.push_back(spectrum_svg(m));
    }
  }
  return files;
}

}  // namespace

std::string report_json(const FrontPanelReport& report) {
  json taps = json::array();
  for (const auto& t : report.taps) {
    json tap = {
        {"label", t.label},
        {"block", t.block},
        {"skip_s", t.skip_s},
        {"samples", t.signal.size()},
        {"sample_rate_hz", t.signal.sample_rate_hz()},
        {"unit", std::string(to_string(t.signal.unit()))},
        {"stats", stats_json(t.stats)},
        {"csv", tap_csv(t)},
        {"svg", tap_svg(t)},
    };
    tap["dominant_frequency"] =
        t.dominant ? json{{"frequency_hz", t.dominant->frequency_hz},
                          {"magnitude", t.dominant->magnitude}}
                   : json(nullptr);
    taps.push_back(std::move(tap));
  }

  json measurements = json::array();
  for (const auto& m : report.measurements) {
    json entry = {{"block", m.block}, {"op", m.op}};
    json values = json::object();
    for (const auto& [k, v] : m.values) values[k] = v;
    entry["values"] = std::move(values);
    if (m.spectrum) {
      entry["spectrum"] = {{"bin_width_hz", m.spectrum->bin_width_hz},
                           {"bins", m.spectrum->size()},
                           {"window", std::string(to_string(m.spectrum->window))},
                           {"scaling", std::string(to_string(m.spectrum->scaling))},
                           {"csv", spectrum_csv(m)},
                           {"svg", spectrum_svg(m)}};
    }
    measurements.push_back(std::move(entry));
  }

  const json doc = {{"name", report.name},
                    {"taps", taps},
                    {"measurements", measurements},
                    {"artifacts", manifest(report)}};
  return doc.dump(2) + "\n";
}

std::vector<std::string> write_report(const FrontPanelReport& report, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create '" + dir + "': " + ec.message());
  const fs::path root(dir);

  for (const auto& t : report.taps) {
    write_signal_csv((root / tap_csv(t)).string(), t.signal);
    write_line_chart((root / tap_svg(t)).string(), t.signal, report.name + ": " + t.label);
  }
  for (const auto& m : report.measurements) {
    if (!m.spectrum) continue;
    write_spectrum_csv((root / spectrum_csv(m)).string(), *m.spectrum);
    write_stem_chart((root / spectrum_svg(m)).string(), *m.spectrum,
                     report.name + ": spectrum after block " + std::to_string(m.block));
  }
  write_text(root / "report.json", report_json(report));

  // Timing and wall-clock data live only here.
  json log = json::array();
  for (const auto& e : report.log) {
    log.push_back({{"block", e.block}, {"op", e.op}, {"elapsed_ms", e.elapsed_ms}});
  }
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  write_text(root / "execution_log.json",
             json{{"name", report.name}, {"generated_at", stamp}, {"blocks", log}}.dump(2) + "\n");

  return manifest(report);
}

}  // namespace vibrelab
