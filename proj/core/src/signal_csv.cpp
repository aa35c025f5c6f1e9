#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "vibrelab/error.hpp"
#include "vibrelab/signal.hpp"

namespace vibrelab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::string format_sci(double value) {
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, 8);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view text, double& value) noexcept {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  return res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

void write_signal_csv(std::ostream& out, const Signal& signal) {
  out << "# sample_rate_hz=" << format_sci(signal.sample_rate_hz()) << '\n'
      << "# unit=" << to_string(signal.unit()) << '\n'
      << "# label=" << signal.label() << '\n'
      << "# start_time_s=" << format_sci(signal.start_time_s()) << '\n';
  if (signal.unit() == Unit::adc_code) {
    for (double x : signal.samples()) out << static_cast<long long>(std::llround(x)) << '\n';
  } else {
    for (double x : signal.samples()) out << format_sci(x) << '\n';
  }
}

void write_signal_csv(const std::string& path, const Signal& signal) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
  write_signal_csv(out, signal);
  if (!out) throw Error(Errc::IoError, "write to '" + path + "' failed");
}

Signal read_signal_csv(std::istream& in, std::string_view source_name) {
  const std::string where(source_name);
  double rate = 0.0;
  bool have_rate = false;
  double start = 0.0;
  Unit unit = Unit::dimensionless;
  std::string label;
  std::vector<double> samples;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto at = [&] { return where + ":" + std::to_string(lineno); };
    if (body.front() == '#') {
      const std::string_view header = trim(body.substr(1));
      const auto eq = header.find('=');
      if (eq == std::string_view::npos) continue;
      const std::string_view key = trim(header.substr(0, eq));
      const std::string_view value = header.substr(eq + 1);
      if (key == "sample_rate_hz") {
        if (!parse_double(value, rate)) {
          throw Error(Errc::MalformedDocument, at() + ": bad sample_rate_hz");
        }
        have_rate = true;
      } else if (key == "start_time_s") {
        if (!parse_double(value, start)) {
          throw Error(Errc::MalformedDocument, at() + ": bad start_time_s");
        }
      } else if (key == "unit") {
        unit = unit_from_string(trim(value));
      } else if (key == "label") {
        label = std::string(trim(value));
      }
      continue;
    }
    double x = 0.0;
    if (!parse_double(body, x)) {
      throw Error(Errc::MalformedDocument, at() + ": not a number: '" + std::string(body) + "'");
    }
    samples.push_back(x);
  }
  if (!have_rate) throw Error(Errc::MalformedDocument, where + ": missing sample_rate_hz header");
  if (samples.empty()) throw Error(Errc::MalformedDocument, where + ": no samples");
  return Signal(rate, std::move(samples), unit, std::move(label), start);
}

Signal read_signal_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::FileNotFound, "cannot open '" + path + "'");
  return read_signal_csv(in, path);
}

}  // namespace vibrelab
