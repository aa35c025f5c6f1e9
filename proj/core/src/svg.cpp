#include "vibrelab/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <vector>

#include "vibrelab/error.hpp"

namespace vibrelab {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 360.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 44.0;
constexpr std::size_t kColumns = 720;

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;

  double px(double x) const {
    const double span = x1 > x0 ? x1 - x0 : 1.0;
    return kLeft + (x - x0) / span * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    const double span = y1 > y0 ? y1 - y0 : 1.0;
    return kHeight - kBottom - (y - y0) / span * (kHeight - kTop - kBottom);
  }
};

void open_chart(std::ostream& out, const std::string& title, const Frame& f,
                const std::string& x_label, const std::string& y_label) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(kWidth)
      << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' '
      << num(kHeight) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << escape(title) << "</text>\n";
  // axes box
  out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
      << num(kWidth - kLeft - kRight) << "\" height=\"" << num(kHeight - kTop - kBottom)
      << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  if (f.y0 < 0.0 && f.y1 > 0.0) {
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(f.py(0.0)) << "\" x2=\""
        << num(kWidth - kRight) << "\" y2=\"" << num(f.py(0.0))
        << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
  }
  const auto tick = [&](double x, double y, const char* anchor, double value) {
    out << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" text-anchor=\"" << anchor
        << "\" font-family=\"sans-serif\" font-size=\"10\">" << format_sci(value) << "</text>\n";
  };
  tick(kLeft - 4, f.py(f.y1) + 4, "end", f.y1);
  tick(kLeft - 4, f.py(f.y0), "end", f.y0);
  tick(kLeft, kHeight - kBottom + 14, "start", f.x0);
  tick(kWidth - kRight, kHeight - kBottom + 14, "end", f.x1);
  out << "<text x=\"" << num(kWidth / 2) << "\" y=\"" << num(kHeight - 8)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
      << escape(x_label) << "</text>\n"
      << "<text x=\"14\" y=\"" << num(kHeight / 2) << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"11\" transform=\"rotate(-90 14 "
      << num(kHeight / 2) << ")\">" << escape(y_label) << "</text>\n";
}

template <typename Writer>
void to_file(const std::string& path, Writer&& write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
  write(out);
}

}  // namespace

void write_line_chart(std::ostream& out, const Signal& signal, const std::string& title) {
  const auto s = signal.samples();
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  double y0 = *lo;
  double y1 = *hi;
  if (y1 - y0 <= 0.0) {
    y0 -= 1.0;
    y1 += 1.0;
  }
  const Frame f{signal.time_at(0), signal.time_at(s.size() - 1), y0, y1};
  open_chart(out, title, f, "time [s]", std::string(to_string(signal.unit())));

  // (time, value) vertices, at most two per pixel column.
  std::vector<std::pair<double, double>> pts;
  if (s.size() <= 2 * kColumns) {
    for (std::size_t n = 0; n < s.size(); ++n) pts.emplace_back(signal.time_at(n), s[n]);
  } else {
    for (std::size_t c = 0; c < kColumns; ++c) {
      const std::size_t a = c * s.size() / kColumns;
      const std::size_t b = (c + 1) * s.size() / kColumns;
      const auto [mn, mx] = std::minmax_element(s.begin() + static_cast<std::ptrdiff_t>(a),
                                                s.begin() + static_cast<std::ptrdiff_t>(b));
      const auto first = std::min(mn, mx);
      const auto second = std::max(mn, mx);
      pts.emplace_back(signal.time_at(static_cast<std::size_t>(first - s.begin())), *first);
      pts.emplace_back(signal.time_at(static_cast<std::size_t>(second - s.begin())), *second);
    }
  }
  out << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out << ' ';
    out << num(f.px(pts[i].first)) << ',' << num(f.py(pts[i].second));
  }
  out << "\"/>\n</svg>\n";
}

void write_line_chart(const std::string& path, const Signal& signal, const std::string& title) {
  to_file(path, [&](std::ostream& out) { write_line_chart(out, signal, title); });
}

void write_stem_chart(std::ostream& out, const Spectrum& spectrum, const std::string& title) {
  const auto& m = spectrum.magnitudes;
  double top = m.empty() ? 1.0 : *std::max_element(m.begin(), m.end());
  if (top <= 0.0) top = 1.0;
  const double f_max = spectrum.frequency(m.empty() ? 0 : m.size() - 1);
  const Frame f{0.0, f_max, 0.0, top};
  open_chart(out, title, f, "frequency [Hz]",
             std::string(to_string(spectrum.scaling)) + " (" +
                 std::string(to_string(spectrum.source_unit)) + ")");

  // Stems are merged per pixel column, keeping the tallest.
  const std::size_t columns = std::min<std::size_t>(m.size(), kColumns);
  out << "<g stroke=\"#b0412e\" stroke-width=\"1\">\n";
  for (std::size_t c = 0; c < columns; ++c) {
    const std::size_t a = c * m.size() / columns;
    const std::size_t b = std::max(a + 1, (c + 1) * m.size() / columns);
    const auto it = std::max_element(m.begin() + static_cast<std::ptrdiff_t>(a),
                                     m.begin() + static_cast<std::ptrdiff_t>(b));
    const double x = f.px(spectrum.frequency(static_cast<std::size_t>(it - m.begin())));
    out << "<line x1=\"" << num(x) << "\" y1=\"" << num(f.py(0.0)) << "\" x2=\"" << num(x)
        << "\" y2=\"" << num(f.py(*it)) << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

void write_stem_chart(const std::string& path, const Spectrum& spectrum, const std::string& title) {
  to_file(path, [&](std::ostream& out) { write_stem_chart(out, spectrum, title); });
}

}  // namespace vibrelab
