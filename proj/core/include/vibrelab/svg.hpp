#pragma once

#include <iosfwd>
#include <string>

#include "vibrelab/dsp.hpp"
#include "vibrelab/signal.hpp"

namespace vibrelab {

// Standalone SVG 1.1 charts. Write-only; output is byte-stable for a given input.

/// Time-domain polyline. Long signals are reduced to per-column min/max pairs.
void write_line_chart(std::ostream& out, const Signal& signal, const std::string& title);
void write_line_chart(const std::string& path, const Signal& signal, const std::string& title);

/// Stem plot of spectrum magnitudes against frequency.
void write_stem_chart(std::ostream& out, const Spectrum& spectrum, const std::string& title);
void write_stem_chart(const std::string& path, const Spectrum& spectrum, const std::string& title);

}  // namespace vibrelab
