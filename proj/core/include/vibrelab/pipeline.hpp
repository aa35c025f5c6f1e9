#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "vibrelab/daq.hpp"
#include "vibrelab/dsp.hpp"
#include "vibrelab/signal.hpp"
#include "vibrelab/synth.hpp"

namespace vibrelab {

// A virtual instrument is a linear chain of processing blocks (the block
// diagram) plus display taps; running it yields a FrontPanelReport.

namespace block {

/// adc_code -> volts. Uses the converter of the source record unless one is given.
struct ReconstructVolts {
  std::optional<AdcModel> adc;
};
struct ToAcceleration {
  double sensitivity_v_per_ms2 = 1.0;
};
struct Detrend {
  bool linear = false;
};
struct Filter {
  FilterSpec spec;
};
struct Integrate {
  IntegrateOptions options;
};
struct Differentiate {};
struct Stats {};
struct Fft {
  Window window = Window::hann;
  Scaling scaling = Scaling::amplitude;
};
struct DominantFrequency {
  bool exclude_dc = true;
};
struct EstimateDamping {};

}  // namespace block

using Block = std::variant<block::ReconstructVolts, block::ToAcceleration, block::Detrend,
                           block::Filter, block::Integrate, block::Differentiate, block::Stats,
                           block::Fft, block::DominantFrequency, block::EstimateDamping>;

/// Config name of the block's operation, e.g. "to_acceleration".
std::string_view block_name(const Block& b) noexcept;

/// A signal CSV, or an acquisition record directory (then `channel` selects the axis).
struct FileSource {
  std::string path;
  std::size_t channel = 0;
};

/// Runs acquire() and hands the reconstructed voltage of `channel` to the chain.
struct SynthSource {
  VibrationModel model;
  SensorModel sensor;
  AdcModel adc;
  double duration_s = 1.0;
  std::uint64_t seed = 0;
  std::size_t channel = 0;
};

using Source = std::variant<FileSource, SynthSource>;

/// Captures the signal after block `block` (-1 is the source itself).
/// Tap statistics ignore the first skip_s seconds.
struct Tap {
  int block = -1;
  std::string label;
  double skip_s = 0.0;
};

struct PipelineSpec {
  std::string name;
  std::string description;
  Source source;
  std::vector<Block> blocks;
  std::vector<Tap> taps;
};

/// Parses and validates a pipeline document. Relative file-source paths are
/// resolved against base_dir. Errors: MalformedDocument (with line/column),
/// UnknownBlock (with the offending name), InvalidParams (with a JSON path).
PipelineSpec parse_pipeline(std::string_view text, const std::string& base_dir = ".");
PipelineSpec load_pipeline(const std::string& path);

/// The signal entering the chain, plus the converter when it is known.
struct SourceData {
  Signal signal;
  std::optional<AdcModel> adc;
};

/// Throws SourceNotFound when a file source does not exist.
SourceData resolve_source(const PipelineSpec& spec);

struct TapResult {
  std::string label;
  int block = -1;
  double skip_s = 0.0;
  Signal signal;
  SignalStats stats;
  std::optional<SpectralPeak> dominant;
};

struct Measurement {
  std::size_t block = 0;
  std::string op;
  std::vector<std::pair<std::string, double>> values;
  std::optional<Spectrum> spectrum;
};

struct LogEntry {
  std::size_t block = 0;
  std::string op;
  double elapsed_ms = 0.0;
};

struct FrontPanelReport {
  std::string name;
  std::vector<TapResult> taps;
  std::vector<Measurement> measurements;
  std::vector<LogEntry> log;
};

FrontPanelReport run_pipeline(const PipelineSpec& spec);
FrontPanelReport run_pipeline(const PipelineSpec& spec, const SourceData& input);

/// True iff every tap signal of run_pipeline is within 4 ulp of the same
/// chain composed by hand from the module operations.
bool compose_equivalence(const PipelineSpec& spec);
bool compose_equivalence(const PipelineSpec& spec, const SourceData& input);

/// report.json body: stats, dominant frequencies, measurements, artifact
/// manifest. Carries no timing, so it is byte-stable across reruns.
std::string report_json(const FrontPanelReport& report);

/// Writes report.json, execution_log.json, one CSV and SVG per tap and one
/// CSV and SVG per spectrum. Returns the artifact file names.
std::vector<std::string> write_report(const FrontPanelReport& report, const std::string& dir);

}  // namespace vibrelab
