#include "vibrelab/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json_io.hpp"
#include "vibrelab/error.hpp"

namespace vibrelab {

namespace fs = std::filesystem;
using detail::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::string_view kBlockNames[] = {
    "reconstruct_volts", "to_acceleration", "detrend", "filter", "integrate",
    "differentiate", "stats", "fft", "dominant_frequency", "estimate_damping"};

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = key == "op";
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw Error(Errc::InvalidParams, where + ": unknown parameter '" + key + "'");
  }
}

std::uint64_t get_seed(const json& obj, const std::string& where) {
  if (!obj.contains("seed")) return 0;
  const auto& v = obj.at("seed");
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw Error(Errc::InvalidParams, where + "/seed: expected a non-negative integer");
}

std::size_t get_index(const json& obj, const char* key, const std::string& where) {
  const double v = detail::get_number_or(obj, key, 0.0, where);
  if (v < 0.0 || v != std::floor(v)) {
    throw Error(Errc::InvalidParams, where + "/" + key + ": expected a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

Source parse_source(const json& j, const std::string& base_dir) {
  const std::string where = "/source";
  const std::string type = detail::get_string_or(j, "type", "", where);
  if (type == "synth") {
    SynthSource s;
    s.model = detail::model_from(detail::get_object(j, "model", where), where + "/model");
    s.sensor = detail::sensor_from(detail::get_object(j, "sensor", where), where + "/sensor");
    s.adc = detail::adc_from(detail::get_object(j, "adc", where), where + "/adc");
    s.duration_s = detail::get_number(j, "duration_s", where);
    if (!(s.duration_s > 0.0)) {
      throw Error(Errc::NonPositiveDuration, where + "/duration_s must be > 0");
    }
    s.seed = get_seed(j, where);
    s.channel = get_index(j, "channel", where);
    if (s.channel >= static_cast<std::size_t>(s.sensor.axes)) {
      throw Error(Errc::InvalidParams, where + "/channel: sensor has " +
                                           std::to_string(s.sensor.axes) + " axes");
    }
    return s;
  }
  if (type == "file") {
    FileSource f;
    const std::string path = detail::get_string_or(j, "path", "", where);
    if (path.empty()) throw Error(Errc::InvalidParams, where + "/path: required");
    const fs::path p(path);
    f.path = p.is_absolute() ? path : (fs::path(base_dir) / p).lexically_normal().string();
    f.channel = get_index(j, "channel", where);
    return f;
  }
  throw Error(Errc::InvalidParams, where + "/type: expected \"synth\" or \"file\"");
}

Block parse_block(const json& j, std::size_t index, double rate_hz) {
  const std::string where = "/blocks/" + std::to_string(index);
  if (!j.is_object()) throw Error(Errc::InvalidParams, where + ": block must be an object");
  const std::string op = detail::get_string_or(j, "op", "", where);
  if (op.empty()) throw Error(Errc::InvalidParams, where + "/op: required");

  if (op == "reconstruct_volts") {
    reject_unknown_keys(j, {"adc"}, where);
    block::ReconstructVolts b;
    if (j.contains("adc")) b.adc = detail::adc_from(j.at("adc"), where + "/adc");
    return b;
  }
  if (op == "to_acceleration") {
    reject_unknown_keys(j, {"sensitivity_v_per_ms2"}, where);
    block::ToAcceleration b;
    b.sensitivity_v_per_ms2 = detail::get_number(j, "sensitivity_v_per_ms2", where);
    if (!(b.sensitivity_v_per_ms2 > 0.0)) {
      throw Error(Errc::InvalidParams, where + "/sensitivity_v_per_ms2: must be > 0");
    }
    return b;
  }
  if (op == "detrend") {
    reject_unknown_keys(j, {"linear"}, where);
    return block::Detrend{detail::get_bool_or(j, "linear", false, where)};
  }
  if (op == "filter") {
    reject_unknown_keys(j, {"kind", "cutoff_hz", "cutoff_high_hz", "taps"}, where);
    FilterSpec spec;
    const std::string kind = detail::get_string_or(j, "kind", "lowpass", where);
    const auto k = filter_kind_from_string(kind);
    if (!k) throw Error(Errc::InvalidParams, where + "/kind: unknown filter kind '" + kind + "'");
    spec.kind = *k;
    spec.cutoff_hz = detail::get_number(j, "cutoff_hz", where);
    if (spec.kind == FilterKind::bandpass) {
      spec.cutoff_high_hz = detail::get_number(j, "cutoff_high_hz", where);
    }
    const double taps = detail::get_number_or(j, "taps", 101.0, where);
    if (taps != std::floor(taps) || taps > 1e6) {
      throw Error(Errc::InvalidParams, where + "/taps: expected an odd integer");
    }
    spec.taps = static_cast<int>(taps);
    try {
      validate(spec, rate_hz);
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.detail());
    }
    return block::Filter{spec};
  }
  if (op == "integrate") {
    reject_unknown_keys(j, {"remove_mean", "highpass_hz"}, where);
    block::Integrate b;
    b.options.remove_mean = detail::get_bool_or(j, "remove_mean", true, where);
    if (j.contains("highpass_hz") && !j.at("highpass_hz").is_null()) {
      const double hp = detail::get_number(j, "highpass_hz", where);
      if (!(hp > 0.0) || hp >= 0.5 * rate_hz) {
        throw Error(Errc::InvalidParams, where + "/highpass_hz: must be in (0, Nyquist)");
      }
      b.options.highpass_hz = hp;
    }
    return b;
  }
  if (op == "differentiate") {
    reject_unknown_keys(j, {}, where);
    return block::Differentiate{};
  }
  if (op == "stats") {
    reject_unknown_keys(j, {}, where);
    return block::Stats{};
  }
  if (op == "fft") {
    reject_unknown_keys(j, {"window", "scaling"}, where);
    block::Fft b;
    const std::string w = detail::get_string_or(j, "window", "hann", where);
    const std::string s = detail::get_string_or(j, "scaling", "amplitude", where);
    const auto window = window_from_string(w);
    const auto scaling = scaling_from_string(s);
    if (!window) throw Error(Errc::InvalidParams, where + "/window: unknown window '" + w + "'");
    if (!scaling) throw Error(Errc::InvalidParams, where + "/scaling: unknown scaling '" + s + "'");
    b.window = *window;
    b.scaling = *scaling;
    return b;
  }
  if (op == "dominant_frequency") {
    reject_unknown_keys(j, {"exclude_dc"}, where);
    return block::DominantFrequency{detail::get_bool_or(j, "exclude_dc", true, where)};
  }
  if (op == "estimate_damping") {
    reject_unknown_keys(j, {}, where);
    return block::EstimateDamping{};
  }
  throw Error(Errc::UnknownBlock, op);
}

bool filename_safe(const std::string& label) {
  if (label.empty()) return false;
  for (char c : label) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

struct ChainState {
  Signal signal;
  std::optional<AdcModel> adc;
  std::optional<Spectrum> spectrum;
};

Signal codes_to_volts(const Signal& codes, const AdcModel& adc) {
  if (codes.unit() != Unit::adc_code) {
    throw Error(Errc::UnitMismatch, "reconstruct_volts expects adc_code, got " +
                                        std::string(to_string(codes.unit())));
  }
  AcquisitionRecord rec;
  rec.adc = adc;
  rec.adc.sample_rate_hz = codes.sample_rate_hz();
  rec.start_time_s = codes.start_time_s();
  std::vector<std::int32_t> ch;
  ch.reserve(codes.size());
  for (double x : codes.samples()) {
    if (x != std::round(x) || x < adc.min_code() || x > adc.max_code()) {
      throw Error(Errc::InvalidParams, "sample " + format_sci(x) + " is not a valid code");
    }
    ch.push_back(static_cast<std::int32_t>(x));
  }
  rec.channels.push_back(std::move(ch));
  rec.clipped.push_back(0);
  const Signal v = reconstruct(rec, 0);
  return v.derive({v.samples().begin(), v.samples().end()}, Unit::volt, codes.label());
}

const AdcModel& adc_for(const block::ReconstructVolts& b, const ChainState& st) {
  if (b.adc) return *b.adc;
  if (st.adc) return *st.adc;
  throw Error(Errc::InvalidParams, "no converter known for reconstruct_volts; give \"adc\"");
}

void execute(const Block& blk, ChainState& st, Measurement& m) {
  std::visit(
      overloaded{
          [&](const block::ReconstructVolts& b) {
            st.signal = codes_to_volts(st.signal, adc_for(b, st));
          },
          [&](const block::ToAcceleration& b) {
            st.signal = to_acceleration(st.signal, b.sensitivity_v_per_ms2);
          },
          [&](const block::Detrend& b) { st.signal = detrend(st.signal, b.linear); },
          [&](const block::Filter& b) { st.signal = filter(st.signal, b.spec); },
          [&](const block::Integrate& b) { st.signal = integrate(st.signal, b.options); },
          [&](const block::Differentiate&) { st.signal = differentiate(st.signal); },
          [&](const block::Stats&) {
            const auto s = stats(st.signal);
            m.values = {{"peak", s.peak}, {"peak_to_peak", s.peak_to_peak},
                        {"rms", s.rms}, {"mean", s.mean}};
          },
          [&](const block::Fft& b) {
            st.spectrum = fft_spectrum(st.signal, b.window, b.scaling);
            m.spectrum = st.spectrum;
          },
          [&](const block::DominantFrequency& b) {
            if (!st.spectrum) throw Error(Errc::EmptySpectrum, "no fft block ran before this one");
            const auto p = dominant_frequency(*st.spectrum, b.exclude_dc);
            m.values = {{"frequency_hz", p.frequency_hz}, {"magnitude", p.magnitude}};
          },
          [&](const block::EstimateDamping&) {
            m.values = {{"damping_ratio", estimate_damping(st.signal)}};
          },
      },
      blk);
}

std::size_t skip_samples(const Tap& tap, const Signal& s) {
  const auto skip = static_cast<std::size_t>(std::floor(tap.skip_s * s.sample_rate_hz() + 1e-9));
  if (skip >= s.size()) {
    throw Error(Errc::InvalidParams, "tap '" + tap.label + "': skip_s leaves no samples");
  }
  return skip;
}

const block::Fft* first_fft(const PipelineSpec& spec) {
  for (const auto& b : spec.blocks) {
    if (const auto* f = std::get_if<block::Fft>(&b)) return f;
  }
  return nullptr;
}

TapResult make_tap(const Tap& tap, const Signal& s, const block::Fft* fft) {
  const std::size_t skip = skip_samples(tap, s);
  const auto view = s.samples().subspan(skip);
  TapResult r{tap.label, tap.block, tap.skip_s, s, stats(view), std::nullopt};
  if (fft && view.size() >= 2) {
    const Signal trimmed(s.sample_rate_hz(), {view.begin(), view.end()}, s.unit(), s.label(),
                         s.time_at(skip));
    r.dominant = dominant_frequency(fft_spectrum(trimmed, fft->window, fft->scaling), true);
  }
  return r;
}

// Hand-written composition used as the reference side of compose_equivalence.
std::vector<Signal> manual_chain(const PipelineSpec& spec, const SourceData& input) {
  std::vector<Signal> stages{input.signal};
  Signal x = input.signal;
  for (const auto& blk : spec.blocks) {
    if (const auto* r = std::get_if<block::ReconstructVolts>(&blk)) {
      const AdcModel adc = r->adc ? *r->adc : input.adc.value();
      AcquisitionRecord rec;
      rec.adc = adc;
      rec.adc.sample_rate_hz = x.sample_rate_hz();
      rec.start_time_s = x.start_time_s();
      rec.channels.emplace_back(x.samples().begin(), x.samples().end());
      x = reconstruct(rec, 0);
    } else if (const auto* a = std::get_if<block::ToAcceleration>(&blk)) {
      x = to_acceleration(x, a->sensitivity_v_per_ms2);
    } else if (const auto* d = std::get_if<block::Detrend>(&blk)) {
      x = detrend(x, d->linear);
    } else if (const auto* f = std::get_if<block::Filter>(&blk)) {
      x = filter(x, f->spec);
    } else if (const auto* i = std::get_if<block::Integrate>(&blk)) {
      x = integrate(x, i->options);
    } else if (std::holds_alternative<block::Differentiate>(blk)) {
      x = differentiate(x);
    }
    // stats, fft, dominant_frequency and estimate_damping leave the signal as is
    stages.push_back(x);
  }
  return stages;
}

}  // namespace

std::string_view block_name(const Block& b) noexcept { return kBlockNames[b.index()]; }

PipelineSpec parse_pipeline(std::string_view text, const std::string& base_dir) {
  const json doc = detail::parse_json(text, "pipeline");
  if (!doc.is_object()) throw Error(Errc::MalformedDocument, "pipeline: top level must be an object");

  PipelineSpec spec;
  spec.name = detail::get_string_or(doc, "name", "pipeline", "");
  spec.description = detail::get_string_or(doc, "description", "", "");
  spec.source = parse_source(detail::get_object(doc, "source", ""), base_dir);

  // The chain never resamples, so the source rate bounds every cutoff. A file
  // source is only known at run time; its filters are checked then.
  double rate = std::numeric_limits<double>::infinity();
  if (const auto* s = std::get_if<SynthSource>(&spec.source)) rate = s->adc.sample_rate_hz;

  if (doc.contains("blocks")) {
    const auto& blocks = doc.at("blocks");
    if (!blocks.is_array()) throw Error(Errc::InvalidParams, "/blocks: expected an array");
    bool have_fft = false;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      spec.blocks.push_back(parse_block(blocks[i], i, rate));
      if (std::holds_alternative<block::Fft>(spec.blocks.back())) have_fft = true;
      if (std::holds_alternative<block::DominantFrequency>(spec.blocks.back()) && !have_fft) {
        throw Error(Errc::InvalidParams,
                    "/blocks/" + std::to_string(i) + ": dominant_frequency needs an earlier fft");
      }
    }
  }

  if (doc.contains("outputs")) {
    const auto& outs = doc.at("outputs");
    if (!outs.is_array()) throw Error(Errc::InvalidParams, "/outputs: expected an array");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < outs.size(); ++i) {
      const std::string where = "/outputs/" + std::to_string(i);
      Tap tap;
      const double blk = detail::get_number(outs[i], "block", where);
      if (blk != std::floor(blk) || blk < -1 || blk >= static_cast<double>(spec.blocks.size())) {
        throw Error(Errc::InvalidParams, where + "/block: must index a block or be -1");
      }
      tap.block = static_cast<int>(blk);
      tap.label = detail::get_string_or(outs[i], "label", "", where);
      if (!filename_safe(tap.label)) {
        throw Error(Errc::InvalidParams, where + "/label: use [A-Za-z0-9_-]+");
      }
      if (!seen.insert(tap.label).second) {
        throw Error(Errc::InvalidParams, where + "/label: duplicate tap '" + tap.label + "'");
      }
      tap.skip_s = detail::get_number_or(outs[i], "skip_s", 0.0, where);
      if (tap.skip_s < 0.0) throw Error(Errc::InvalidParams, where + "/skip_s: must be >= 0");
      spec.taps.push_back(tap);
    }
  }
  return spec;
}

PipelineSpec load_pipeline(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::FileNotFound, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string dir = fs::path(path).parent_path().string();
  return parse_pipeline(buf.str(), dir.empty() ? "." : dir);
}

SourceData resolve_source(const PipelineSpec& spec) {
  return std::visit(
      overloaded{
          [](const SynthSource& s) -> SourceData {
            const auto rec = acquire(s.model, s.sensor, s.adc, s.duration_s, s.seed);
            return {reconstruct(rec, s.channel), rec.adc};
          },
          [](const FileSource& f) -> SourceData {
            std::error_code ec;
            if (!fs::exists(f.path, ec)) throw Error(Errc::SourceNotFound, f.path);
            if (fs::is_directory(f.path, ec)) {
              const auto rec = read_record(f.path);
              return {channel_codes(rec, f.channel), rec.adc};
            }
            if (f.channel != 0) {
              throw Error(Errc::ChannelOutOfRange, "a CSV source has a single channel");
            }
            return {read_signal_csv(f.path), std::nullopt};
          },
      },
      spec.source);
}

FrontPanelReport run_pipeline(const PipelineSpec& spec) {
  return run_pipeline(spec, resolve_source(spec));
}

FrontPanelReport run_pipeline(const PipelineSpec& spec, const SourceData& input) {
  using clock = std::chrono::steady_clock;
  FrontPanelReport report;
  report.name = spec.name;

  ChainState st{input.signal, input.adc, std::nullopt};
  std::vector<Signal> stages{input.signal};
  for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
    const auto& blk = spec.blocks[i];
    Measurement m;
    m.block = i;
    m.op = std::string(block_name(blk));
    const auto t0 = clock::now();
    try {
      execute(blk, st, m);
    } catch (const Error& e) {
      throw Error(e.code(), "block " + std::to_string(i) + " (" + m.op + "): " + e.detail());
    }
    const std::chrono::duration<double, std::milli> elapsed = clock::now() - t0;
    report.log.push_back({i, m.op, elapsed.count()});
    if (!m.values.empty() || m.spectrum) report.measurements.push_back(std::move(m));
    stages.push_back(st.signal);
  }

  const auto* fft = first_fft(spec);
  for (const auto& tap : spec.taps) {
    report.taps.push_back(make_tap(tap, stages[static_cast<std::size_t>(tap.block + 1)], fft));
  }
  return report;
}

bool compose_equivalence(const PipelineSpec& spec) {
  return compose_equivalence(spec, resolve_source(spec));
}

bool compose_equivalence(const PipelineSpec& spec, const SourceData& input) {
  const auto report = run_pipeline(spec, input);
  const auto stages = manual_chain(spec, input);
  for (const auto& tap : report.taps) {
    const Signal& expected = stages[static_cast<std::size_t>(tap.block + 1)];
    if (expected.size() != tap.signal.size() || expected.unit() != tap.signal.unit()) return false;
    for (std::size_t n = 0; n < expected.size(); ++n) {
      if (ulp_distance(expected[n], tap.signal[n]) > 4) return false;
    }
  }
  return true;
}

}  // namespace vibrelab
