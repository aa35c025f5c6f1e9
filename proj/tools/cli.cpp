#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "vibrelab/vibrelab.hpp"

namespace vibrelab::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError {
  std::string message;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::FileNotFound, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Flag value, else $VIBRELAB_OUT (optionally joined with a leaf), else a usage error.
std::string resolve_out(const std::string& flag_value, const std::string& flag_name,
                        const std::string& leaf = {}) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("VIBRELAB_OUT"); env && *env) {
    return leaf.empty() ? std::string(env) : (fs::path(env) / leaf).string();
  }
  throw UsageError{flag_name + " is required when VIBRELAB_OUT is unset"};
}

void ensure_writable_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(Errc::IoError, "output directory '" + dir + "' cannot be created");
  }
  const fs::path probe = fs::path(dir) / ".vibrelab_write_probe";
  {
    std::ofstream out(probe, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "output directory '" + dir + "' is not writable");
  }
  fs::remove(probe, ec);
}

void ensure_writable_file(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) ensure_writable_dir(parent.string());
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(Errc::IoError, "cannot write '" + path + "'");
}

std::optional<Quantity> quantity_from(const std::string& s) {
  if (s == "disp") return Quantity::displacement;
  if (s == "vel") return Quantity::velocity;
  if (s == "acc") return Quantity::acceleration;
  return std::nullopt;
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

void print_stats(std::ostream& out, const Signal& s) {
  const auto st = stats(s);
  out << "samples=" << s.size() << '\n'
      << "sample_rate_hz=" << format_sci(s.sample_rate_hz()) << '\n'
      << "unit=" << to_string(s.unit()) << '\n'
      << "peak=" << format_sci(st.peak) << '\n'
      << "peak_to_peak=" << format_sci(st.peak_to_peak) << '\n'
      << "rms=" << format_sci(st.rms) << '\n'
      << "mean=" << format_sci(st.mean) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"vibrelab: vibration acquisition simulation and analysis"};
  app.require_subcommand(1);
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "Increase verbosity (up to -vv)");

  // synth
  auto* synth = app.add_subcommand("synth", "Sample displacement, velocity or acceleration of a model");
  std::string synth_model;
  double synth_rate = 0.0;
  double synth_duration = 0.0;
  std::string synth_quantity = "disp";
  std::string synth_out;
  synth->add_option("model", synth_model, "Vibration model JSON")->required();
  synth->add_option("--rate", synth_rate, "Sample rate [Hz]")->required();
  synth->add_option("--duration", synth_duration, "Duration [s]")->required();
  synth->add_option("--quantity", synth_quantity, "disp | vel | acc")
      ->check(CLI::IsMember({"disp", "vel", "acc"}));
  synth->add_option("--out", synth_out, "Output CSV (default: $VIBRELAB_OUT/synth_<q>.csv)");

  // acquire
  auto* acq = app.add_subcommand("acquire", "Simulate sensor and ADC, write an acquisition record");
  std::string acq_model, acq_sensor, acq_adc, acq_out;
  double acq_duration = 0.0;
  std::uint64_t acq_seed = 0;
  acq->add_option("model", acq_model, "Vibration model JSON")->required();
  acq->add_option("sensor", acq_sensor, "Sensor model JSON")->required();
  acq->add_option("adc", acq_adc, "ADC model JSON")->required();
  acq->add_option("--duration", acq_duration, "Duration [s]")->required();
  acq->add_option("--seed", acq_seed, "Noise seed");
  acq->add_option("--out-dir", acq_out, "Record directory (default: $VIBRELAB_OUT/record)");

  // analyze
  auto* ana = app.add_subcommand("analyze", "Statistics and spectrum of a signal CSV");
  std::string ana_csv, ana_out;
  bool ana_fft = false;
  bool ana_stats = false;
  std::string ana_window = "hann";
  std::string ana_scaling = "amplitude";
  ana->add_option("signal", ana_csv, "Signal CSV")->required();
  ana->add_flag("--fft", ana_fft, "Spectrum and dominant frequency");
  ana->add_flag("--stats", ana_stats, "Peak, peak-to-peak, RMS, mean");
  ana->add_option("--window", ana_window, "hann | rectangular")
      ->check(CLI::IsMember({"hann", "rectangular"}));
  ana->add_option("--scaling", ana_scaling, "amplitude | power")
      ->check(CLI::IsMember({"amplitude", "power"}));
  ana->add_option("--out-dir", ana_out, "Write spectrum CSV/SVG here");

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "Run a virtual-instrument pipeline");
  std::string pipe_json, pipe_out;
  pipe->add_option("pipeline", pipe_json, "Pipeline JSON")->required();
  pipe->add_option("--out-dir", pipe_out, "Report directory (default: $VIBRELAB_OUT/<name>)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: UsageError: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }
  verbosity = std::min(verbosity, 2);
  std::ostream& log = err;

  try {
    if (*synth) {
      const auto q = quantity_from(synth_quantity).value();
      const std::string path =
          resolve_out(synth_out, "--out", "synth_" + synth_quantity + ".csv");
      ensure_writable_file(path);
      const auto model = model_from_json(read_text(synth_model));
      const Signal s = synthesize(model, q, synth_rate, synth_duration);
      write_signal_csv(path, s);
      if (verbosity > 0) log << "wrote " << s.size() << " samples to " << path << '\n';
      return kExitOk;
    }

    if (*acq) {
      const std::string dir = resolve_out(acq_out, "--out-dir", "record");
      ensure_writable_dir(dir);
      const auto model = model_from_json(read_text(acq_model));
      const auto sensor = sensor_from_json(read_text(acq_sensor));
      const auto adc = adc_from_json(read_text(acq_adc));
      const auto rec = acquire(model, sensor, adc, acq_duration, acq_seed);
      write_record(dir, rec);
      out << "channels=" << rec.channel_count() << '\n'
          << "samples=" << rec.channels.front().size() << '\n'
          << "lsb_v=" << format_sci(rec.adc.lsb()) << '\n';
      for (std::size_t c = 0; c < rec.clipped.size(); ++c) {
        out << "clipped_" << c << '=' << rec.clipped[c] << '\n';
      }
      if (verbosity > 0) log << "wrote record to " << dir << '\n';
      return kExitOk;
    }

    if (*ana) {
      if (!ana_out.empty()) ensure_writable_dir(ana_out);
      const Signal s = read_signal_csv(ana_csv);
      const bool want_stats = ana_stats || !ana_fft;
      if (want_stats) print_stats(out, s);
      if (ana_fft) {
        const auto spec = fft_spectrum(s, window_from_string(ana_window).value(),
                                       scaling_from_string(ana_scaling).value());
        const auto peak = dominant_frequency(spec, true);
        out << "bin_width_hz=" << format_sci(spec.bin_width_hz) << '\n'
            << "dominant_frequency_hz=" << format_sci(peak.frequency_hz) << '\n'
            << "dominant_magnitude=" << format_sci(peak.magnitude) << '\n'
            << "dominant frequency: " << fixed3(peak.frequency_hz) << " Hz\n";
        if (!ana_out.empty()) {
          write_spectrum_csv((fs::path(ana_out) / "spectrum.csv").string(), spec);
          write_stem_chart((fs::path(ana_out) / "spectrum.svg").string(), spec, s.label());
        }
      }
      return kExitOk;
    }

    if (*pipe) {
      const auto spec = load_pipeline(pipe_json);
      const std::string dir = resolve_out(pipe_out, "--out-dir", spec.name);
      ensure_writable_dir(dir);
      const auto report = run_pipeline(spec);
      const auto files = write_report(report, dir);
      for (const auto& t : report.taps) {
        out << "tap " << t.label << ": peak=" << format_sci(t.stats.peak)
            << " rms=" << format_sci(t.stats.rms);
        if (t.dominant) out << " dominant_frequency_hz=" << format_sci(t.dominant->frequency_hz);
        out << '\n';
      }
      if (verbosity > 0) {
        for (const auto& e : report.log) {
          log << "block " << e.block << " " << e.op << ": " << e.elapsed_ms << " ms\n";
        }
      }
      if (verbosity > 1) {
        for (const auto& f : files) log << "wrote " << (fs::path(dir) / f).string() << '\n';
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: UsageError: " << e.message << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: IoError: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace vibrelab::cli
