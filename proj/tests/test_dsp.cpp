#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "support/oracles.hpp"
#include "vibrelab/dsp.hpp"
#include "vibrelab/error.hpp"
#include "vibrelab/synth.hpp"

using namespace vibrelab;

namespace {

constexpr double kPi = std::numbers::pi;

Signal sig(std::vector<double> x, double rate = 1000.0, Unit u = Unit::meter_per_s2) {
  return Signal(rate, std::move(x), u, "x");
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected vibrelab::Error");
  return Errc::IoError;
}

double db(double ratio) { return 20.0 * std::log10(ratio); }

}  // namespace

TEST_CASE("fft_spectrum") {
  SUBCASE("zeros") {
    const auto s = fft_spectrum(sig(std::vector<double>(1024, 0.0)), Window::rectangular);
    CHECK(s.size() == 513);
    for (double m : s.magnitudes) CHECK(m == 0.0);
  }
  SUBCASE("bin-centred tone, rectangular") {
    const auto s = fft_spectrum(sig(oracle::sine(1.0, 16.0, 1024.0, 1024), 1024.0),
                                Window::rectangular, Scaling::amplitude);
    CHECK(s.bin_width_hz == 1.0);
    CHECK(std::abs(s.magnitudes[16] - 1.0) <= 1e-9);
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (k != 16) CHECK(s.magnitudes[k] <= 1e-9);
    }
    // sin has phase -pi/2 against a cosine reference
    CHECK(s.phases_rad[16] == doctest::Approx(-kPi / 2).epsilon(1e-9));
  }
  SUBCASE("bin-centred tone, Hann with amplitude correction") {
    const auto s = fft_spectrum(sig(oracle::sine(0.7, 50.0, 1000.0, 1000)), Window::hann);
    CHECK(std::abs(s.magnitudes[50] - 0.7) <= 0.7e-3);
  }
  SUBCASE("odd length has no Nyquist bin") {
    const auto s = fft_spectrum(sig(oracle::gaussian(101, 1)), Window::rectangular);
    CHECK(s.size() == 51);
    CHECK(s.bin_width_hz == doctest::Approx(1000.0 / 101.0));
  }
  SUBCASE("DC and Nyquist bins are single-sided") {
    std::vector<double> x(8);
    for (std::size_t j = 0; j < 8; ++j) x[j] = 2.0 + (j % 2 ? -0.5 : 0.5);
    const auto s = fft_spectrum(sig(x, 8.0), Window::rectangular);
    CHECK(s.magnitudes[0] == doctest::Approx(2.0));
    CHECK(s.magnitudes[4] == doctest::Approx(0.5));
  }
  SUBCASE("too short") {
    CHECK(code_of([] { fft_spectrum(sig({1.0})); }) == Errc::TooShort);
  }
}

TEST_CASE("Parseval under power scaling") {
  for (std::size_t n : {64u, 1000u, 1024u, 77u}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto x = oracle::gaussian(n, seed * 31 + n);
      const auto s = fft_spectrum(sig(x), Window::rectangular, Scaling::power);
      double bins = 0.0;
      for (double p : s.magnitudes) bins += p;
      const double mean_sq = oracle::sum_squares(x) / static_cast<double>(n);
      CHECK(std::abs(bins - mean_sq) <= 1e-9 * mean_sq);
    }
  }
}

TEST_CASE("spectral linearity") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto xs = oracle::gaussian(300, seed);
    const auto ys = oracle::gaussian(300, seed + 500);
    std::vector<double> sum(300);
    for (std::size_t j = 0; j < 300; ++j) sum[j] = xs[j] + ys[j];
    const auto sx = fft_spectrum(sig(xs), Window::hann);
    const auto sy = fft_spectrum(sig(ys), Window::hann);
    const auto ss = fft_spectrum(sig(sum), Window::hann);
    for (std::size_t k = 0; k < ss.size(); ++k) {
      CHECK(ss.magnitudes[k] <= sx.magnitudes[k] + sy.magnitudes[k] + 1e-12);
      const auto px = std::polar(sx.magnitudes[k], sx.phases_rad[k]);
      const auto py = std::polar(sy.magnitudes[k], sy.phases_rad[k]);
      const auto ps = std::polar(ss.magnitudes[k], ss.phases_rad[k]);
      CHECK(std::abs(ps - (px + py)) <= 1e-9);
    }
  }
}

TEST_CASE("dominant_frequency") {
  const auto tone = fft_spectrum(sig(oracle::sine(1.0, 16.0, 1024.0, 1024), 1024.0),
                                 Window::rectangular);
  const auto p = dominant_frequency(tone);
  CHECK(p.frequency_hz == 16.0);
  CHECK(p.magnitude == doctest::Approx(1.0).epsilon(1e-9));

  const auto dc = fft_spectrum(sig(std::vector<double>(64, -3.0)), Window::rectangular);
  const auto pd = dominant_frequency(dc, false);
  CHECK(pd.frequency_hz == 0.0);
  CHECK(pd.magnitude == doctest::Approx(3.0));

  auto a = oracle::sine(1.0, 10.0, 1000.0, 1000);
  const auto b = oracle::sine(1.0, 20.0, 1000.0, 1000);
  for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
  CHECK(dominant_frequency(fft_spectrum(sig(a), Window::rectangular)).frequency_hz == 10.0);

  Spectrum only_dc;
  only_dc.bin_width_hz = 1.0;
  only_dc.magnitudes = {1.0};
  only_dc.phases_rad = {0.0};
  CHECK(code_of([&] { dominant_frequency(only_dc, true); }) == Errc::EmptySpectrum);
  CHECK(code_of([] { dominant_frequency(Spectrum{}, false); }) == Errc::EmptySpectrum);
}

TEST_CASE("spectrum CSV") {
  const auto s = fft_spectrum(sig(oracle::sine(1.0, 16.0, 64.0, 64), 64.0), Window::rectangular);
  std::ostringstream out;
  write_spectrum_csv(out, s);
  const auto text = out.str();
  CHECK(text.rfind("# bin_width_hz=1.00000000e+00\n# window=rectangular\n# scaling=amplitude\n", 0) == 0);
  CHECK(text.find("frequency_hz,magnitude,phase_rad\n") != std::string::npos);
  CHECK(text.find("\n1.60000000e+01,1.00000000e+00,") != std::string::npos);
}

TEST_CASE("FIR design") {
  const FilterSpec lp{FilterKind::lowpass, 50.0, 0.0, 101};
  const auto h = design_fir(lp, 2000.0);
  REQUIRE(h.size() == 101);
  double sum = 0.0;
  for (std::size_t n = 0; n < h.size(); ++n) {
    sum += h[n];
    CHECK(h[n] == doctest::Approx(h[h.size() - 1 - n]).epsilon(1e-12));  // linear phase
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  const auto hp = design_fir({FilterKind::highpass, 50.0, 0.0, 101}, 2000.0);
  double hp_sum = 0.0;
  for (double v : hp) hp_sum += v;
  CHECK(std::abs(hp_sum) <= 1e-12);

  CHECK(code_of([] { validate(FilterSpec{FilterKind::lowpass, 50.0, 0.0, 100}, 1000.0); }) ==
        Errc::InvalidFilter);
  CHECK(code_of([] { validate(FilterSpec{FilterKind::lowpass, 50.0, 0.0, 9}, 1000.0); }) ==
        Errc::InvalidFilter);
  CHECK(code_of([] { validate(FilterSpec{FilterKind::bandpass, 80.0, 40.0, 51}, 1000.0); }) ==
        Errc::InvalidFilter);
  CHECK(code_of([] { validate(FilterSpec{FilterKind::lowpass, 500.0, 0.0, 51}, 1000.0); }) ==
        Errc::CutoffAboveNyquist);
  CHECK(code_of([] { validate(FilterSpec{FilterKind::bandpass, 10.0, 600.0, 51}, 1000.0); }) ==
        Errc::CutoffAboveNyquist);
}

TEST_CASE("lowpass separates two tones") {
  // 2100 samples; the central 2000 avoid the 50-sample edges and hold whole periods.
  const double rate = 2000.0;
  auto x = oracle::sine(1.0, 10.0, rate, 2100);
  const auto hi = oracle::sine(1.0, 200.0, rate, 2100);
  for (std::size_t j = 0; j < x.size(); ++j) x[j] += hi[j];
  const auto y = filter(sig(x, rate), {FilterKind::lowpass, 50.0, 0.0, 101});
  CHECK(y.size() == x.size());
  CHECK(y.label().find("edge=50") != std::string::npos);

  const auto interior = y.samples().subspan(50, 2000);
  const double a10 = oracle::tone_amplitude(interior, 10.0, rate);
  const double a200 = oracle::tone_amplitude(interior, 200.0, rate);
  CHECK(std::abs(db(a10)) <= 0.5);
  CHECK(db(a200) <= -40.0);
}

TEST_CASE("highpass and bandpass pass the intended tone") {
  const double rate = 2000.0;
  auto x = oracle::sine(1.0, 10.0, rate, 2100);
  const auto mid = oracle::sine(1.0, 300.0, rate, 2100);
  for (std::size_t j = 0; j < x.size(); ++j) x[j] += mid[j];
  const auto hp = filter(sig(x, rate), {FilterKind::highpass, 150.0, 0.0, 101});
  const auto bp = filter(sig(x, rate), {FilterKind::bandpass, 200.0, 400.0, 101});
  for (const auto* y : {&hp, &bp}) {
    const auto interior = y->samples().subspan(50, 2000);
    CHECK(std::abs(db(oracle::tone_amplitude(interior, 300.0, rate))) <= 0.5);
    CHECK(db(oracle::tone_amplitude(interior, 10.0, rate)) <= -40.0);
  }
}

TEST_CASE("near-Nyquist lowpass is almost all-pass on white input") {
  const double rate = 2000.0;
  const auto x = oracle::gaussian(8192, 17);
  const auto y = filter(sig(x, rate), {FilterKind::lowpass, 0.999 * rate / 2, 0.0, 401});
  const auto in = std::span<const double>(x).subspan(200, 8192 - 400);
  const auto out = y.samples().subspan(200, 8192 - 400);
  CHECK(oracle::relative_rms_error(out, in) <= 0.05);
}

TEST_CASE("filter errors") {
  CHECK(code_of([] { filter(sig(std::vector<double>(200, 0.0)), {FilterKind::lowpass, 600.0, 0.0, 11}); }) ==
        Errc::CutoffAboveNyquist);
  CHECK(code_of([] { filter(sig(std::vector<double>(50, 0.0)), {FilterKind::lowpass, 100.0, 0.0, 101}); }) ==
        Errc::SignalShorterThanFilter);
}

TEST_CASE("filter is linear and shift invariant") {
  const FilterSpec spec{FilterKind::lowpass, 120.0, 0.0, 61};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto xs = oracle::gaussian(400, seed);
    const auto ys = oracle::gaussian(400, seed + 99);
    std::vector<double> sum(400);
    for (std::size_t j = 0; j < 400; ++j) sum[j] = xs[j] + ys[j];
    const auto fx = filter(sig(xs), spec);
    const auto fy = filter(sig(ys), spec);
    const auto fs = filter(sig(sum), spec);
    for (std::size_t j = 0; j < 400; ++j) CHECK(std::abs(fs[j] - (fx[j] + fy[j])) <= 1e-9);

    const std::size_t k = 7 + seed;
    std::vector<double> shifted(400, 0.0);
    for (std::size_t j = k; j < 400; ++j) shifted[j] = xs[j - k];
    const auto fshift = filter(sig(shifted), spec);
    for (std::size_t j = k + 30; j + 30 < 400; ++j) CHECK(std::abs(fshift[j] - fx[j - k]) <= 1e-12);
  }
}

TEST_CASE("integrate") {
  SUBCASE("zeros") {
    const auto y = integrate(sig(std::vector<double>(10, 0.0)));
    for (double v : y.samples()) CHECK(v == 0.0);
    CHECK(y.unit() == Unit::meter_per_s);
  }
  SUBCASE("sinusoid recovers A / w") {
    const double amp = 3.94784;
    const double w = 2 * kPi * 10.0;
    const auto y = integrate(sig(oracle::sine(amp, 10.0, 1000.0, 2000)));
    const auto tail = y.samples().subspan(100);
    CHECK(stats(tail).peak == doctest::Approx(amp / w).epsilon(0.01));
    CHECK(std::abs(amp / w - 0.0628319) < 1e-6);
  }
  SUBCASE("constant integrates to a ramp") {
    const auto y = integrate(sig(std::vector<double>(100, 2.5)), {false, std::nullopt});
    for (std::size_t n = 1; n + 1 < y.size(); ++n) {
      CHECK(std::abs((y[n + 1] - y[n]) * 1000.0 - 2.5) <= 1e-9);
    }
    CHECK(y[0] == 0.0);
  }
  SUBCASE("unit chain and flags") {
    CHECK(integrate(sig({1, 2}, 10.0, Unit::meter_per_s)).unit() == Unit::meter);
    const auto v = integrate(sig({1, 2}, 10.0, Unit::volt));
    CHECK(v.unit() == Unit::dimensionless);
    CHECK(v.label().find(kUnitDroppedFlag) != std::string::npos);
  }
  SUBCASE("double integration recovers displacement") {
    const VibrationModel m{{{1e-3, 10.0, 0.0, 0.0}}, ""};
    const auto a = synth_acceleration(m, 1000.0, 2.0);
    const auto d = integrate(integrate(a));
    CHECK(d.unit() == Unit::meter);
    CHECK(stats(d.samples().subspan(100)).peak == doctest::Approx(1e-3).epsilon(0.02));
  }
  SUBCASE("highpass suppresses drift from an offset") {
    auto x = oracle::sine(1.0, 20.0, 1000.0, 4000);
    for (double& v : x) v += 0.05;
    const auto drift = integrate(sig(x), {false, std::nullopt});
    const auto clean = integrate(sig(x), {false, 2.0});
    const auto mid = [](const Signal& s) { return s.samples().subspan(1000, 2000); };
    CHECK(stats(mid(drift)).peak > 0.1);
    CHECK(stats(mid(clean)).peak == doctest::Approx(1.0 / (2 * kPi * 20.0)).epsilon(0.05));
  }
  SUBCASE("too short") {
    CHECK(code_of([] { integrate(sig({1.0})); }) == Errc::TooShort);
  }
}

TEST_CASE("differentiate") {
  SUBCASE("constant") {
    const auto d = differentiate(sig(std::vector<double>(20, 4.2), 100.0, Unit::meter));
    for (double v : d.samples()) {
      CHECK(std::abs(v) <= 1e-12);
    }
  }
  SUBCASE("exact on quadratics, endpoints included") {
    std::vector<double> ramp(50);
    std::vector<double> quad(50);
    for (std::size_t j = 0; j < 50; ++j) {
      const double t = static_cast<double>(j) / 100.0;
      ramp[j] = 3.0 * t - 1.0;
      quad[j] = 2.0 * t * t;
    }
    const auto dr = differentiate(sig(ramp, 100.0, Unit::meter));
    const auto dq = differentiate(sig(quad, 100.0, Unit::meter));
    CHECK(dr.unit() == Unit::meter_per_s);
    for (std::size_t j = 0; j < 50; ++j) {
      CHECK(std::abs(dr[j] - 3.0) <= 1e-9);
      CHECK(std::abs(dq[j] - 4.0 * static_cast<double>(j) / 100.0) <= 1e-9);
    }
  }
  SUBCASE("sinusoid peak is D w within the second-order bound") {
    const auto d = differentiate(sig(oracle::sine(1e-3, 10.0, 1000.0, 1000), 1000.0, Unit::meter));
    CHECK(stats(d).peak == doctest::Approx(1e-3 * 2 * kPi * 10.0).epsilon(1e-3));
  }
  SUBCASE("too short") {
    CHECK(code_of([] { differentiate(sig({1.0, 2.0})); }) == Errc::TooShort);
  }
}

TEST_CASE("differentiate after integrate is the [1 2 1]/4 smoother") {
  // Trapezoid then central difference is exactly (x[n-1] + 2 x[n] + x[n+1]) / 4
  // in the interior, i.e. a cos^2(pi f / rate) gain.
  const auto x = oracle::gaussian(500, 3);
  const auto y = differentiate(integrate(sig(x), {false, std::nullopt}));
  for (std::size_t n = 1; n + 1 < x.size(); ++n) {
    CHECK(std::abs(y[n] - 0.25 * (x[n - 1] + 2.0 * x[n] + x[n + 1])) <= 1e-12);
  }
  const double rate = 1000.0;
  const double f = 5.0;
  const auto tone = oracle::sine(1.0, f, rate, 2000);
  const auto back = differentiate(integrate(sig(tone, rate), {false, std::nullopt}));
  const double gain = std::pow(std::cos(kPi * f / rate), 2);
  for (std::size_t n = 1; n + 1 < tone.size(); ++n) CHECK(std::abs(back[n] - gain * tone[n]) <= 1e-9);
}

TEST_CASE("detrend") {
  std::vector<double> x(101);
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = 5.0 + 0.3 * static_cast<double>(j);
  const auto lin = detrend(sig(x), true);
  for (double v : lin.samples()) CHECK(std::abs(v) <= 1e-10);
  const auto mean_only = detrend(sig(x), false);
  CHECK(std::abs(stats(mean_only).mean) <= 1e-12);
}

TEST_CASE("estimate_damping") {
  SUBCASE("undamped sinusoid") {
    CHECK(std::abs(estimate_damping(sig(oracle::sine(1.0, 10.0, 1000.0, 3000)))) <= 1e-3);
  }
  SUBCASE("synthesized decay") {
    const VibrationModel m{{{1e-3, 10.0, 0.0, 0.02}}, ""};
    const double z = estimate_damping(synth_displacement(m, 1000.0, 3.0));
    CHECK(z == doctest::Approx(0.02).epsilon(0.1));
  }
  SUBCASE("monotone signal") {
    std::vector<double> ramp(100);
    for (std::size_t j = 0; j < ramp.size(); ++j) ramp[j] = static_cast<double>(j);
    CHECK(code_of([&] { estimate_damping(sig(ramp)); }) == Errc::InsufficientPeaks);
  }
}
