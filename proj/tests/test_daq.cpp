#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "support/oracles.hpp"
#include "vibrelab/daq.hpp"
#include "vibrelab/error.hpp"

using namespace vibrelab;
namespace fs = std::filesystem;

namespace {

Signal accel(std::vector<double> x, double rate = 1000.0) {
  return Signal(rate, std::move(x), Unit::meter_per_s2, "a");
}

Signal volts(std::vector<double> x, double rate = 1000.0) {
  return Signal(rate, std::move(x), Unit::volt, "v");
}

VibrationModel beam() { return {{{1e-3, 10.0, 0.0, 0.0}}, "beam"}; }

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected vibrelab::Error");
  return Errc::IoError;
}

}  // namespace

TEST_CASE("seismic_force is F = m a") {
  const auto zero = seismic_force(accel(std::vector<double>(10, 0.0)), 0.5);
  for (double f : zero.samples()) CHECK(f == 0.0);
  CHECK(zero.unit() == Unit::newton);

  const auto a = accel(oracle::gaussian(100, 3));
  const auto same = seismic_force(a, 1.0);
  for (std::size_t n = 0; n < a.size(); ++n) CHECK(same[n] == a[n]);

  const auto peak = accel(oracle::sine(3.94784, 10.0, 1000.0, 1000));
  CHECK(std::abs(stats(seismic_force(peak, 0.01)).peak - 0.0394784) <= 1e-9);

  CHECK(code_of([&] { seismic_force(a, 0.0); }) == Errc::NonPositiveMass);
  CHECK(code_of([&] { seismic_force(volts({1.0}), 1.0); }) == Errc::UnitMismatch);
}

TEST_CASE("transduce scales by sensitivity") {
  const auto a = accel(oracle::sine(3.94784, 10.0, 1000.0, 1000));
  SensorModel unit_sensor;
  const auto v1 = transduce(a, unit_sensor);
  CHECK(v1.unit() == Unit::volt);
  for (std::size_t n = 0; n < a.size(); ++n) CHECK(v1[n] == a[n]);
  CHECK(v1.label().find("axis_x") != std::string::npos);

  SensorModel one_g;
  one_g.sensitivity_v_per_ms2 = 0.102;
  CHECK(std::abs(stats(transduce(a, one_g)).peak - 0.402680) <= 1e-6);
  CHECK(transduce(a, one_g, 2).label().find("axis_z") != std::string::npos);

  CHECK(code_of([] { transduce(volts({1.0}), SensorModel{}); }) == Errc::UnitMismatch);
}

TEST_CASE("to_acceleration inverts transduce") {
  SensorModel s;
  s.sensitivity_v_per_ms2 = 0.102;
  const auto a = accel(oracle::gaussian(500, 11));
  const auto back = to_acceleration(transduce(a, s), s.sensitivity_v_per_ms2);
  CHECK(back.unit() == Unit::meter_per_s2);
  for (std::size_t n = 0; n < a.size(); ++n) CHECK(ulp_distance(back[n], a[n]) <= 2);
}

TEST_CASE("add_noise") {
  const auto zeros = volts(std::vector<double>(100000, 0.0));
  const auto x = volts(oracle::gaussian(1000, 5));

  SUBCASE("zero rms is the identity") {
    const auto y = add_noise(x, 0.0, 42);
    for (std::size_t n = 0; n < x.size(); ++n) CHECK(y[n] == x[n]);
  }
  SUBCASE("same seed, same noise") {
    const auto a = add_noise(x, 0.01, 42);
    const auto b = add_noise(x, 0.01, 42);
    for (std::size_t n = 0; n < x.size(); ++n) CHECK(a[n] == b[n]);
    const auto c = add_noise(x, 0.01, 43);
    CHECK(c[0] != a[0]);
  }
  SUBCASE("measured rms") {
    const auto st = stats(add_noise(zeros, 0.01, 7));
    CHECK(st.rms >= 0.0097);
    CHECK(st.rms <= 0.0103);
    CHECK(std::abs(st.mean) < 1e-4);
  }
  SUBCASE("odd length uses the cosine branch for the last sample") {
    const auto y = add_noise(volts({0.0, 0.0, 0.0}), 1.0, 1);
    CHECK(y[2] != 0.0);
  }
}

TEST_CASE("quantize and reconstruct") {
  AdcModel adc{16, 5.0, 1000.0};
  CHECK(adc.lsb() == 10.0 / 65536.0);
  CHECK(std::abs(adc.lsb() - 1.52588e-4) <= 1e-9);
  CHECK(adc.min_code() == -32768);
  CHECK(adc.max_code() == 32767);

  const auto rec = quantize(volts({0.0, 1.52588e-4, 5.0, -5.0, 7.0, -0.5 * adc.lsb()}), adc);
  REQUIRE(rec.channel_count() == 1);
  const auto& c = rec.channels[0];
  CHECK(c[0] == 0);
  CHECK(c[1] == 1);
  CHECK(c[2] == 32767);
  CHECK(c[3] == -32768);
  CHECK(c[4] == 32767);
  CHECK(c[5] == -1);  // half away from zero
  CHECK(rec.clipped[0] == 2);
  CHECK(rec.label.find("clipped=2") != std::string::npos);

  const auto v = reconstruct(rec, 0);
  CHECK(v.unit() == Unit::volt);
  CHECK(v[1] == doctest::Approx(1.52588e-4).epsilon(1e-5));
  CHECK(code_of([&] { reconstruct(rec, 1); }) == Errc::ChannelOutOfRange);

  const auto zeros = reconstruct(quantize(volts(std::vector<double>(16, 0.0)), adc), 0);
  for (double z : zeros.samples()) CHECK(z == 0.0);

  CHECK(code_of([&] { quantize(accel({1.0}), adc); }) == Errc::UnitMismatch);
}

TEST_CASE("round trip error is at most half an lsb") {
  for (int bits : {8, 12, 16, 24}) {
    const AdcModel adc{bits, 2.5, 1000.0};
    const double fs = adc.full_scale_v;
    const auto x = volts(oracle::uniform(20000, static_cast<std::uint64_t>(bits), -fs, fs - adc.lsb()));
    const auto rec = quantize(x, adc);
    const auto y = reconstruct(rec, 0);
    CHECK(rec.clipped[0] == 0);
    for (std::size_t n = 0; n < x.size(); ++n) CHECK(std::abs(y[n] - x[n]) <= 0.5 * adc.lsb());
  }
}

TEST_CASE("adc and sensor validation") {
  CHECK(code_of([] { validate(AdcModel{7, 5.0, 1000.0}); }) == Errc::InvalidAdc);
  CHECK(code_of([] { validate(AdcModel{25, 5.0, 1000.0}); }) == Errc::InvalidAdc);
  CHECK(code_of([] { validate(AdcModel{16, 0.0, 1000.0}); }) == Errc::InvalidAdc);
  try {
    adc_from_json(R"({"bits": 32, "full_scale_v": 5, "sample_rate_hz": 1000})");
    FAIL("expected InvalidAdc");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidAdc);
    CHECK(std::string(e.what()).find("bits in [8,24]") != std::string::npos);
  }
  SensorModel s;
  s.axes = 2;
  CHECK(code_of([&] { validate(s); }) == Errc::InvalidSensor);
  s = {};
  s.seismic_mass_kg = 0.0;
  CHECK(code_of([&] { validate(s); }) == Errc::InvalidSensor);
}

TEST_CASE("acquire composes the chain") {
  SensorModel sensor;  // sensitivity 1, noise 0
  const AdcModel adc{24, 10.0, 1000.0};

  SUBCASE("noiseless record reconstructs acceleration within half an lsb") {
    const auto rec = acquire(beam(), sensor, adc, 2.0, 1);
    const auto a = synth_acceleration(beam(), 1000.0, 2.0);
    const auto v = reconstruct(rec, 0);
    REQUIRE(v.size() == a.size());
    for (std::size_t n = 0; n < a.size(); ++n) CHECK(std::abs(v[n] - a[n]) <= 0.5 * adc.lsb());
  }
  SUBCASE("duration 0") {
    CHECK(code_of([&] { acquire(beam(), sensor, adc, 0.0, 1); }) == Errc::NonPositiveDuration);
  }
  SUBCASE("Nyquist guard uses the adc rate") {
    const AdcModel slow{16, 5.0, 15.0};
    CHECK(code_of([&] { acquire(beam(), sensor, slow, 1.0, 1); }) == Errc::NyquistViolation);
  }
  SUBCASE("deterministic and triaxial") {
    SensorModel tri;
    tri.sensitivity_v_per_ms2 = 0.102;
    tri.noise_rms_v = 0.002;
    tri.axes = 3;
    const AdcModel a16{16, 5.0, 1000.0};
    const auto r1 = acquire(beam(), tri, a16, 1.0, 99);
    const auto r2 = acquire(beam(), tri, a16, 1.0, 99);
    REQUIRE(r1.channel_count() == 3);
    CHECK(r1.channels == r2.channels);
    // idle axes carry only noise, with independent streams
    CHECK(r1.channels[1] != r1.channels[2]);
    CHECK(stats(reconstruct(r1, 1)).rms == doctest::Approx(0.002).epsilon(0.1));
    CHECK(axis_seed(99, 0) == 99);
    CHECK(axis_seed(99, 1) != axis_seed(99, 2));

    // axis 0 is exactly the single-stage composition
    const auto a = synth_acceleration(beam(), 1000.0, 1.0);
    const auto manual = quantize(add_noise(transduce(a, tri, 0), tri.noise_rms_v, 99), a16);
    CHECK(manual.channels[0] == r1.channels[0]);
  }
}

TEST_CASE("record directory round trip") {
  SensorModel tri;
  tri.sensitivity_v_per_ms2 = 0.102;
  tri.noise_rms_v = 0.001;
  tri.axes = 3;
  const auto rec = acquire(beam(), tri, AdcModel{16, 5.0, 500.0}, 0.5, 5);
  const auto dir = (fs::temp_directory_path() / "vibrelab_test_record").string();
  fs::remove_all(dir);
  write_record(dir, rec);
  CHECK(fs::exists(fs::path(dir) / "record.json"));
  CHECK(fs::exists(fs::path(dir) / "channel_2.csv"));

  const auto back = read_record(dir);
  CHECK(back.channels == rec.channels);
  CHECK(back.seed == rec.seed);
  CHECK(back.adc.bits == 16);
  CHECK(back.adc.sample_rate_hz == 500.0);
  CHECK(back.sensor.axes == 3);
  CHECK(back.sensor.sensitivity_v_per_ms2 == 0.102);
  CHECK(back.noise_algorithm == kNoiseAlgorithm);
  CHECK(channel_codes(back, 0).unit() == Unit::adc_code);
  fs::remove_all(dir);
}
