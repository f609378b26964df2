#include <doctest.h>

#include "gaitfft/synthgen.hpp"

using namespace gaitfft;

TEST_CASE("single walking segment") {
  GaitScenario sc;
  sc.segments = {{60.0, 2.0, 1.0, 0.0}};
  const auto out = generate(sc);
  CHECK(out.truth.total_steps == 120.0);
  CHECK(out.truth.active_duration_s == 60.0);
  CHECK(out.recording.size() == 6000);
  CHECK(out.recording.duration_s() == 60.0);
  CHECK(out.truth.step_times.size() == 120);
  CHECK(out.truth.window_frequency_hz.size() == 12);
  CHECK(out.recording.z.maxCoeff() <= 1.0);
  CHECK(out.recording.z.maxCoeff() > 0.998);
}

TEST_CASE("piecewise scenario") {
  GaitScenario sc;
  sc.segments = {{30.0, 1.5, 1.0, 0.0}, {10.0, 0.0, 1.0, 0.0}, {20.0, 3.0, 1.0, 0.0}};
  const auto out = generate(sc);
  CHECK(out.truth.total_steps == doctest::Approx(105.0));
  REQUIRE(out.truth.segment_steps.size() == 3);
  CHECK(out.truth.segment_steps[0] == doctest::Approx(45.0));
  CHECK(out.truth.segment_steps[1] == 0.0);
  CHECK(out.truth.segment_steps[2] == doctest::Approx(60.0));
  CHECK(out.truth.active_duration_s == 50.0);
  CHECK(out.truth.window_frequency_hz[0] == 1.5);
  CHECK(out.truth.window_frequency_hz[6] == 0.0);
  CHECK(out.truth.window_frequency_hz[8] == 3.0);
  // Rest is silent without noise.
  CHECK(out.recording.z.segment(3100, 900).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("phase is continuous across segments") {
  GaitScenario sc;
  sc.segments = {{2.3, 1.0, 1.0, 0.0}, {3.0, 2.0, 1.0, 0.0}};
  const auto out = generate(sc);
  const auto& z = out.recording.z;
  for (Eigen::Index i = 1; i < z.size(); ++i) {
    // Max slope of A sin(2 pi 2 t) at 100 Hz is ~0.126 per sample.
    CHECK(std::abs(z(i) - z(i - 1)) < 0.13);
  }
}

TEST_CASE("crest times match the signal maxima") {
  GaitScenario sc;
  sc.segments = {{5.0, 1.0, 1.0, 0.0}, {3.0, 0.0, 0.0, 0.0}, {5.0, 1.0, 1.0, 0.0}};
  const auto out = generate(sc);
  REQUIRE(out.truth.step_times.size() == 10);
  for (double tc : out.truth.step_times) {
    const auto i = static_cast<Eigen::Index>(std::llround(tc * 100.0));
    CHECK(out.recording.z(i) > 0.999);
  }
}

TEST_CASE("determinism") {
  GaitScenario sc;
  sc.segments = {{10.0, 1.7, 0.8, 0.3}, {4.0, 0.0, 1.0, 0.0}};
  sc.noise_amplitude = 0.1;
  sc.seed = 12345;
  const auto a = generate(sc);
  const auto b = generate(sc);
  CHECK(a.recording.z == b.recording.z);
  CHECK(a.recording.x == b.recording.x);
  sc.seed = 12346;
  CHECK_FALSE(generate(sc).recording.z == a.recording.z);
}

TEST_CASE("noise stays within its amplitude") {
  GaitScenario sc;
  sc.segments = {{20.0, 0.0, 1.0, 0.0}};
  sc.noise_amplitude = 0.2;
  sc.seed = 9;
  const auto out = generate(sc);
  CHECK(out.recording.z.cwiseAbs().maxCoeff() <= 0.2);
  CHECK(out.recording.z.cwiseAbs().maxCoeff() > 0.19);
  CHECK(std::abs(out.recording.z.mean()) < 0.01);
  CHECK(out.recording.x.cwiseAbs().maxCoeff() <= kLateralNoise);
  CHECK(out.truth.total_steps == 0.0);
}

TEST_CASE("scenario validation") {
  GaitScenario sc;
  CHECK_THROWS_AS(sc.validate(), Error);
  sc.segments = {{10.0, 6.0, 1.0, 0.0}};
  CHECK_THROWS_AS(sc.validate(), Error);
  sc.segments = {{10.0, 0.2, 1.0, 0.0}};
  CHECK_THROWS_AS(sc.validate(), Error);
  sc.segments = {{0.0, 1.0, 1.0, 0.0}};
  CHECK_THROWS_AS(sc.validate(), Error);
  sc.segments = {{10.0, 1.0, 1.0, 1.0}};
  CHECK_THROWS_AS(sc.validate(), Error);
  sc.segments = {{10.0, 1.0, 1.0, 0.5}};
  sc.sample_rate_hz = 5.0;
  CHECK_THROWS_AS(sc.validate(), Error);
  sc.sample_rate_hz = 100.0;
  CHECK_NOTHROW(sc.validate());
  try {
    sc.segments = {{10.0, 6.0, 1.0, 0.0}};
    sc.validate();
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::scenario);
  }
}
