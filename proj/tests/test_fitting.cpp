#include "doctest.h"

#include <cmath>
#include <vector>

#include "ionphase/errors.hpp"
#include "ionphase/fitting.hpp"
#include "ionphase/rng.hpp"

using namespace ionphase;
using experiments::fit_gaussian_decay;
using experiments::fit_line;
using experiments::fit_sinusoid;
using experiments::Rng;
using experiments::unwrap_phases;
using experiments::wrap_phase;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("sinusoid fit recovers noise-free parameters to 1e-9") {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const double amplitude = rng.uniform(0.05, 2.0);
    const double phase = rng.uniform(-kPi, kPi);
    const double offset = rng.uniform(-1.0, 1.0);
    const double omega = rng.bernoulli(0.5) ? 1.0 : 2.0;
    std::vector<double> xs, ys;
    for (int j = 0; j < 24; ++j) {
      const double x = 2.0 * kPi * j / 24;
      xs.push_back(x);
      ys.push_back(offset + amplitude * std::cos(omega * x + phase));
    }
    const auto fit = fit_sinusoid(xs, ys, omega);
    CHECK(std::abs(fit.amplitude - amplitude) < 1e-9);
    CHECK(std::abs(wrap_phase(fit.phase_rad - phase)) < 1e-9);
    CHECK(std::abs(fit.offset - offset) < 1e-9);
    CHECK(fit.residual_rms < 1e-9);
    CHECK(fit.amplitude >= 0.0);
    CHECK(fit.phase_rad <= kPi);
    CHECK(fit.phase_rad > -kPi);
  }
}

TEST_CASE("sinusoid fit rejects degenerate designs") {
  std::vector<double> xs(10, 1.5), ys(10, 0.3);
  CHECK_THROWS_AS(fit_sinusoid(xs, ys, 1.0), FitError);
  std::vector<double> two_x{0.0, 1.0}, two_y{0.0, 1.0};
  CHECK_THROWS_AS(fit_sinusoid(two_x, two_y, 1.0), FitError);
}

TEST_CASE("sinusoid fit phase error stays within 3 degrees on noisy fringes") {
  Rng rng(102);
  int within = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    const double phase = rng.uniform(-kPi, kPi);
    std::vector<double> xs, ys;
    for (int j = 0; j < 24; ++j) {
      const double x = 2.0 * kPi * j / 24;
      xs.push_back(x);
      ys.push_back(std::cos(2.0 * x + phase) + 0.05 * rng.normal());
    }
    const auto fit = fit_sinusoid(xs, ys, 2.0);
    if (std::abs(wrap_phase(fit.phase_rad - phase)) < 3.0 * kPi / 180.0) ++within;
  }
  CHECK(within >= 950);
}

TEST_CASE("gaussian decay fit") {
  SUBCASE("recovers exact synthetic parameters") {
    std::vector<double> ts, ys;
    for (int j = 0; j < 20; ++j) {
      const double t = 0.05 + 0.15 * j;
      ts.push_back(t);
      ys.push_back(0.98 * std::exp(-(t / 1.8) * (t / 1.8)));
    }
    const auto fit = fit_gaussian_decay(ts, ys);
    CHECK(fit.tau_s == doctest::Approx(1.8).epsilon(1e-9));
    CHECK(fit.scale == doctest::Approx(0.98).epsilon(1e-9));
    CHECK(fit.dropped == 0);
  }
  SUBCASE("drops non-positive samples and reports them") {
    std::vector<double> ts{0.0, 0.5, 1.0, 1.5, 2.0};
    std::vector<double> ys{1.0, 0.9, -0.02, 0.5, 0.3};
    const auto fit = fit_gaussian_decay(ts, ys);
    CHECK(fit.dropped == 1);
    CHECK(fit.tau_s > 0.0);
  }
  SUBCASE("fails when everything is filtered") {
    std::vector<double> ts{0.0, 1.0, 2.0};
    std::vector<double> ys{-1.0, 0.0, -0.5};
    CHECK_THROWS_AS(fit_gaussian_decay(ts, ys), FitError);
  }
  SUBCASE("non-decaying data yields an infinite time constant") {
    std::vector<double> ts{0.0, 1.0, 2.0, 3.0};
    std::vector<double> ys{0.5, 0.5, 0.5, 0.5};
    const auto fit = fit_gaussian_decay(ts, ys);
    CHECK(std::isinf(fit.tau_s));
  }
}

TEST_CASE("phase unwrap and line fit") {
  std::vector<double> wrapped;
  for (int j = 0; j < 12; ++j) wrapped.push_back(wrap_phase(0.9 * j - 2.0));
  const auto unwrapped = unwrap_phases(wrapped);
  const auto line = fit_line(
      [] {
        std::vector<double> xs;
        for (int j = 0; j < 12; ++j) xs.push_back(j);
        return xs;
      }(),
      unwrapped);
  CHECK(line.slope == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(wrap_phase(7.0 * kPi / 3.0) == doctest::Approx(kPi / 3.0));
  CHECK(wrap_phase(-kPi) == doctest::Approx(kPi));
}
