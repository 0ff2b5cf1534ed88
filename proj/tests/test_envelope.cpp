#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "natline/envelope.hpp"
#include "natline/errors.hpp"
#include "oracles.hpp"

using namespace natline;
using oracle::pi;

TEST_CASE("evaluate follows the pulse shapes") {
  const auto rect = Envelope::rectangular(1.0);
  CHECK(rect.evaluate(-pi / 2) == 1.0);
  CHECK(rect.evaluate(0.1) == 0.0);
  CHECK(rect.duration() == doctest::Approx(pi));

  const auto sine = Envelope::sine(1.0);
  CHECK(sine.evaluate(-pi / 2) == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(sine.evaluate(-1e-3) > 0.0);
}

TEST_CASE("evaluate is exactly zero off the support") {
  for (const auto& env : {Envelope::rectangular(10.0), Envelope::sine(10.0)}) {
    const double theta = env.duration();
    CHECK(env.evaluate(-theta * (1 + 1e-12)) == 0.0);
    CHECK(env.evaluate(-2 * theta) == 0.0);
    CHECK(env.evaluate(1e-15) == 0.0);
    CHECK(env.evaluate(5.0) == 0.0);
  }
}

TEST_CASE("area of built-in pulses") {
  const double omega = 3.0;
  const auto rect = Envelope::rectangular(omega);
  const auto sine = Envelope::sine(omega);
  CHECK(rect.area(0.0) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(rect.area(-rect.duration()) == 0.0);
  CHECK(sine.area(0.0) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(sine.area(-pi / (2 * omega)) == doctest::Approx(pi / 2).epsilon(1e-12));
  // Clamped outside the support.
  CHECK(sine.area(1.0) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(rect.area(-10.0) == 0.0);
}

TEST_CASE("sine area matches its closed form and direct quadrature") {
  const double omega = 7.0;
  const auto sine = Envelope::sine(omega);
  const double theta = sine.duration();
  for (int k = 0; k < 100; ++k) {
    const double t = -theta + theta * k / 99.0;
    const double closed = 0.5 * pi * (std::cos(omega * t) + 1.0);
    CHECK(sine.area(t) == doctest::Approx(closed).epsilon(1e-12));
  }
  const double quad = oracle::simpson([&](double t) { return sine(t); }, -theta,
                                      -pi / (2 * omega), 4000);
  CHECK(quad == doctest::Approx(pi / 2).epsilon(1e-10));
}

TEST_CASE("quadrature of evaluate over the support gives pi") {
  for (double omega : {1.0, 10.0, 100.0}) {
    for (const auto& env : {Envelope::rectangular(omega), Envelope::sine(omega)}) {
      const double q = oracle::simpson([&](double t) { return env(t); },
                                       -env.duration(), 0.0, 20000);
      CHECK(std::abs(q - pi) <= 1e-10);
    }
  }
}

TEST_CASE("built-in areas are monotone") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rate(0.5, 500.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double omega = rate(rng);
    for (const auto& env : {Envelope::rectangular(omega), Envelope::sine(omega)}) {
      double prev = -1.0;
      for (int k = 0; k <= 64; ++k) {
        const double a = env.area(-env.duration() * (1.0 - k / 64.0));
        CHECK(a >= prev);
        CHECK(env.evaluate(-env.duration() * (1.0 - k / 64.0)) >= 0.0);
        prev = a;
      }
    }
  }
}

TEST_CASE("tabulated envelopes interpolate linearly") {
  // Triangle of height h on [-T, 0]: area h T / 2 = pi.
  const double T = 0.5;
  const double h = 2 * pi / T;
  const auto env = Envelope::tabulated({{-T, 0.0}, {-T / 2, h}, {0.0, 0.0}});
  CHECK(env.kind() == EnvelopeKind::Tabulated);
  CHECK(env.duration() == doctest::Approx(T));
  CHECK(env.evaluate(-T / 4) == doctest::Approx(h / 2));
  CHECK(env.evaluate(-3 * T / 4) == doctest::Approx(h / 2));
  CHECK(env.evaluate(0.01) == 0.0);
  CHECK(env.area(-T / 2) == doctest::Approx(pi / 2));
  CHECK(env.area(-T / 4) == doctest::Approx(pi / 2 + (h + h / 2) / 2 * (T / 4)));
  CHECK(env.area(0.0) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(env.breakpoints().size() == 3);
}

TEST_CASE("tabulated envelope validation") {
  using V = std::vector<EnvelopeSample>;
  CHECK_THROWS_AS(Envelope::tabulated(V{}), InvalidEnvelope);
  CHECK_THROWS_AS(Envelope::tabulated(V{{-1.0, pi}}), InvalidEnvelope);
  // Unsorted.
  CHECK_THROWS_AS(Envelope::tabulated(V{{-1.0, pi}, {-0.5, pi}, {-0.7, pi}, {0.0, pi}}),
                  InvalidEnvelope);
  // Does not end at zero.
  CHECK_THROWS_AS(Envelope::tabulated(V{{-1.0, pi}, {-0.1, pi}}), InvalidEnvelope);
  // Wrong area (pi/2 pulse).
  CHECK_THROWS_AS(Envelope::tabulated(V{{-1.0, pi / 2}, {0.0, pi / 2}}), InvalidEnvelope);
  // Within the 1e-6 area tolerance.
  CHECK_NOTHROW(Envelope::tabulated(V{{-1.0, pi * (1 + 5e-7)}, {0.0, pi * (1 + 5e-7)}}));
  CHECK_THROWS_AS(Envelope::tabulated(V{{-1.0, pi * (1 + 5e-6)}, {0.0, pi * (1 + 5e-6)}}),
                  InvalidEnvelope);
  CHECK_THROWS_AS(Envelope::rectangular(0.0), InvalidEnvelope);
  CHECK_THROWS_AS(Envelope::sine(-1.0), InvalidEnvelope);
}

TEST_CASE("envelope files") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto good = dir / "natline_env_good.txt";
  {
    std::ofstream out(good);
    out << "# t omega\n";
    const int n = 201;
    const double omega = 10.0;
    for (int k = 0; k < n; ++k) {
      const double t = -pi / omega + (pi / omega) * k / (n - 1);
      out.precision(17);
      out << t << ' ' << (k == n - 1 ? omega : omega) << '\n';
    }
  }
  const auto env = Envelope::from_file(good);
  CHECK(env.table().size() == 201);
  CHECK(env.area(0.0) == doctest::Approx(pi).epsilon(1e-9));

  const auto bad = dir / "natline_env_bad.txt";
  {
    std::ofstream out(bad);
    out << "-0.3 10\n-0.1 x\n0 10\n";
  }
  CHECK_THROWS_AS(Envelope::from_file(bad), InvalidEnvelope);
  CHECK_THROWS_AS(Envelope::from_file(dir / "natline_missing_file.txt"), InvalidEnvelope);
  const auto empty = dir / "natline_env_empty.txt";
  { std::ofstream out(empty); out << "# nothing\n\n"; }
  CHECK_THROWS_AS(Envelope::from_file(empty), InvalidEnvelope);
}
