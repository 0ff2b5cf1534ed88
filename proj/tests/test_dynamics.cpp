#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "natline/dynamics.hpp"
#include "natline/errors.hpp"
#include "oracles.hpp"

using namespace natline;
using oracle::pi;

namespace {

double max_deviation(const Envelope& env, const AmplitudeTrajectory& traj) {
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    worst = std::max(worst, std::abs(traj.excited[i] - amplitude_analytic(env, traj.times[i])));
  }
  return worst;
}

}  // namespace

TEST_CASE("system parameters") {
  const auto p = SystemParams::make(10.0);
  CHECK(p.big_gamma() == 2.0 * p.gamma);
  CHECK(p.strong_pulse());
  CHECK_FALSE(p.strong_pulse_warning().has_value());
  CHECK(SystemParams::make(5.0).strong_pulse_warning().has_value());
  CHECK(SystemParams::make(0.5).weak_drive());
  CHECK(SystemParams::make(2.0).weak_drive_warning().has_value());
  CHECK_THROWS_AS(SystemParams::make(0.0), std::invalid_argument);
  CHECK_THROWS_AS(SystemParams::make(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("analytic amplitude: initial condition, inversion and free decay") {
  const double omega = 10.0;
  const auto rect = Envelope::rectangular(omega);
  CHECK(std::abs(amplitude_analytic(rect, -pi / omega)) < 1e-15);
  const auto b0 = amplitude_analytic(rect, 0.0);
  CHECK(b0.real() == 0.0);
  CHECK(b0.imag() == doctest::Approx(-1.0).epsilon(1e-15));
  const auto later = amplitude_analytic(rect, 0.5, 1.0);
  CHECK(later.imag() == doctest::Approx(-std::exp(-0.5)));
  // Continuity across the end of the pulse.
  CHECK(std::abs(amplitude_analytic(rect, 1e-12) - amplitude_analytic(rect, -1e-12)) < 1e-10);
  // Rectangular pulse: -i sin(A/2) = -i cos(Omega t / 2).
  for (double t : {-0.3, -0.2, -0.1, -0.01}) {
    CHECK(amplitude_analytic(rect, t).imag() == doctest::Approx(-std::cos(0.5 * omega * t)));
  }
  const auto sine = Envelope::sine(omega);
  CHECK(amplitude_analytic(sine, -pi / (2 * omega)).imag() ==
        doctest::Approx(-std::sin(pi / 4)).epsilon(1e-14));
  CHECK(std::abs(amplitude_analytic(sine, -1.0)) == 0.0);
}

TEST_CASE("ODE integration reproduces the area formula") {
  for (double omega : {10.0, 100.0}) {
    for (const auto& env : {Envelope::rectangular(omega), Envelope::sine(omega)}) {
      const auto traj = amplitude_ode(env);
      CHECK(traj.times.size() == default_sample_count(env));
      CHECK(traj.times.size() >= 256);
      CHECK(max_deviation(env, traj) <= 1e-8);

      CHECK(std::abs(traj.excited.front()) == 0.0);
      CHECK(traj.ground.front() == complex(1.0, 0.0));
      const auto b0 = traj.excited.back();
      CHECK(std::abs(b0 - complex(0.0, -1.0)) <= 1e-8);

      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double norm = std::norm(traj.excited[i]) + std::norm(traj.ground[i]);
        CHECK(std::abs(norm - 1.0) <= 1e-8);
        CHECK(std::abs(traj.excited[i].real()) <= 1e-8);
      }
    }
  }
}

TEST_CASE("dense output between steps") {
  const double omega = 10.0;
  const auto env = Envelope::rectangular(omega);
  const AmplitudeSolution sol(env, 1e-12);
  const double mid = -pi / (2 * omega);
  CHECK(std::abs(sol.excited(mid) - complex(0.0, -std::sin(pi / 4))) <= 1e-8);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> when(-pi / omega, 0.0);
  for (int i = 0; i < 500; ++i) {
    const double t = when(rng);
    CHECK(std::abs(sol.excited(t) - amplitude_analytic(env, t)) <= 1e-8);
    CHECK(std::abs(sol.ground(t) - ground_amplitude_analytic(env, t)) <= 1e-8);
  }
}

TEST_CASE("ODE handles tabulated envelopes with kinks") {
  const double T = 0.4;
  const double h = 2 * pi / T;
  const auto env = Envelope::tabulated({{-T, 0.0}, {-T / 2, h}, {0.0, 0.0}});
  const auto traj = amplitude_ode(env, 1e-12, 300);
  CHECK(traj.times.size() == 300);
  CHECK(max_deviation(env, traj) <= 1e-8);
  CHECK(std::abs(traj.excited.back() - complex(0.0, -1.0)) <= 1e-8);
}

TEST_CASE("random pulse rates keep the trajectory invariants") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> rate(1.0, 1000.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double omega = rate(rng);
    const auto env = trial % 2 ? Envelope::sine(omega) : Envelope::rectangular(omega);
    const auto traj = amplitude_ode(env, 1e-12);
    CHECK(max_deviation(env, traj) <= 1e-8);
  }
}

TEST_CASE("tolerance bounds are enforced") {
  const auto env = Envelope::rectangular(10.0);
  CHECK_THROWS_AS(AmplitudeSolution(env, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(AmplitudeSolution(env, 1e-16), std::invalid_argument);
  CHECK_NOTHROW(AmplitudeSolution(env, 1e-6));
  CHECK_NOTHROW(AmplitudeSolution(env, 1e-14));
}

TEST_CASE("integration failure carries the time reached") {
  IntegrationFailure err("step size underflow", -0.25);
  CHECK(err.time_reached() == -0.25);
}
