#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "natline/envelope.hpp"

namespace natline {

using complex = std::complex<double>;

/// Dimensionless problem definition. Frequencies are in units of gamma
/// unless a caller chooses otherwise; gamma defaults to 1.
struct SystemParams {
  double omega = 10.0;  ///< Rabi rate parameter
  double gamma = 1.0;   ///< amplitude decay rate

  /// Throws std::invalid_argument unless omega > 0 and gamma > 0.
  static SystemParams make(double omega, double gamma = 1.0);

  /// Population decay rate, exactly twice the amplitude decay rate.
  double big_gamma() const noexcept { return 2.0 * gamma; }

  bool strong_pulse() const noexcept { return omega >= 10.0 * gamma; }
  bool weak_drive() const noexcept { return omega <= gamma; }

  /// Set when the pulse is too weak for the two-stage treatment.
  std::optional<std::string> strong_pulse_warning() const;
  /// Set when the drive is too strong for the incoherent Mollow term.
  std::optional<std::string> weak_drive_warning() const;
};

/// Ground (A) and excited (B) amplitudes sampled over the pulse.
struct AmplitudeTrajectory {
  std::vector<double> times;
  std::vector<complex> excited;
  std::vector<complex> ground;
};

/// Excited-state amplitude from the accumulated pulse area:
/// B(t) = -i sin(A(t)/2) on the pulse, -i exp(-gamma t) afterwards.
/// Zero before the pulse starts.
complex amplitude_analytic(const Envelope& env, double t, double gamma = 1.0);

/// Matching ground-state amplitude cos(A(t)/2) during the pulse.
complex ground_amplitude_analytic(const Envelope& env, double t);

/// Dense solution of the pulse-stage amplitude equations in the
/// rotating-wave approximation,
///   i dA/dt = (Omega(t)/2) B,   i dB/dt = (Omega(t)/2) A,
/// from A = 1, B = 0 at t = -duration to t = 0. Integrated with the
/// Dormand-Prince 5(4) pair; values between steps come from its
/// continuous extension. Relaxation is not part of this stage.
class AmplitudeSolution {
 public:
  /// rel_tol must lie in [1e-14, 1e-6].
  AmplitudeSolution(const Envelope& env, double rel_tol = 1e-12);

  complex excited(double t) const;
  complex ground(double t) const;

  double start() const noexcept { return start_; }
  std::size_t steps() const noexcept { return steps_.size(); }

 private:
  struct Step {
    double t0;
    double h;
    // Continuous-extension coefficients, 4 real state components each.
    double c[5][4];
  };

  std::array<double, 4> state_at(double t) const;

  double start_;
  std::vector<Step> steps_;
};

/// Number of samples returned by amplitude_ode by default: 64 per unit of
/// accumulated area, at least 256.
std::size_t default_sample_count(const Envelope& env);

/// Integrates the pulse stage and samples it uniformly in time.
AmplitudeTrajectory amplitude_ode(const Envelope& env, double rel_tol = 1e-12,
                                  std::size_t samples = 0);

}  // namespace natline
