#include "natline/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "natline/errors.hpp"

namespace natline {

namespace {

using State = std::array<double, 4>;  // Re A, Im A, Re B, Im B

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer, Norsett & Wanner).
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

State rhs(const Envelope& env, double t, const State& y) {
  const double half = 0.5 * env.evaluate(t);
  // dA/dt = -i (Omega/2) B,  dB/dt = -i (Omega/2) A
  return {half * y[3], -half * y[2], half * y[1], -half * y[0]};
}

State combine(const State& y, double h, std::initializer_list<double> coeffs,
              std::initializer_list<const State*> ks) {
  State out = y;
  auto c = coeffs.begin();
  for (const State* k : ks) {
    for (std::size_t i = 0; i < 4; ++i) out[i] += h * (*c) * (*k)[i];
    ++c;
  }
  return out;
}

}  // namespace

SystemParams SystemParams::make(double omega, double gamma) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("Rabi rate must be positive");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("decay rate gamma must be positive");
  }
  return SystemParams{omega, gamma};
}

std::optional<std::string> SystemParams::strong_pulse_warning() const {
  if (strong_pulse()) return std::nullopt;
  std::ostringstream msg;
  msg << "Omega/gamma = " << omega / gamma
      << " is below 10; the two-stage pulse/decay treatment assumes "
         "Omega >> gamma";
  return msg.str();
}

std::optional<std::string> SystemParams::weak_drive_warning() const {
  if (weak_drive()) return std::nullopt;
  std::ostringstream msg;
  msg << "Omega/gamma = " << omega / gamma
      << " exceeds 1; the incoherent Mollow term assumes Omega << gamma";
  return msg.str();
}

complex amplitude_analytic(const Envelope& env, double t, double gamma) {
  if (t < -env.duration()) return {0.0, 0.0};
  if (t > 0.0) return {0.0, -std::exp(-gamma * t)};
  return {0.0, -std::sin(0.5 * env.area(t))};
}

complex ground_amplitude_analytic(const Envelope& env, double t) {
  if (t < -env.duration()) return {1.0, 0.0};
  return {std::cos(0.5 * env.area(t)), 0.0};
}

AmplitudeSolution::AmplitudeSolution(const Envelope& env, double rel_tol)
    : start_(-env.duration()) {
  if (!(rel_tol >= 1e-14 && rel_tol <= 1e-6)) {
    throw std::invalid_argument("ODE tolerance must lie in [1e-14, 1e-6]");
  }
  const double atol = rel_tol;
  const double eps = std::numeric_limits<double>::epsilon();
  const std::size_t max_steps = 1000000;

  State y{1.0, 0.0, 0.0, 0.0};
  const auto edges = env.breakpoints();
  double h = env.duration() / 64.0;

  for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
    double t = edges[seg];
    const double t_end = edges[seg + 1];
    // Sample strictly inside the segment so a kink never enters a stage.
    const double probe = 0.5 * (t + t_end);
    auto f = [&](double s, const State& x) {
      return rhs(env, std::clamp(s, std::nextafter(t, probe),
                                 std::nextafter(t_end, probe)),
                 x);
    };
    State k1 = f(t, y);
    h = std::min(h, t_end - t);
    while (t < t_end) {
      if (steps_.size() >= max_steps) {
        throw IntegrationFailure("too many ODE steps", t);
      }
      bool last = false;
      if (t + h >= t_end) {
        h = t_end - t;
        last = true;
      }
      if (h <= 16.0 * eps * std::max(std::abs(t), env.duration())) {
        std::ostringstream msg;
        msg << "ODE step size underflow at t = " << t;
        throw IntegrationFailure(msg.str(), t);
      }
      const State k2 = f(t + c2 * h, combine(y, h, {a21}, {&k1}));
      const State k3 = f(t + c3 * h, combine(y, h, {a31, a32}, {&k1, &k2}));
      const State k4 =
          f(t + c4 * h, combine(y, h, {a41, a42, a43}, {&k1, &k2, &k3}));
      const State k5 = f(t + c5 * h, combine(y, h, {a51, a52, a53, a54},
                                             {&k1, &k2, &k3, &k4}));
      const State k6 = f(t + h, combine(y, h, {a61, a62, a63, a64, a65},
                                        {&k1, &k2, &k3, &k4, &k5}));
      const State y1 = combine(y, h, {a71, a73, a74, a75, a76},
                               {&k1, &k3, &k4, &k5, &k6});
      const State k7 = f(t + h, y1);

      double err = 0.0;
      for (std::size_t i = 0; i < 4; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                              e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc =
            atol + rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
        err += (e / sc) * (e / sc);
      }
      err = std::sqrt(err / 4.0);

      if (err <= 1.0) {
        Step s{};
        s.t0 = t;
        s.h = h;
        for (std::size_t i = 0; i < 4; ++i) {
          const double dy = y1[i] - y[i];
          const double bspl = h * k1[i] - dy;
          s.c[0][i] = y[i];
          s.c[1][i] = dy;
          s.c[2][i] = bspl;
          s.c[3][i] = dy - h * k7[i] - bspl;
          s.c[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                           d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        steps_.push_back(s);
        t = last ? t_end : t + h;
        y = y1;
        k1 = k7;
        const double factor =
            err == 0.0 ? 5.0
                       : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (!last) h *= factor;
      } else {
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      }
    }
  }
}

std::array<double, 4> AmplitudeSolution::state_at(double t) const {
  if (steps_.empty() || t <= start_) return {1.0, 0.0, 0.0, 0.0};
  auto it = std::upper_bound(
      steps_.begin(), steps_.end(), t,
      [](double value, const Step& s) { return value < s.t0; });
  const Step& s = *(it == steps_.begin() ? it : it - 1);
  const double theta = std::clamp((t - s.t0) / s.h, 0.0, 1.0);
  const double theta1 = 1.0 - theta;
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = s.c[0][i] +
             theta * (s.c[1][i] +
                      theta1 * (s.c[2][i] +
                                theta * (s.c[3][i] + theta1 * s.c[4][i])));
  }
  return out;
}

complex AmplitudeSolution::excited(double t) const {
  const auto y = state_at(t);
  return {y[2], y[3]};
}

complex AmplitudeSolution::ground(double t) const {
  const auto y = state_at(t);
  return {y[0], y[1]};
}

std::size_t default_sample_count(const Envelope& env) {
  const double per_area = 64.0 * env.area(0.0);
  return std::max<std::size_t>(256,
                               static_cast<std::size_t>(std::ceil(per_area)));
}

AmplitudeTrajectory amplitude_ode(const Envelope& env, double rel_tol,
                                  std::size_t samples) {
  if (samples == 0) samples = default_sample_count(env);
  if (samples < 2) samples = 2;
  const AmplitudeSolution sol(env, rel_tol);
  AmplitudeTrajectory traj;
  traj.times.reserve(samples);
  traj.excited.reserve(samples);
  traj.ground.reserve(samples);
  const double t0 = -env.duration();
  for (std::size_t k = 0; k < samples; ++k) {
    const double t =
        k + 1 == samples
            ? 0.0
            : t0 + env.duration() * static_cast<double>(k) /
                       static_cast<double>(samples - 1);
    traj.times.push_back(t);
    traj.excited.push_back(sol.excited(t));
    traj.ground.push_back(sol.ground(t));
  }
  return traj;
}

}  // namespace natline
