#include "natline/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "natline/quadrature.hpp"

namespace natline {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr complex kI{0.0, 1.0};

// Series of the first closed-form term about Delta = s Omega / 2 in
// x = pi (Delta - s Omega/2) / Omega, through second order. The
// coefficients carry an overall 1/(4 Omega).
complex singular_series(double x, double s, double omega) {
  const complex c0{2.0 * kPi, 4.0 * s};
  const complex c1{-2.0 * s, kPi - 4.0 / kPi};
  const complex c2{2.0 / kPi - kPi / 3.0, s * (4.0 / (kPi * kPi) - 1.0)};
  return (c0 + x * (c1 + x * c2)) / (4.0 * omega);
}

complex pulse_term_rect(double d, double omega) {
  for (const double s : {1.0, -1.0}) {
    const double offset = d - 0.5 * s * omega;
    if (std::abs(offset) < kSingularWindow * omega) {
      return singular_series(kPi * offset / omega, s, omega);
    }
  }
  const complex numerator =
      2.0 * omega * std::polar(1.0, kPi * d / omega) - 4.0 * kI * d;
  return numerator / (omega * omega - 4.0 * d * d);
}

}  // namespace

double lorentzian(double detuning, double gamma) {
  return gamma / (kPi * (detuning * detuning + gamma * gamma));
}

complex amplitude_rect(double detuning, const SystemParams& params) {
  return pulse_term_rect(detuning, params.omega) +
         1.0 / complex(params.gamma, detuning);
}

double asymptote_rect(double detuning, const SystemParams& params) {
  if (detuning == 0.0) {
    throw std::domain_error("asymptote is undefined at zero detuning");
  }
  const double d2 = detuning * detuning;
  return params.gamma * params.omega * params.omega / (4.0 * kPi * d2 * d2);
}

double mollow_incoherent(double detuning, const SystemParams& params) {
  const double g = params.gamma;
  const double w2 = params.omega * params.omega;
  const double denom = detuning * detuning + g * g;
  return (w2 / (2.0 * g * g)) * 2.0 * w2 * g / (denom * denom);
}

double mollow_incoherent_normalized(double detuning,
                                    const SystemParams& params) {
  const double g = params.gamma;
  const double denom = detuning * detuning + g * g;
  return 2.0 * g * g * g / (kPi * denom * denom);
}

double mollow_coherent_weight(const SystemParams& params) {
  const double g = params.gamma;
  return params.omega * params.omega / (2.0 * g * g) * 2.0 * kPi;
}

NumericAmplitude::NumericAmplitude(Envelope env, SystemParams params,
                                   double quad_tol)
    : env_(std::move(env)),
      params_(params),
      quad_tol_(quad_tol),
      final_excited_(0.0, -1.0) {
  if (!(quad_tol >= 1e-12 && quad_tol <= 1e-6)) {
    throw std::invalid_argument("quadrature tolerance must lie in [1e-12, 1e-6]");
  }
  if (env_.kind() == EnvelopeKind::Tabulated) {
    ode_ = std::make_shared<const AmplitudeSolution>(env_, 1e-12);
    final_excited_ = ode_->excited(0.0);
  }
}

complex NumericAmplitude::excited(double t) const {
  if (ode_) return ode_->excited(t);
  return amplitude_analytic(env_, t, params_.gamma);
}

complex NumericAmplitude::operator()(double detuning) const {
  const double theta = env_.duration();
  double width = theta / 16.0;
  if (detuning != 0.0) width = std::min(width, kPi / (4.0 * std::abs(detuning)));

  const auto breaks = env_.breakpoints();
  std::vector<double> edges{breaks.front()};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    quad::append_uniform(edges, breaks[i], breaks[i + 1], width);
  }

  auto integrand = [&](double t) {
    return kI * excited(t) * std::polar(1.0, -detuning * t);
  };
  quad::Options opt;
  opt.rel_tol = quad_tol_;
  opt.abs_tol = 1e-6 * quad_tol_ * theta;
  const auto pulse = quad::integrate(integrand, std::span<const double>(edges), opt);
  return pulse.value +
         kI * final_excited_ / complex(params_.gamma, detuning);
}

complex amplitude_numeric(const Envelope& env, double detuning,
                          const SystemParams& params, double quad_tol) {
  return NumericAmplitude(env, params, quad_tol)(detuning);
}

SpectralAmplitude::SpectralAmplitude(Envelope env, SystemParams params,
                                     double quad_tol)
    : numeric_(std::move(env), params, quad_tol),
      closed_form_(numeric_.envelope().kind() == EnvelopeKind::Rectangular &&
                   std::abs(numeric_.envelope().rate() - params.omega) <=
                       1e-12 * params.omega) {}

complex SpectralAmplitude::operator()(double detuning) const {
  if (closed_form_) return amplitude_rect(detuning, numeric_.params());
  return numeric_(detuning);
}

std::string_view to_string(Normalization mode) {
  return mode == Normalization::ExactUnit ? "exact" : "paper";
}

double Spectrum::integral() const {
  double sum = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    sum += 0.5 * (grid[i] - grid[i - 1]) * (density[i] + density[i - 1]);
  }
  if (!grid.empty()) {
    if (tail_right > 0.0) sum += tail_right / (3.0 * std::pow(grid.back(), 3));
    if (tail_left > 0.0) {
      sum += tail_left / (3.0 * std::pow(-grid.front(), 3));
    }
  }
  return sum;
}

double windowed_quartic_mean(const SpectralAmplitude& amplitude, double lo,
                             double hi) {
  if (!(hi > lo)) throw std::invalid_argument("empty averaging window");
  const double period = 2.0 * kPi / amplitude.envelope().duration();
  std::vector<double> edges{lo};
  quad::append_uniform(edges, lo, hi, period / 8.0);
  quad::Options opt;
  opt.rel_tol = 1e-9;
  opt.abs_tol = 0.0;
  const auto r = quad::integrate(
      [&](double d) {
        const double d2 = d * d;
        return amplitude.intensity(d) * d2 * d2;
      },
      std::span<const double>(edges), opt);
  return r.value / (hi - lo);
}

namespace {

void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("detuning grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("detuning grid must be strictly ascending");
    }
  }
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += threads) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

Spectrum build_spectrum(const Envelope& env, const SystemParams& params,
                        std::span<const double> grid,
                        Normalization normalization, double quad_tol,
                        unsigned threads) {
  validate_grid(grid);
  const SpectralAmplitude amplitude(env, params, quad_tol);

  Spectrum out;
  out.grid.assign(grid.begin(), grid.end());
  out.density.resize(grid.size());
  out.normalization = normalization;
  parallel_for(grid.size(), threads,
               [&](std::size_t i) { out.density[i] = amplitude.intensity(grid[i]); });

  const double period = 2.0 * kPi / env.duration();
  if (grid.back() > 0.0) {
    const double hi = grid.back();
    out.tail_right = windowed_quartic_mean(amplitude, std::max(hi - period, 0.5 * hi), hi);
  }
  if (grid.front() < 0.0) {
    const double lo = grid.front();
    out.tail_left = windowed_quartic_mean(amplitude, lo, std::min(lo + period, 0.5 * lo));
  }

  if (normalization == Normalization::PaperApprox) {
    out.constant = params.gamma / kPi;
  } else {
    if (!(grid.front() < 0.0 && grid.back() > 0.0)) {
      throw std::invalid_argument(
          "exact normalization needs a grid with negative and positive detunings");
    }
    out.constant = 1.0;
    out.constant = 1.0 / out.integral();
  }
  for (auto& s : out.density) s *= out.constant;
  out.tail_left *= out.constant;
  out.tail_right *= out.constant;
  return out;
}

Spectrum lorentzian_spectrum(std::span<const double> grid, double gamma) {
  validate_grid(grid);
  Spectrum out;
  out.grid.assign(grid.begin(), grid.end());
  out.density.reserve(grid.size());
  for (const double d : grid) out.density.push_back(lorentzian(d, gamma));
  out.normalization = Normalization::ExactUnit;
  out.constant = 1.0;
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count < 2 || !(hi > lo)) {
    throw std::invalid_argument("grid needs lo < hi and at least two points");
  }
  std::vector<double> g(count);
  const double span = hi - lo;
  const double last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = lo + span * static_cast<double>(i) / last;
  }
  g.back() = hi;
  return g;
}

}  // namespace natline
