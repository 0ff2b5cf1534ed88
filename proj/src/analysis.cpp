#include "natline/analysis.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_expint.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "natline/errors.hpp"
#include "natline/quadrature.hpp"

namespace natline {

namespace {

constexpr double kPi = std::numbers::pi;

// Ascending edges on [a, b] (0 <= a < b): octaves of the core width plus a
// cap on the panel width.
std::vector<double> half_line_edges(double a, double b, double width,
                                    double max_width) {
  std::vector<double> marks{a};
  for (double x = 0.25 * width; x < b; x *= 2.0) {
    if (x > a) marks.push_back(x);
  }
  marks.push_back(b);
  std::vector<double> edges{a};
  for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
    quad::append_uniform(edges, marks[i], marks[i + 1], max_width);
  }
  return edges;
}

std::vector<double> symmetric_edges(double d, double width, double max_width) {
  const auto half = half_line_edges(0.0, d, width, max_width);
  std::vector<double> edges;
  edges.reserve(2 * half.size());
  for (auto it = half.rbegin(); it != half.rend(); ++it) edges.push_back(-*it);
  edges.insert(edges.end(), half.begin() + 1, half.end());
  return edges;
}

double panel_cap(const SpectrumSource& src) {
  return src.period > 0.0 ? 0.25 * src.period : 0.0;
}

template <class F>
double integrate_real(F&& f, std::span<const double> edges, double rel_tol,
                      double abs_tol) {
  quad::Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = abs_tol;
  return quad::integrate(std::forward<F>(f), edges, opt).value;
}

const char* order_name(int order) {
  switch (order) {
    case 0:
      return "zeroth";
    case 1:
      return "first";
    case 2:
      return "second";
    default:
      return "higher";
  }
}

// Declared tail, or one estimated from the decay between D/4 and D.
PowerTail resolve_tail(const SpectrumSource& src, double rel_tol,
                       double* estimated_power = nullptr) {
  if (src.tail) {
    if (estimated_power) *estimated_power = src.tail->power;
    return *src.tail;
  }
  const double d = src.extent;
  if (!(d > 0.0)) {
    throw std::invalid_argument(
        "spectrum source needs a declared tail or a positive extent");
  }
  const double cap = panel_cap(src);
  auto window = [&](double lo, double hi) {
    const auto edges = half_line_edges(lo, hi, src.width, cap);
    return integrate_real(src.density, edges, rel_tol, 0.0);
  };
  auto window_left = [&](double lo, double hi) {
    const auto edges = half_line_edges(lo, hi, src.width, cap);
    return integrate_real([&](double x) { return src.density(-x); }, edges,
                          rel_tol, 0.0);
  };
  const double inner_r = window(0.25 * d, 0.5 * d);
  const double outer_r = window(0.5 * d, d);
  const double inner_l = window_left(0.25 * d, 0.5 * d);
  const double outer_l = window_left(0.5 * d, d);

  auto exponent = [](double inner, double outer) {
    if (outer <= 0.0) return std::numeric_limits<double>::infinity();
    if (inner <= 0.0) return 0.0;
    return 1.0 - std::log2(outer / inner);
  };
  const double p = std::min(exponent(inner_r, outer_r),
                            exponent(inner_l, outer_l));
  if (estimated_power) *estimated_power = p;

  PowerTail tail;
  tail.cutoff = d;
  if (!std::isfinite(p)) {
    tail.power = 2;
    return tail;
  }
  tail.power = std::max(2, static_cast<int>(std::lround(p)));
  const double n = tail.power;
  const double basis = (std::pow(0.5 * d, 1.0 - n) - std::pow(d, 1.0 - n)) / (n - 1.0);
  tail.coeff_right = outer_r / basis;
  tail.coeff_left = outer_l / basis;
  return tail;
}

// int_D^inf x^{order - power} dx, both sides, with the parity of the left.
double tail_moment(const PowerTail& tail, int order, double from) {
  const double k = order - tail.power + 1;
  const double base = -std::pow(from, k) / k;
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;
  return base * (tail.coeff_right + sign * tail.coeff_left);
}

// |F|^2 is even for real envelopes, so values are cached by |Delta|. The
// moment, normalization and tail passes revisit the same quadrature nodes.
class CachedIntensity {
 public:
  explicit CachedIntensity(std::shared_ptr<const SpectralAmplitude> amp)
      : amp_(std::move(amp)), state_(std::make_shared<State>()) {}

  double operator()(double d) const {
    const double key = std::abs(d);
    {
      std::lock_guard lock(state_->mutex);
      auto it = state_->values.find(key);
      if (it != state_->values.end()) return it->second;
    }
    const double v = amp_->intensity(key);
    std::lock_guard lock(state_->mutex);
    state_->values.emplace(key, v);
    return v;
  }

 private:
  struct State {
    std::mutex mutex;
    std::unordered_map<double, double> values;
  };
  std::shared_ptr<const SpectralAmplitude> amp_;
  std::shared_ptr<State> state_;
};

}  // namespace

double default_delta_max(const SystemParams& params) {
  return 1e3 * std::max(params.omega, params.gamma);
}

SpectrumSource lorentzian_source(double gamma, double delta_max) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (delta_max <= 0.0) delta_max = 1e3 * gamma;
  SpectrumSource src;
  src.name = "lorentzian";
  src.density = [gamma](double d) { return lorentzian(d, gamma); };
  src.tail = PowerTail{2, gamma / kPi, gamma / kPi, delta_max};
  src.width = gamma;
  src.extent = delta_max;
  return src;
}

SpectrumSource mollow_source(const SystemParams& params, double delta_max) {
  if (delta_max <= 0.0) delta_max = default_delta_max(params);
  const double g = params.gamma;
  const double c = 2.0 * g * g * g / kPi;
  SpectrumSource src;
  src.name = "mollow";
  src.density = [params](double d) {
    return mollow_incoherent_normalized(d, params);
  };
  src.tail = PowerTail{4, c, c, delta_max};
  src.width = g;
  src.extent = delta_max;
  return src;
}

SpectrumSource envelope_source(const Envelope& env, const SystemParams& params,
                               Normalization normalization, double delta_max,
                               double quad_tol) {
  if (delta_max <= 0.0) delta_max = default_delta_max(params);
  const double period = 2.0 * kPi / env.duration();
  if (!(delta_max > 2.0 * period)) {
    throw std::invalid_argument(
        "delta_max must exceed two oscillation periods of the spectrum");
  }
  auto amp = std::make_shared<const SpectralAmplitude>(env, params, quad_tol);

  PowerTail tail;
  tail.power = 4;
  tail.cutoff = delta_max;
  tail.coeff_right = windowed_quartic_mean(*amp, delta_max - period, delta_max);
  tail.coeff_left = windowed_quartic_mean(*amp, -delta_max, -delta_max + period);

  SpectrumSource src;
  src.name = std::string(to_string(env.kind()));
  src.width = params.gamma;
  src.period = period;
  src.extent = delta_max;
  src.tail = tail;
  const CachedIntensity intensity(amp);
  src.density = intensity;

  double n = params.gamma / kPi;
  if (normalization == Normalization::ExactUnit) {
    n = 1.0 / spectral_moment(src, 0);
  }
  src.tail->coeff_right *= n;
  src.tail->coeff_left *= n;
  src.density = [intensity, n](double d) { return n * intensity(d); };
  return src;
}

double spectral_moment(const SpectrumSource& source, int order,
                       double rel_tol) {
  if (order < 0) throw std::invalid_argument("moment order must be >= 0");
  double power = 0.0;
  const PowerTail tail = resolve_tail(source, rel_tol, &power);
  if (power - order <= 1.0 + (source.tail ? 0.0 : 0.25)) {
    throw DivergentMoment(std::string("divergent ") + order_name(order) +
                              " moment: spectral wings decay too slowly",
                          order);
  }
  const double d = tail.cutoff;
  const auto edges = symmetric_edges(d, source.width, panel_cap(source));
  double abs_tol = 0.0;
  if (order % 2 == 1) {
    // Odd moments of symmetric lines vanish; measure against <|Delta|>-ish.
    const auto abs_edges = half_line_edges(0.0, d, source.width, panel_cap(source));
    const double scale = integrate_real(
        [&](double x) {
          return std::pow(x, order) * (source.density(x) + source.density(-x));
        },
        abs_edges, 1e-6, 0.0);
    abs_tol = rel_tol * scale;
  }
  const double inner = integrate_real(
      [&](double x) {
        double w = source.density(x);
        for (int k = 0; k < order; ++k) w *= x;
        return w;
      },
      edges, rel_tol, abs_tol);
  return inner + tail_moment(tail, order, d);
}

namespace {

double outside_weight(const SpectrumSource& source, double cutoff,
                      double rel_tol) {
  if (!(cutoff > 0.0)) throw std::invalid_argument("cutoff must be positive");
  const PowerTail tail = resolve_tail(source, rel_tol);
  const double d = tail.cutoff;
  if (cutoff >= d) return tail_moment(tail, 0, cutoff);
  const auto edges = half_line_edges(cutoff, d, source.width, panel_cap(source));
  const double right = integrate_real(source.density, edges, rel_tol, 0.0);
  const double left = integrate_real([&](double x) { return source.density(-x); },
                                     edges, rel_tol, 0.0);
  return right + left + tail_moment(tail, 0, d);
}

}  // namespace

double tail_fraction(const SpectrumSource& source, double cutoff,
                     double rel_tol) {
  const double outside = outside_weight(source, cutoff, rel_tol);
  return outside / spectral_moment(source, 0, rel_tol);
}

MomentsReport moments(const SpectrumSource& source, const SystemParams& params,
                      const MomentOptions& options) {
  MomentsReport r;
  r.total = spectral_moment(source, 0, options.rel_tol);
  // Second moment before the first so a Lorentzian fails on the dispersion.
  const double m2 = spectral_moment(source, 2, options.rel_tol);
  const double m1 = spectral_moment(source, 1, options.rel_tol);
  r.mean_detuning = m1 / r.total;
  r.dispersion = m2 / r.total - r.mean_detuning * r.mean_detuning;
  r.zeno_time = 1.0 / std::sqrt(r.dispersion);
  r.jump_time = params.big_gamma() * r.zeno_time * r.zeno_time;
  r.delta_max = source.delta_max();
  r.tail_cutoff = options.tail_cutoff > 0.0 ? options.tail_cutoff : params.omega;
  r.tail_fraction = outside_weight(source, r.tail_cutoff, options.rel_tol) / r.total;
  return r;
}

double lorentzian_tail_fraction(double cutoff, double gamma) {
  return 1.0 - (2.0 / kPi) * std::atan(cutoff / gamma);
}

OscillatoryTail power_tail_transform(int n, double d, double t) {
  if (n < 1) throw std::invalid_argument("tail power must be >= 1");
  if (!(d > 0.0)) throw std::invalid_argument("tail start must be positive");
  if (t < 0.0) {
    auto r = power_tail_transform(n, d, -t);
    return {r.cos_part, -r.sin_part};
  }
  if (t == 0.0) {
    if (n == 1) throw std::domain_error("divergent cosine tail integral");
    return {std::pow(d, 1.0 - n) / (n - 1.0), 0.0};
  }
  const double u = d * t;
  gsl_sf_result si{}, ci{};
  const auto old = gsl_set_error_handler_off();
  const int s1 = gsl_sf_Si_e(u, &si);
  const int s2 = gsl_sf_Ci_e(u, &ci);
  gsl_set_error_handler(old);
  if (s1 != GSL_SUCCESS || s2 != GSL_SUCCESS) {
    throw std::domain_error("sine/cosine integral evaluation failed");
  }
  OscillatoryTail cur{-ci.val, 0.5 * kPi - si.val};
  const double cu = std::cos(u);
  const double su = std::sin(u);
  for (int m = 2; m <= n; ++m) {
    const double k = m - 1.0;
    const double edge = std::pow(d, -k) / k;
    cur = OscillatoryTail{cu * edge - (t / k) * cur.sin_part,
                          su * edge + (t / k) * cur.cos_part};
  }
  return cur;
}

std::vector<double> decay_law(const SpectrumSource& source,
                              std::span<const double> times, double rel_tol) {
  const PowerTail tail = resolve_tail(source, rel_tol);
  if (tail.power < 2) {
    throw DivergentMoment("spectrum is not normalizable", 0);
  }
  const double d = tail.cutoff;
  std::vector<double> phi;
  phi.reserve(times.size());
  for (const double t : times) {
    if (!(t >= 0.0)) throw std::invalid_argument("decay times must be >= 0");
    double cap = panel_cap(source);
    if (t > 0.0) {
      const double kernel = kPi / (4.0 * t);
      cap = cap > 0.0 ? std::min(cap, kernel) : kernel;
    }
    const auto edges = symmetric_edges(d, source.width, cap);
    quad::Options opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = 1e-3 * rel_tol;
    const auto inner = quad::integrate(
        [&](double x) { return source.density(x) * std::polar(1.0, -x * t); },
        std::span<const double>(edges), opt);
    const auto ft = power_tail_transform(tail.power, d, t);
    const complex wings =
        tail.coeff_right * complex(ft.cos_part, -ft.sin_part) +
        tail.coeff_left * complex(ft.cos_part, ft.sin_part);
    phi.push_back(std::norm(inner.value + wings));
  }
  return phi;
}

double ShortTimeFit::zeno_time() const { return 1.0 / std::sqrt(quadratic); }

ShortTimeFit fit_short_time(std::span<const double> times,
                            std::span<const double> phi) {
  if (times.size() != phi.size() || times.size() < 3) {
    throw std::invalid_argument("short-time fit needs matching samples");
  }
  // Normal equations for y = a s^2 + b s^3 with s = t / t_max.
  const double scale = *std::max_element(times.begin(), times.end());
  if (!(scale > 0.0)) throw std::invalid_argument("short-time fit needs t > 0");
  double s44 = 0, s45 = 0, s55 = 0, r4 = 0, r5 = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double s2 = (times[i] / scale) * (times[i] / scale);
    const double s3 = s2 * (times[i] / scale);
    const double y = 1.0 - phi[i];
    s44 += s2 * s2;
    s45 += s2 * s3;
    s55 += s3 * s3;
    r4 += s2 * y;
    r5 += s3 * y;
  }
  const double det = s44 * s55 - s45 * s45;
  if (!(std::abs(det) > 0.0)) {
    throw std::invalid_argument("short-time fit is degenerate");
  }
  ShortTimeFit fit;
  fit.quadratic = (r4 * s55 - r5 * s45) / det / (scale * scale);
  fit.cubic = (s44 * r5 - s45 * r4) / det / (scale * scale * scale);
  return fit;
}

}  // namespace natline
