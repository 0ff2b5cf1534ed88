#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "natline/dynamics.hpp"
#include "natline/envelope.hpp"
#include "natline/spectra.hpp"

namespace natline {

/// Declared asymptote: density ~ C / |Delta|^power for |Delta| > cutoff.
struct PowerTail {
  int power = 4;
  double coeff_right = 0.0;
  double coeff_left = 0.0;
  double cutoff = 0.0;
};

/// A spectral density together with what is known about its wings.
///
/// `period` is the oscillation period of the density in detuning (zero if
/// it does not oscillate) and `width` the scale of its central peak; both
/// only steer panel placement. `extent` is the integration limit used when
/// no tail is declared.
struct SpectrumSource {
  std::string name;
  std::function<double(double)> density;
  std::optional<PowerTail> tail;
  double width = 1.0;
  double period = 0.0;
  double extent = 0.0;

  double operator()(double detuning) const { return density(detuning); }
  double delta_max() const { return tail ? tail->cutoff : extent; }
};

/// Default integration limit: 1e3 * max(Omega, gamma).
double default_delta_max(const SystemParams& params);

/// Unit-area Lorentzian with its 1/Delta^2 wings declared.
SpectrumSource lorentzian_source(double gamma = 1.0, double delta_max = 0.0);

/// Unit-area incoherent Mollow spectrum with its 1/Delta^4 wings declared.
SpectrumSource mollow_source(const SystemParams& params, double delta_max = 0.0);

/// N |F|^2 for a pi pulse. Wings are declared as C/Delta^4 with C the mean
/// of N |F|^2 Delta^4 over the last full oscillation period before
/// delta_max (default_delta_max when zero). ExactUnit normalization makes
/// the quadrature-plus-tail integral equal 1; PaperApprox uses N = gamma/pi.
SpectrumSource envelope_source(const Envelope& env, const SystemParams& params,
                               Normalization normalization =
                                   Normalization::ExactUnit,
                               double delta_max = 0.0, double quad_tol = 1e-10);

struct MomentsReport {
  double total = 0.0;
  double mean_detuning = 0.0;
  double dispersion = 0.0;  ///< <Delta^2> - <Delta>^2
  double zeno_time = 0.0;   ///< dispersion^{-1/2}
  double jump_time = 0.0;   ///< Gamma * zeno_time^2
  double delta_max = 0.0;
  double tail_cutoff = 0.0;
  double tail_fraction = 0.0;  ///< weight beyond |Delta| > tail_cutoff
};

struct MomentOptions {
  double tail_cutoff = 0.0;  ///< defaults to params.omega
  double rel_tol = 1e-10;
};

/// Integral of Delta^order * S over the whole line: adaptive quadrature on
/// |Delta| <= delta_max plus closed-form integrals of the declared tail.
/// Throws DivergentMoment when the tail is not integrable at this order.
/// Sources without a declared tail get one estimated from the decay of the
/// density between delta_max/4 and delta_max.
double spectral_moment(const SpectrumSource& source, int order,
                       double rel_tol = 1e-10);

/// Total weight, mean, dispersion, Zeno time and quantum-jump time.
MomentsReport moments(const SpectrumSource& source, const SystemParams& params,
                      const MomentOptions& options = {});

/// Fraction of the total weight with |Delta| > cutoff.
double tail_fraction(const SpectrumSource& source, double cutoff,
                     double rel_tol = 1e-10);

/// Closed form 1 - (2/pi) atan(cutoff/gamma) for the Lorentzian.
double lorentzian_tail_fraction(double cutoff, double gamma = 1.0);

/// Survival probability |int W(Delta) e^{-i Delta t} dDelta|^2 for each
/// t >= 0. W must have unit area. Panels are no wider than pi/(4 t); the
/// declared tail is transformed analytically.
std::vector<double> decay_law(const SpectrumSource& source,
                              std::span<const double> times,
                              double rel_tol = 1e-10);

/// Least-squares fit of 1 - Phi(t) = a t^2 + b t^3 on short times.
/// The cubic term absorbs the |t|^3 contribution of 1/Delta^4 wings.
struct ShortTimeFit {
  double quadratic = 0.0;
  double cubic = 0.0;
  double zeno_time() const;
};

ShortTimeFit fit_short_time(std::span<const double> times,
                            std::span<const double> phi);

/// int_D^inf cos(x t) / x^n dx and int_D^inf sin(x t) / x^n dx for n >= 1,
/// t >= 0 (the n = 1 cosine integral requires t > 0).
struct OscillatoryTail {
  double cos_part;
  double sin_part;
};
OscillatoryTail power_tail_transform(int n, double d, double t);

}  // namespace natline
