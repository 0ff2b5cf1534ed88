#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "natline/dynamics.hpp"
#include "natline/envelope.hpp"

namespace natline {

/// Half-width (relative to Omega) of the window around Delta = +-Omega/2
/// in which the closed-form amplitude switches to its series expansion.
inline constexpr double kSingularWindow = 1e-4;

/// Unit-area Lorentzian (1/pi) gamma / (Delta^2 + gamma^2).
double lorentzian(double detuning, double gamma = 1.0);

/// Closed-form spectral amplitude for the rectangular pi pulse,
///   F = [2 Omega e^{i pi Delta/Omega} - 4 i Delta] / (Omega^2 - 4 Delta^2)
///       + 1 / (i Delta + gamma).
/// The first term has removable singularities at Delta = +-Omega/2; inside
/// kSingularWindow it is evaluated from its Taylor series about the limit.
complex amplitude_rect(double detuning, const SystemParams& params);

/// Large-detuning asymptote gamma Omega^2 / (4 pi Delta^4) of the
/// rectangular-pulse spectrum. Throws std::domain_error at Delta = 0.
double asymptote_rect(double detuning, const SystemParams& params);

/// Incoherent part of the weak-drive resonance-fluorescence spectrum,
///   (Omega^2 / 2 gamma^2) * 2 Omega^2 gamma / (Delta^2 + gamma^2)^2.
double mollow_incoherent(double detuning, const SystemParams& params);
/// The same line shape scaled to unit area: (2 gamma^3/pi)/(Delta^2+gamma^2)^2.
double mollow_incoherent_normalized(double detuning,
                                    const SystemParams& params);
/// Weight (Omega^2 / 2 gamma^2) * 2 pi of the coherent delta-function term.
double mollow_coherent_weight(const SystemParams& params);

/// Spectral amplitude of an arbitrary envelope by oscillatory quadrature:
///   F(Delta) = i int_{-theta}^{0} B(t) e^{-i Delta t} dt
///              + i B(0) / (gamma + i Delta).
/// Built-in envelopes take B(t) from the accumulated area; tabulated
/// envelopes integrate the amplitude equations once and reuse the dense
/// solution for every detuning. Panels are no wider than
/// min(theta/16, pi/(4 |Delta|)) and are refined until the quadrature error
/// estimate is below quad_tol relative to the pulse integral.
class NumericAmplitude {
 public:
  NumericAmplitude(Envelope env, SystemParams params, double quad_tol = 1e-10);

  complex operator()(double detuning) const;

  const Envelope& envelope() const noexcept { return env_; }
  const SystemParams& params() const noexcept { return params_; }

 private:
  complex excited(double t) const;

  Envelope env_;
  SystemParams params_;
  double quad_tol_;
  std::shared_ptr<const AmplitudeSolution> ode_;
  complex final_excited_;
};

/// One-shot convenience wrapper around NumericAmplitude.
complex amplitude_numeric(const Envelope& env, double detuning,
                          const SystemParams& params, double quad_tol = 1e-10);

/// |F|^2 evaluator that picks the closed form for rectangular pulses whose
/// rate matches params.omega and the numeric pipeline otherwise.
class SpectralAmplitude {
 public:
  SpectralAmplitude(Envelope env, SystemParams params, double quad_tol = 1e-10);

  complex operator()(double detuning) const;
  double intensity(double detuning) const { return std::norm((*this)(detuning)); }

  const Envelope& envelope() const noexcept { return numeric_.envelope(); }
  const SystemParams& params() const noexcept { return numeric_.params(); }
  bool closed_form() const noexcept { return closed_form_; }

 private:
  NumericAmplitude numeric_;
  bool closed_form_;
};

enum class Normalization {
  ExactUnit,    ///< N chosen so grid integral plus Delta^-4 tails equals 1
  PaperApprox,  ///< N = gamma / pi
};

std::string_view to_string(Normalization mode);

struct Spectrum {
  std::vector<double> grid;     ///< ascending detunings
  std::vector<double> density;  ///< N |F|^2 at each grid point
  Normalization normalization = Normalization::ExactUnit;
  double constant = 0.0;  ///< the N applied
  /// Tail constants C (density ~ C / Delta^4 beyond the grid), already
  /// scaled by N. Zero when the grid does not reach that side.
  double tail_left = 0.0;
  double tail_right = 0.0;

  /// Trapezoid integral over the grid plus the analytic Delta^-4 tails.
  double integral() const;
};

/// Evaluates N |F|^2 on the grid. Grid evaluation is split across `threads`
/// workers; each point is computed independently so the output does not
/// depend on the thread count. Throws std::invalid_argument for an empty or
/// non-ascending grid, and for ExactUnit normalization on a grid that does
/// not contain Delta = 0 strictly inside.
Spectrum build_spectrum(const Envelope& env, const SystemParams& params,
                        std::span<const double> grid,
                        Normalization normalization = Normalization::ExactUnit,
                        double quad_tol = 1e-10, unsigned threads = 1);

/// Lorentzian sampled on the grid (already unit area; constant = 1).
Spectrum lorentzian_spectrum(std::span<const double> grid, double gamma = 1.0);

/// Mean of |F|^2 Delta^4 over [lo, hi], by quadrature.
double windowed_quartic_mean(const SpectralAmplitude& amplitude, double lo,
                             double hi);

/// Uniform grid of `count` points on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

}  // namespace natline
