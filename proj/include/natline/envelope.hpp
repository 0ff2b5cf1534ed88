#pragma once

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace natline {

enum class EnvelopeKind { Rectangular, Sine, Tabulated };

std::string_view to_string(EnvelopeKind kind);

/// One row of a tabulated envelope: time (units of 1/gamma) and Rabi rate.
struct EnvelopeSample {
  double t;
  double omega;
};

/// Time-dependent Rabi rate Omega(t) of a resonant pi pulse.
///
/// The support is [-duration, 0]: the pulse ends at t = 0 and free decay
/// follows. Outside the support the envelope is identically zero.
///
/// For the sine kind, rate() is the parameter of
/// Omega(t) = -(pi/2) * rate * sin(rate * t), whose peak value is
/// (pi/2) * rate. For the tabulated kind rate() is pi / duration, so that
/// duration == pi / rate holds for every kind.
class Envelope {
 public:
  static Envelope rectangular(double rate);
  static Envelope sine(double rate);

  /// Validates ordering and the pi-pulse area condition (relative 1e-6).
  /// The table must end at t = 0.
  static Envelope tabulated(std::vector<EnvelopeSample> table);

  /// Reads whitespace-separated `t omega` rows. Lines starting with '#'
  /// and blank lines are skipped.
  static Envelope from_file(const std::filesystem::path& path);

  EnvelopeKind kind() const noexcept { return kind_; }
  double rate() const noexcept { return rate_; }
  double duration() const noexcept { return duration_; }
  std::span<const EnvelopeSample> table() const noexcept { return table_; }

  /// Omega(t); zero outside [-duration, 0].
  double evaluate(double t) const;
  double operator()(double t) const { return evaluate(t); }

  /// Accumulated pulse area A(t) = integral of Omega from -duration to t.
  /// t is clamped to the support.
  double area(double t) const;

  /// Times where Omega(t) may have a kink, including both support ends.
  std::vector<double> breakpoints() const;

 private:
  Envelope(EnvelopeKind kind, double rate, double duration,
           std::vector<EnvelopeSample> table);

  EnvelopeKind kind_;
  double rate_;
  double duration_;
  std::vector<EnvelopeSample> table_;
  std::vector<double> cumulative_area_;
};

}  // namespace natline
