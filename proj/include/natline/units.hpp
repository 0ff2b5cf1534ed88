#pragma once

#include <optional>

// Gaussian (CGS) units throughout; conversions to SI happen only in the
// reporting helpers at the bottom.

namespace natline::units {

namespace cgs {
inline constexpr double electron_charge = 4.8032e-10;  // statC
inline constexpr double electron_mass = 9.1094e-28;    // g
inline constexpr double hbar = 1.0546e-27;             // erg s
inline constexpr double speed_of_light = 2.9979e10;    // cm/s
}  // namespace cgs

/// Electric-dipole spontaneous emission rate in 1/s,
/// Gamma = 4 e^2 omega0 p12^2 / (3 hbar c^3 m^2), from the transition
/// frequency [rad/s] and the momentum matrix element [g cm/s].
double emission_rate(double omega0, double p12);

/// Field envelope amplitude [statvolt/cm] giving Rabi frequency `rabi`,
/// E = rabi m omega0 hbar / (e p12).
double rabi_to_field(double rabi, double omega0, double p12);
double field_to_rabi(double field, double omega0, double p12);

/// Cycle-averaged plane-wave flux c E^2 / (8 pi) in erg/(s cm^2).
double field_to_intensity(double field);

double erg_per_s_cm2_to_mw_per_cm2(double intensity);
double seconds_to_ns(double seconds);

struct PhysicalScenario {
  double omega0 = 0.0;         ///< transition frequency [rad/s]
  double p12 = 0.0;            ///< momentum matrix element [g cm/s]
  double dipole_rate = 0.0;    ///< emission_rate(omega0, p12) [1/s]
  double big_gamma = 0.0;      ///< rate that fixes gamma [1/s]
  double gamma = 0.0;          ///< big_gamma / 2 [1/s]
  double rabi = 0.0;           ///< Omega [rad/s]
  double field = 0.0;          ///< E [statvolt/cm]
  double intensity = 0.0;      ///< I [erg/(s cm^2)]
  double duration = 0.0;       ///< pi / Omega [s]

  double omega_over_gamma() const { return rabi / gamma; }
  double intensity_mw_per_cm2() const {
    return erg_per_s_cm2_to_mw_per_cm2(intensity);
  }
  double duration_ns() const { return seconds_to_ns(duration); }
};

/// Builds the laboratory picture of a rectangular pi pulse with
/// Omega = omega_ratio * gamma. `rate` fixes Gamma; when absent the dipole
/// rate is used. Throws std::invalid_argument for non-positive inputs.
PhysicalScenario make_scenario(double omega0, double p12, double omega_ratio,
                               std::optional<double> rate = std::nullopt);

}  // namespace natline::units
