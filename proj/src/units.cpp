#include "natline/units.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace natline::units {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) + " must be positive");
  }
}

}  // namespace

double emission_rate(double omega0, double p12) {
  require_positive(omega0, "transition frequency");
  require_positive(p12, "momentum matrix element");
  using namespace cgs;
  const double e2 = electron_charge * electron_charge;
  const double c3 = speed_of_light * speed_of_light * speed_of_light;
  return 4.0 * e2 * omega0 * p12 * p12 /
         (3.0 * hbar * c3 * electron_mass * electron_mass);
}

double rabi_to_field(double rabi, double omega0, double p12) {
  require_positive(rabi, "Rabi frequency");
  require_positive(omega0, "transition frequency");
  require_positive(p12, "momentum matrix element");
  using namespace cgs;
  return rabi * electron_mass * omega0 * hbar / (electron_charge * p12);
}

double field_to_rabi(double field, double omega0, double p12) {
  require_positive(field, "field amplitude");
  require_positive(omega0, "transition frequency");
  require_positive(p12, "momentum matrix element");
  using namespace cgs;
  return field * electron_charge * p12 / (electron_mass * omega0 * hbar);
}

double field_to_intensity(double field) {
  require_positive(field, "field amplitude");
  return cgs::speed_of_light * field * field / (8.0 * std::numbers::pi);
}

// 1 erg/s = 1e-7 W = 1e-4 mW.
double erg_per_s_cm2_to_mw_per_cm2(double intensity) { return intensity * 1e-4; }

double seconds_to_ns(double seconds) { return seconds * 1e9; }

PhysicalScenario make_scenario(double omega0, double p12, double omega_ratio,
                               std::optional<double> rate) {
  require_positive(omega_ratio, "Omega/gamma");
  PhysicalScenario s;
  s.omega0 = omega0;
  s.p12 = p12;
  s.dipole_rate = emission_rate(omega0, p12);
  if (rate) require_positive(*rate, "emission rate");
  s.big_gamma = rate.value_or(s.dipole_rate);
  s.gamma = 0.5 * s.big_gamma;
  s.rabi = omega_ratio * s.gamma;
  s.field = rabi_to_field(s.rabi, omega0, p12);
  s.intensity = field_to_intensity(s.field);
  s.duration = std::numbers::pi / s.rabi;
  return s;
}

}  // namespace natline::units
