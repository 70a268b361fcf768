#include "massqcrb/physical.hpp"

#include <cmath>
#include <stdexcept>

#include "massqcrb/fisher.hpp"
#include "massqcrb/sensitivity.hpp"

namespace massqcrb {

PhysicalResult physical_min_mass(const PhysicalSpec& spec) {
  auto require_positive = [](double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0)
      throw std::invalid_argument(std::string("physical_min_mass: ") + name +
                                  " must be positive");
  };
  require_positive(spec.mass_g, "mass_g");
  require_positive(spec.omega_rad_s, "omega_rad_s");
  require_positive(spec.time_s, "time_s");
  if (spec.quanta.has_value() == spec.amplitude_m.has_value())
    throw std::invalid_argument(
        "physical_min_mass: give exactly one of quanta / amplitude_m");
  if (spec.quanta) require_positive(*spec.quanta, "quanta");
  if (spec.amplitude_m) require_positive(*spec.amplitude_m, "amplitude_m");
  if (spec.n_measurements < 1)
    throw std::invalid_argument(
        "physical_min_mass: n_measurements must be >= 1");

  PhysicalResult out;
  out.tau = spec.omega_rad_s * spec.time_s;
  const double mass_kg = spec.mass_g * 1e-3;
  out.x0_m =
      std::sqrt(constants::hbar_joule_seconds / (mass_kg * spec.omega_rad_s));
  out.alpha = spec.quanta ? std::sqrt(*spec.quanta)
                          : *spec.amplitude_m / (std::sqrt(2.0) * out.x0_m);
  out.f_value = f_coherent(out.alpha, out.tau);

  const SensitivityResult bound =
      min_mass_ratio(out.f_value, spec.n_measurements, out.tau);
  out.delta_m_over_m = bound.delta_m_over_m;
  out.infinite = bound.infinite;
  out.delta_m_g = spec.mass_g * bound.delta_m_over_m;
  out.delta_m_electron_masses =
      out.delta_m_g / constants::electron_mass_grams;
  return out;
}

}  // namespace massqcrb
