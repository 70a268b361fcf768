#pragma once

#include <cstdint>
#include <optional>

namespace massqcrb {

// Dimensional constants used for unit conversion, kept in one place so the
// laboratory-unit results are reproducible to the last digit.
namespace constants {
inline constexpr double hbar_joule_seconds = 1.054571817e-34;
inline constexpr double electron_mass_grams = 9.1093837015e-28;
}  // namespace constants

// Laboratory description of a coherently driven oscillator: mass in grams,
// angular frequency in rad/s, free-evolution time in seconds, and the drive
// strength as exactly one of mean excitation number / position amplitude.
struct PhysicalSpec {
  double mass_g = 0.0;
  double omega_rad_s = 0.0;
  double time_s = 0.0;
  std::optional<double> quanta;       // mean excitation <n>
  std::optional<double> amplitude_m;  // oscillation amplitude in meters
  std::int64_t n_measurements = 1;
};

// The mass bound in laboratory units, with every derived quantity reported.
struct PhysicalResult {
  double tau = 0.0;     // omega * t, the dimensionless evolution phase
  double x0_m = 0.0;    // ground-state width sqrt(hbar / (M omega))
  double alpha = 0.0;   // coherent amplitude: sqrt(<n>) or x_amp/(sqrt(2) x0)
  double f_value = 0.0;
  double delta_m_over_m = 0.0;
  double delta_m_g = 0.0;
  double delta_m_electron_masses = 0.0;
  bool infinite = false;
};

// Minimal detectable absolute mass of a coherently driven oscillator, from
// the quantum bound on the relative resolution.  Throws std::invalid_argument
// on a non-positive field or when the excitation is not given exactly once.
PhysicalResult physical_min_mass(const PhysicalSpec& spec);

}  // namespace massqcrb
