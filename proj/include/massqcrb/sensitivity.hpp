#pragma once

#include <cstdint>

namespace massqcrb {

// Outcome of the quantum Cramer-Rao bound for relative mass resolution.
// When the Fisher coefficient vanishes (no information at this tau) the
// bound diverges and `infinite` is set; delta_m_over_m is then +inf.
struct SensitivityResult {
  double f_value = 0.0;          // Fisher coefficient used (f <= 0)
  double tau = 0.0;              // evolution phase the bound refers to
  std::int64_t n_measurements = 1;
  double delta_m_over_m = 0.0;   // dM_min / M = 1 / (sqrt(N) |f|^{1/2})
  bool infinite = false;
};

// dM_min/M = 1/(sqrt(N) * |f|^{1/2}) for N independent repetitions.
// f must be <= round-off tolerance (1e-12); |f| below that tolerance is
// treated as zero information and flagged infinite.
SensitivityResult min_mass_ratio(double f, std::int64_t n_measurements,
                                 double tau = 0.0);

}  // namespace massqcrb
