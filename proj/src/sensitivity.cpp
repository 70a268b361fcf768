#include "massqcrb/sensitivity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace massqcrb {

SensitivityResult min_mass_ratio(double f, std::int64_t n_measurements, double tau) {
  constexpr double kZeroTol = 1e-12;  // round-off allowance on f <= 0
  if (!std::isfinite(f) || f > kZeroTol)
    throw std::invalid_argument(
        "min_mass_ratio: Fisher coefficient must be <= 0 within round-off");
  if (n_measurements < 1)
    throw std::invalid_argument("min_mass_ratio: need at least one measurement");

  SensitivityResult r;
  r.f_value = f;
  r.tau = tau;
  r.n_measurements = n_measurements;
  if (std::abs(f) <= kZeroTol) {
    r.infinite = true;
    r.delta_m_over_m = std::numeric_limits<double>::infinity();
  } else {
    r.delta_m_over_m =
        1.0 / (std::sqrt(static_cast<double>(n_measurements)) * std::sqrt(-f));
  }
  return r;
}

}  // namespace massqcrb
