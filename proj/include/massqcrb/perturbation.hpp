#pragma once

#include <cmath>
#include <stdexcept>

namespace massqcrb {

// Relative frequency shift of the oscillator after mass adsorption:
// the perturbed frequency is w~ = w*(1 - epsilon), with
// epsilon = (1/2) * dM/M for a small added mass dM (stiffness unchanged).
//
// Only epsilon >= 0 is meaningful here (mass is added, never removed), and
// epsilon < 1 keeps the perturbed frequency positive.
class Perturbation {
 public:
  explicit Perturbation(double epsilon) : epsilon_(epsilon) {
    if (!(epsilon >= 0.0) || !(epsilon < 1.0))
      throw std::invalid_argument(
          "Perturbation: epsilon must satisfy 0 <= epsilon < 1 (added mass only)");
  }

  double epsilon() const { return epsilon_; }

  // Frequency ratio w~/w.
  double omega_ratio() const { return 1.0 - epsilon_; }

  // Mismatch parameter y = (w - w~)/(w + w~) of the two-frequency overlap.
  double y() const { return epsilon_ / (2.0 - epsilon_); }

  // Geometric-mean parameter q = 2*sqrt(w*w~)/(w + w~), equal to 1 at epsilon = 0.
  double q() const { return 2.0 * std::sqrt(1.0 - epsilon_) / (2.0 - epsilon_); }

  // The relative mass change this shift encodes, dM/M = 2*epsilon.
  double delta_m_over_m() const { return 2.0 * epsilon_; }

 private:
  double epsilon_;
};

// Dimensionless evolution time tau = w * t (phase accumulated at the
// unperturbed frequency).
struct EvolutionTime {
  double tau = 0.0;

  explicit EvolutionTime(double t) : tau(t) {
    if (!std::isfinite(t) || t < 0.0)
      throw std::invalid_argument("EvolutionTime: tau must be finite and >= 0");
  }
};

}  // namespace massqcrb
