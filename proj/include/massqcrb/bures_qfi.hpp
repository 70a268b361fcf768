#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "massqcrb/density.hpp"
#include "massqcrb/sensitivity.hpp"

namespace massqcrb {

namespace detail {
class NearIdentityFidelity;
}

struct BuresDerivative {
  double value;
  double error_estimate;
};

// Reusable evaluator of d d_Bures(rho, rho_eps(tau))/d eps at eps -> 0+,
// by the two-step finite difference at eps0 and eps0/2 combined with
// Richardson extrapolation.  Construction precomputes the perturbation-
// dependent blocks, so sweeping tau is cheap.
class BuresDerivativeEvaluator {
 public:
  // Below this magnitude a derivative cannot be told from zero by the
  // finite-eps scheme.
  static constexpr double kResolutionFloor = 1e-8;

  explicit BuresDerivativeEvaluator(const DensityMatrix& initial,
                                    double eps0 = 1e-3);
  ~BuresDerivativeEvaluator();
  BuresDerivativeEvaluator(BuresDerivativeEvaluator&&) noexcept;
  BuresDerivativeEvaluator& operator=(BuresDerivativeEvaluator&&) noexcept;

  // Raw Richardson combination; never throws on step disagreement.
  BuresDerivative derivative_estimate(double tau) const;

  // Enforces the two steps agreeing within 1% whenever the value is
  // resolvable; throws std::runtime_error suggesting a different eps0.
  BuresDerivative derivative(double tau) const;

  double eps0() const { return eps0_; }

 private:
  double eps0_;
  std::unique_ptr<detail::NearIdentityFidelity> full_;
  std::unique_ptr<detail::NearIdentityFidelity> half_;
};

BuresDerivative bures_derivative(const DensityMatrix& initial, double tau,
                                 double eps0 = 1e-3);

// delta_M_min/M = 1/(sqrt(N) * d d_Bures/d eps) for the truncated thermal
// state; derivative magnitudes at or below the resolution floor (or within
// their own error bar of zero) are reported as the infinity flag.  The
// default step is tighter than for bures_derivative: the periodicity checks
// compare values across tau at parts in 1e6, which needs the quadratic
// Richardson residue pushed below that.
SensitivityResult thermal_min_mass(const ThermalSpec& spec, double tau,
                                   std::int64_t n_measurements,
                                   double eps0 = 2e-4);

struct ConvexityBound {
  double series;    // sum_n p_n sqrt((n^2+n+1)/2) |sin tau|
  double envelope;  // |sin tau| / (sqrt(2) (1 - e^{-z}))
};

ConvexityBound thermal_convexity_bound(const ThermalSpec& spec, double tau);

// Achievable width-measurement bound 2 sqrt(2/N) sinh z / (sinh z - z);
// +infinity when sinh z - z is indistinguishable from zero.
double x2_measurement_bound(const ThermalSpec& spec,
                            std::int64_t n_measurements);

// Classical error-propagation bound for measuring one observable:
// delta_M/M = 2 sqrt(var_at(0)/N) / |d mean_at/d eps| with the derivative by
// a positive-side finite difference at eps0 and eps0/2, Richardson-combined.
// Returns +infinity when the derivative sits below the noise floor.
double observable_cramer_rao(const std::function<double(double)>& mean_at,
                             const std::function<double(double)>& var_at,
                             std::int64_t n_measurements, double eps0 = 1e-4);

}  // namespace massqcrb
