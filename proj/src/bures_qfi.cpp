#include "massqcrb/bures_qfi.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hp_fidelity.hpp"

namespace massqcrb {

namespace {

void check_eps0(double eps0) {
  if (!(eps0 >= 1e-5 && eps0 <= 1e-2))
    throw std::invalid_argument("bures derivative: eps0 must lie in [1e-5, 1e-2]");
}

// Spectral form of the initial state; an empty eigenvector matrix signals a
// state diagonal in the number basis (kept exact, no eigensolver noise).
struct SpectralForm {
  Eigen::VectorXd weights;
  Eigen::MatrixXcd eigvecs;
};

SpectralForm spectral_form(const DensityMatrix& rho) {
  SpectralForm out;
  const int d = rho.dim();
  double off = 0.0;
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i)
      if (i != j) off = std::max(off, std::abs(rho.matrix(i, j)));
  if (off < 1e-14) {
    out.weights = rho.matrix.diagonal().real().cwiseMax(0.0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("bures derivative: eigendecomposition failed");
  out.weights = es.eigenvalues().cwiseMax(0.0);
  out.eigvecs = es.eigenvectors();
  return out;
}

}  // namespace

BuresDerivativeEvaluator::BuresDerivativeEvaluator(const DensityMatrix& initial,
                                                   double eps0)
    : eps0_(eps0) {
  check_eps0(eps0);
  SpectralForm sf = spectral_form(initial);
  full_ = std::make_unique<detail::NearIdentityFidelity>(
      sf.weights, sf.eigvecs, Perturbation(eps0));
  half_ = std::make_unique<detail::NearIdentityFidelity>(
      sf.weights, sf.eigvecs, Perturbation(eps0 / 2.0));
}

BuresDerivativeEvaluator::~BuresDerivativeEvaluator() = default;
BuresDerivativeEvaluator::BuresDerivativeEvaluator(
    BuresDerivativeEvaluator&&) noexcept = default;
BuresDerivativeEvaluator& BuresDerivativeEvaluator::operator=(
    BuresDerivativeEvaluator&&) noexcept = default;

BuresDerivative BuresDerivativeEvaluator::derivative_estimate(double tau) const {
  const double g_full = std::sqrt(2.0 * full_->deficit(tau)) / eps0_;
  const double g_half = std::sqrt(2.0 * half_->deficit(tau)) / (eps0_ / 2.0);
  return {2.0 * g_half - g_full, std::abs(g_half - g_full)};
}

BuresDerivative BuresDerivativeEvaluator::derivative(double tau) const {
  BuresDerivative est = derivative_estimate(tau);
  if (std::abs(est.value) > kResolutionFloor &&
      est.error_estimate > 0.01 * std::abs(est.value)) {
    std::ostringstream msg;
    msg << "bures derivative did not converge at tau=" << tau << " (value "
        << est.value << ", step disagreement " << est.error_estimate
        << "); try a different eps0";
    throw std::runtime_error(msg.str());
  }
  return est;
}

BuresDerivative bures_derivative(const DensityMatrix& initial, double tau,
                                 double eps0) {
  return BuresDerivativeEvaluator(initial, eps0).derivative(tau);
}

SensitivityResult thermal_min_mass(const ThermalSpec& spec, double tau,
                                   std::int64_t n_measurements, double eps0) {
  if (n_measurements < 1)
    throw std::invalid_argument("thermal_min_mass: need at least one measurement");
  DensityMatrix rho = thermal_state(spec);
  BuresDerivativeEvaluator eval(rho, eps0);
  BuresDerivative est = eval.derivative_estimate(tau);

  // Indistinguishable from zero: no information at this tau.  A value within
  // a few of its own uncertainties is a zero measurement, not a failed one —
  // the true derivative vanishes at multiples of pi (diagonal states carry a
  // pure-sine information profile) and the probe only sees round-off there.
  if (std::abs(est.value) <=
      std::max(BuresDerivativeEvaluator::kResolutionFloor,
               4.0 * est.error_estimate)) {
    SensitivityResult r;
    r.f_value = 0.0;
    r.tau = tau;
    r.n_measurements = n_measurements;
    r.delta_m_over_m = std::numeric_limits<double>::infinity();
    r.infinite = true;
    return r;
  }
  if (est.error_estimate > 0.01 * std::abs(est.value)) {
    std::ostringstream msg;
    msg << "thermal_min_mass: derivative not converged at tau=" << tau
        << "; try a different eps0";
    throw std::runtime_error(msg.str());
  }
  return min_mass_ratio(-est.value * est.value, n_measurements, tau);
}

ConvexityBound thermal_convexity_bound(const ThermalSpec& spec, double tau) {
  EvolutionTime t(tau);
  Eigen::VectorXd p = thermal_weights(spec.z, spec.dim);
  p /= p.sum();
  const double sin_abs = std::abs(std::sin(tau));
  double series = 0.0;
  for (int n = spec.dim - 1; n >= 0; --n)  // ascending magnitudes
    series += p(n) * std::sqrt((static_cast<double>(n) * n + n + 1.0) / 2.0);
  series *= sin_abs;
  const double envelope = sin_abs / (std::sqrt(2.0) * -std::expm1(-spec.z));
  return {series, envelope};
}

double x2_measurement_bound(const ThermalSpec& spec,
                            std::int64_t n_measurements) {
  if (!(spec.z > 0.0))
    throw std::invalid_argument("x2_measurement_bound: z must be positive");
  if (n_measurements < 1)
    throw std::invalid_argument("x2_measurement_bound: need at least one measurement");
  const double sh = std::sinh(spec.z);
  const double base = 2.0 * std::sqrt(2.0 / static_cast<double>(n_measurements));
  if (std::isinf(sh)) return base;  // z huge: the ratio limits to 1
  double denom;
  if (spec.z < 0.5) {
    // sinh z - z by its series; the direct subtraction sheds all of its
    // leading digits here.
    const double z2 = spec.z * spec.z;
    double term = spec.z * z2 / 6.0;
    denom = 0.0;
    for (int k = 1; term > 1e-20 * denom || k == 1; ++k) {
      denom += term;
      term *= z2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    }
  } else {
    denom = sh - spec.z;
  }
  // Below ~1e-7 the subtraction carries no significant digits in double
  // precision; the bound is divergent for practical purposes.
  if (denom <= 8.0 * std::numeric_limits<double>::epsilon() * spec.z)
    return std::numeric_limits<double>::infinity();
  return base * sh / denom;
}

double observable_cramer_rao(const std::function<double(double)>& mean_at,
                             const std::function<double(double)>& var_at,
                             std::int64_t n_measurements, double eps0) {
  if (n_measurements < 1)
    throw std::invalid_argument("observable_cramer_rao: need at least one measurement");
  if (!(eps0 > 0.0) || eps0 > 0.1)
    throw std::invalid_argument("observable_cramer_rao: eps0 must be in (0, 0.1]");
  const double m0 = mean_at(0.0);
  const double v0 = var_at(0.0);
  if (!std::isfinite(m0) || !std::isfinite(v0))
    throw std::invalid_argument("observable_cramer_rao: statistics not finite");
  if (v0 < 0.0)
    throw std::invalid_argument("observable_cramer_rao: negative variance");

  const double d1 = (mean_at(eps0) - m0) / eps0;
  const double d2 = (mean_at(eps0 / 2.0) - m0) / (eps0 / 2.0);
  const double deriv = 2.0 * d2 - d1;
  if (std::abs(deriv) <= 1e-8 * std::max(1.0, std::abs(m0)))
    return std::numeric_limits<double>::infinity();
  const double delta_eps =
      std::sqrt(v0 / static_cast<double>(n_measurements)) / std::abs(deriv);
  return 2.0 * delta_eps;
}

}  // namespace massqcrb
