#include "massqcrb/evolution.hpp"

#include <cmath>
#include <stdexcept>

namespace massqcrb {

int evolution_working_dim(int top_occupied, int dim, double epsilon) {
  int pad = std::max(16, 4 * static_cast<int>(std::ceil(epsilon * dim)));
  return std::max(top_occupied, 0) + pad;
}

Eigen::MatrixXcd perturbed_propagator(const Perturbation& pert, double tau, int dim) {
  const Eigen::MatrixXd R = overlap_matrix(pert, dim).entries;
  const double tau_p = tau * pert.omega_ratio();
  Eigen::VectorXcd phases(dim);
  for (int k = 0; k < dim; ++k) phases(k) = std::polar(1.0, -tau_p * (k + 0.5));
  return R.transpose() * phases.asDiagonal() * R;
}

namespace {

Eigen::VectorXcd evolve_at_dim(const Eigen::VectorXcd& c, double tau,
                               const Perturbation& pert, int work) {
  const Eigen::MatrixXd R = overlap_matrix(pert, work).entries;
  Eigen::VectorXcd embedded = Eigen::VectorXcd::Zero(work);
  embedded.head(c.size()) = c;

  Eigen::VectorXcd a = R * embedded;  // amplitudes in the perturbed eigenbasis
  const double tau_p = tau * pert.omega_ratio();
  for (int k = 0; k < work; ++k) a(k) *= std::polar(1.0, -tau_p * (k + 0.5));
  return R.transpose() * a;
}

}  // namespace

StateVector evolve_in_perturbed_frame(const StateVector& state, double tau,
                                      const Perturbation& pert, double norm_tol) {
  if (!(tau >= 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("evolve_in_perturbed_frame: tau must be finite and >= 0");
  const int top = state.top_occupied();
  if (top < 0)
    throw std::invalid_argument("evolve_in_perturbed_frame: empty state");

  int work = evolution_working_dim(top, state.dim(), pert.epsilon());
  if (work <= state.dim()) work = state.dim() + 16;

  Eigen::VectorXcd out = evolve_at_dim(state.coeffs, tau, pert, work);
  double deficit = std::abs(1.0 - out.squaredNorm());
  if (deficit > norm_tol) {
    // One retry with twice the headroom before giving up.
    work = 2 * work;
    out = evolve_at_dim(state.coeffs, tau, pert, work);
    deficit = std::abs(1.0 - out.squaredNorm());
    if (deficit > norm_tol)
      throw std::runtime_error(
          "evolve_in_perturbed_frame: truncation lost more norm than tolerated; "
          "use a larger state dimension");
  }
  return StateVector{out};
}

}  // namespace massqcrb
