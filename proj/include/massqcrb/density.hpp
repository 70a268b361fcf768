#pragma once

#include <Eigen/Dense>

#include "massqcrb/perturbation.hpp"
#include "massqcrb/state.hpp"

namespace massqcrb {

// Hermitian, positive-semidefinite, unit-trace operator on the truncated
// number basis.
struct DensityMatrix {
  Eigen::MatrixXcd matrix;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

// Bose-Einstein occupation at inverse reduced temperature z, truncated at
// `dim` levels.  The discarded weight is exactly e^{-z dim}; construction
// fails if that exceeds `tail_tol`, quoting the dimension that would do.
struct ThermalSpec {
  double z;
  int dim;
  double tail_tol = 1e-12;
};

// Smallest truncation whose discarded thermal weight stays below tail_tol.
int thermal_required_dim(double z, double tail_tol);

// Boltzmann weights e^{-n z}(1 - e^{-z}) for n = 0..dim-1 (not renormalized).
Eigen::VectorXd thermal_weights(double z, int dim);

DensityMatrix thermal_state(const ThermalSpec& spec);

// Validating constructor for externally assembled matrices.
DensityMatrix make_density(const Eigen::MatrixXcd& matrix);

// |psi><psi| on the state's own truncation.
DensityMatrix density_from_pure(const StateVector& state);

// Conjugation by the perturbed-frame propagator, padded like the pure-state
// path; trace and Hermiticity are checked to `tol` after truncation.
DensityMatrix evolve_density(const DensityMatrix& rho, double tau,
                             const Perturbation& pert, double tol = 1e-10);

// Uhlmann fidelity F = (tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2 via Hermitian
// eigendecompositions, eigenvalues clipped at zero before the square roots.
double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

// sqrt(2) sqrt(1 - sqrt(F)).
double bures_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

// Position-squared operator in units of the oscillator length squared:
// diagonal (2n+1)/2 with sqrt((n+1)(n+2))/2 on the second off-diagonals.
Eigen::MatrixXd fock_x2_matrix(int dim);

// tr(rho * obs) for a real symmetric observable.
double observable_mean(const DensityMatrix& rho, const Eigen::MatrixXd& obs);

}  // namespace massqcrb
