#pragma once

#include <Eigen/Dense>

#include "massqcrb/overlap.hpp"
#include "massqcrb/perturbation.hpp"
#include "massqcrb/state.hpp"

namespace massqcrb {

// Working dimension for a state evolved under the perturbed Hamiltonian:
// top occupied index plus max(16, 4*ceil(eps*dim)) headroom levels, so the
// truncated basis change loses less than the norm tolerance.
int evolution_working_dim(int top_occupied, int dim, double epsilon);

// Propagator of the perturbed Hamiltonian expressed in the unperturbed
// basis, V = R^T diag(e^{-i tau (1-eps) (k+1/2)}) R, truncated to dim levels.
Eigen::MatrixXcd perturbed_propagator(const Perturbation& pert, double tau, int dim);

// Evolves |psi> under the perturbed Hamiltonian for phase tau (measured in
// units of the *unperturbed* frequency, so the accumulated perturbed phase
// is tau*(1-eps)).  The result lives in the enlarged working basis and keeps
// whatever tiny norm deficit truncation produced; a deficit beyond norm_tol
// triggers one retry with doubled headroom, then an error.
StateVector evolve_in_perturbed_frame(const StateVector& state, double tau,
                                      const Perturbation& pert,
                                      double norm_tol = 1e-10);

}  // namespace massqcrb
