#pragma once

#include <utility>

#include <Eigen/Dense>

#include "massqcrb/state.hpp"

namespace massqcrb {

// Orthonormal harmonic eigenfunction phi_n(x) in ground-width units,
// evaluated by the normalized three-term recurrence with the Gaussian
// folded in (raw Hermite polynomials overflow long before n = 80).
double eigenfunction(int n, double x);

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;  // for integrals against exp(-y^2)
};

// Gauss-Hermite rule of the given order via the symmetric tridiagonal
// eigenproblem.
QuadratureRule gauss_hermite_rule(int order);

struct PhaseSpaceGrid {
  Eigen::VectorXd x_values;
  Eigen::VectorXd p_values;
  // One row per momentum value, one column per position value.
  Eigen::MatrixXd values;
  // Raised when the grid visibly fails to capture the state (the summed
  // quasi-probability deviates from 1 by more than 1e-3).
  bool normalization_warning = false;
  // Grid-summed integral of the distribution, for diagnostics.
  double mass = 0.0;
};

// Quasi-probability value at one phase-space point (builds its own
// quadrature rule; use wigner_grid for sweeps).
double wigner_point(const StateVector& state, double x, double p);

// Quasi-probability on a uniform grid, by Gauss-Hermite quadrature of the
// symmetrized autocorrelation integral.  x_range/p_range are inclusive
// bounds in ground-width units; resolution is the point count per axis.
PhaseSpaceGrid wigner_grid(const StateVector& state,
                           std::pair<double, double> x_range,
                           std::pair<double, double> p_range, int resolution);

}  // namespace massqcrb
