#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace massqcrb {

using cdouble = std::complex<double>;

// A pure oscillator state in the Fock basis of the unperturbed frequency.
// coeffs(n) multiplies |n>; the vector is kept normalized to 1 within
// round-off (factories enforce this; see make_state).
struct StateVector {
  Eigen::VectorXcd coeffs;

  int dim() const { return static_cast<int>(coeffs.size()); }

  // Highest index with a non-negligible amplitude, -1 for the zero vector.
  int top_occupied() const;

  double norm() const { return coeffs.norm(); }
};

// Normalizes and wraps a raw coefficient list.  If the input norm is already
// 1 within a few ulps the coefficients are taken verbatim, so that a state
// serialized at full precision re-parses bit-exactly.  A zero vector is
// rejected.
StateVector make_state(const std::vector<cdouble>& coeffs);
StateVector make_state(const Eigen::VectorXcd& coeffs);

// |n> embedded in `dim` levels (dim > n required).
StateVector make_fock(int n, int dim);

// (|0> + e^{i phi}|L>)/sqrt(2), the two-level "ON" probe state.
StateVector make_on(int max_level, double phase, int dim);

// Coherent state with real amplitude alpha, truncated where the Poisson
// weight tail drops below tail_tol.  Errors if max_dim levels cannot hold
// the tail, reporting the dimension that would suffice.
StateVector make_coherent(double alpha, double tail_tol, int max_dim);

// <a|b> over the common support (shorter vector zero-padded).
cdouble inner_product(const StateVector& a, const StateVector& b);

// Evolution under the unperturbed Hamiltonian: c_n -> e^{-i tau (n + 1/2)} c_n.
StateVector evolve_free(const StateVector& state, double tau);

// <n> and <n^2> - <n>^2 of the number operator.
double mean_quanta(const StateVector& state);
double quanta_variance(const StateVector& state);

}  // namespace massqcrb
