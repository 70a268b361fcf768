#pragma once

#include "massqcrb/perturbation.hpp"
#include "massqcrb/state.hpp"

namespace massqcrb {

// Fisher coefficient f({c_m}, tau) of a pure probe state: the squared
// overlap between the freely evolved and the perturbed-frame evolved state
// behaves as |<psi(t)|psi~(t)>|^2 = 1 + eps^2 f + O(eps^3), so f <= 0 and
// |f| measures how fast the two branches become distinguishable.
//
// Evaluated from the quartic form in the coefficients:
//
//   f = [ sum_m ( (1/2) sqrt((m+1)(m+2)) Im(c_m c*_{m+2} (e^{2 i tau} - 1))
//                 + tau m |c_m|^2 ) ]^2
//       - sum_m [ ((m^2+m+1) sin^2(tau)/2 + m^2 tau^2) |c_m|^2
//                 - sqrt((m+1)^3 (m+2)) tau Im((1 - e^{2 i tau}) c*_{m+2} c_m)
//                 - (1/8) sqrt((m+1)(m+2)(m+3)(m+4))
//                       Re((1 - e^{2 i tau})^2 c_m c*_{m+4}) ]
//
// The bracket and the three lattice sums (diagonal, step-2, step-4) are
// accumulated separately in extended precision and combined at the end.
double fisher_f(const StateVector& state, double tau);

// Closed forms for the reference families (all tending to f = 0 at tau = 0).
double f_fock(int n, double tau);
double f_cat_s1(int n, double tau);      // (|n> + |n+2>)/sqrt(2)
double f_cat_s2(int n, double tau);      // (|n> + |n+4>)/sqrt(2)
double f_coherent(double alpha, double tau);
double f_on_asymptotic(int max_level, double tau);  // -(tau L / 2)^2

// Squared overlap |<psi(t)|psi~(t)>|^2 at a finite perturbation, the
// quantity whose eps^2 coefficient fisher_f predicts.
double fidelity_finite_eps(const StateVector& state, double tau,
                           const Perturbation& pert);

}  // namespace massqcrb
