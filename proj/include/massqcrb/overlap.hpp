#pragma once

#include <Eigen/Dense>

#include "massqcrb/perturbation.hpp"

namespace massqcrb {

// Single element R(m, n) = <m; w~ | n; w> of the two-frequency basis overlap,
// i.e. the m-th eigenstate of the perturbed oscillator against the n-th of
// the unperturbed one.  Nonzero only for m, n of equal parity.
//
// Closed form: with y = (w - w~)/(w + w~) and q = 2 sqrt(w w~)/(w + w~),
//
//   R(m,n) = sqrt(2^-(m+n) q m! n!) *
//            sum_r (2q)^r / r! * y^((m+n-2r)/2) * (-1)^((m-r)/2)
//                  / ( ((n-r)/2)! ((m-r)/2)! )
//
// where r runs over integers of the same parity as min(m,n), from that
// parity up to min(m,n).  Factorials switch to log-gamma evaluation once
// max(m,n) > 20 to avoid overflow.
double overlap_element(int m, int n, const Perturbation& pert);

// Dense dim x dim block of R.  Rows index the perturbed basis, columns the
// unperturbed one; a state evolves through R as c~ = R c.
struct OverlapMatrix {
  Eigen::MatrixXd entries;
  double epsilon = 0.0;

  int dim() const { return static_cast<int>(entries.rows()); }
};

OverlapMatrix overlap_matrix(const Perturbation& pert, int dim);

}  // namespace massqcrb
