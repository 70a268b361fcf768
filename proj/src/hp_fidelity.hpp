#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "massqcrb/perturbation.hpp"

namespace massqcrb::detail {

// Fidelity deficit 1 - sqrt(F) between a fixed initial density operator and
// its copy evolved in the perturbed frame, reusable across evolution times.
//
// The deficit is O(eps^2) and the target accuracy is parts in 1e6 of that,
// so everything feeding the final cancellation runs in long double: the
// basis-overlap columns are rebuilt here at long-double accuracy and the
// bilinear forms use compensated long-double accumulation.  The nuclear norm
// tr|B| (whose gap to the kept weight is the deficit) is taken
// variationally: tr|B| >= Re tr(W^dag B) for unitary W, maximized by the
// polar factor of B.  W is computed from the double-precision image of B and
// enters only quadratically, so its rounding is harmless.
class NearIdentityFidelity {
 public:
  // Spectral form of the initial state: weights[j] with eigenvector column
  // eigvecs.col(j).  An empty eigvecs matrix declares the state diagonal in
  // the number basis (weights[j] belongs to level j); that path skips the
  // eigenvector rotation and exploits the parity block structure.
  // Weights below support_cut are treated as evolving trivially: they enter
  // the kept-weight bookkeeping with zero deficit.
  NearIdentityFidelity(const Eigen::VectorXd& weights,
                       const Eigen::MatrixXcd& eigvecs,
                       const Perturbation& pert, double support_cut = 1e-11);

  // 1 - sqrt(F) at dimensionless time tau; clamped at 0.
  double deficit(double tau) const;

  double epsilon() const { return eps_; }

 private:
  double eps_ = 0.0;
  long double eps_ld_ = 0.0L;
  int work_ = 0;
  bool diagonal_ = true;

  // Diagonal path: one block per parity.  g holds column-major columns
  // G(k,j) = R(k, level_j) * sqrt(p_j) over k < work_.
  struct ParityBlock {
    std::vector<int> levels;
    std::vector<long double> g;
    long double kept_weight = 0.0L;
  };
  ParityBlock blocks_[2];

  // General path: full R block (work_ x dim_, column-major) and the scaled
  // eigenvector columns C = Q_S diag(sqrt(p)) (dim_ x s).
  int dim_ = 0;
  int s_ = 0;
  std::vector<long double> r_full_;
  std::vector<std::complex<long double>> c_cols_;
  long double kept_weight_ = 0.0L;

  double deficit_diagonal(double tau) const;
  double deficit_general(double tau) const;
};

// Basis-overlap element rebuilt in long double (same closed form as the
// double-precision library path, evaluated by running products).
long double overlap_element_ld(int m, int n, long double y, long double q);

}  // namespace massqcrb::detail
