#include "massqcrb/state.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace massqcrb {

int StateVector::top_occupied() const {
  for (int n = dim() - 1; n >= 0; --n)
    if (coeffs(n) != cdouble(0.0, 0.0)) return n;
  return -1;
}

StateVector make_state(const Eigen::VectorXcd& coeffs) {
  if (coeffs.size() == 0)
    throw std::invalid_argument("make_state: empty coefficient list");
  double n2 = coeffs.squaredNorm();
  if (!(n2 > 0.0) || !std::isfinite(n2))
    throw std::invalid_argument("make_state: coefficients must form a nonzero finite vector");

  // Leave already-normalized input untouched so serialized states round-trip
  // bit-exactly; only genuinely unnormalized input gets rescaled.
  double slack = 32.0 * static_cast<double>(coeffs.size()) *
                 std::numeric_limits<double>::epsilon();
  if (std::abs(n2 - 1.0) <= slack) return StateVector{coeffs};
  return StateVector{coeffs / std::sqrt(n2)};
}

StateVector make_state(const std::vector<cdouble>& coeffs) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(coeffs.size()));
  for (size_t i = 0; i < coeffs.size(); ++i) v(static_cast<Eigen::Index>(i)) = coeffs[i];
  return make_state(v);
}

StateVector make_fock(int n, int dim) {
  if (n < 0) throw std::invalid_argument("make_fock: level must be >= 0");
  if (dim <= n) throw std::invalid_argument("make_fock: dim must exceed the level");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(n) = 1.0;
  return StateVector{v};
}

StateVector make_on(int max_level, double phase, int dim) {
  if (max_level < 1) throw std::invalid_argument("make_on: max level must be >= 1");
  if (dim <= max_level) throw std::invalid_argument("make_on: dim must exceed the max level");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  const double r = 1.0 / std::sqrt(2.0);
  v(0) = r;
  v(max_level) = std::polar(r, phase);
  return StateVector{v};
}

StateVector make_coherent(double alpha, double tail_tol, int max_dim) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("make_coherent: alpha must be finite and >= 0");
  if (!(tail_tol > 0.0) || !(tail_tol < 1.0))
    throw std::invalid_argument("make_coherent: tail_tol must lie in (0, 1)");
  if (max_dim < 1) throw std::invalid_argument("make_coherent: max_dim must be >= 1");

  const double lam = alpha * alpha;  // Poisson mean of the level distribution
  // Scan the Poisson weights until the discarded tail is small enough.
  double w = std::exp(-lam);
  double cum = w;
  int dim = 1;
  const int scan_cap = std::max(max_dim * 16 + 64, 1024);
  while (1.0 - cum >= tail_tol && dim < scan_cap) {
    w *= lam / dim;
    cum += w;
    ++dim;
  }
  if (1.0 - cum >= tail_tol) {
    throw std::invalid_argument(
        "make_coherent: Poisson tail does not reach tail_tol within the scan window");
  }
  if (dim > max_dim) {
    std::ostringstream msg;
    msg << "make_coherent: truncating at max_dim=" << max_dim
        << " leaves a Poisson tail above tail_tol; dim=" << dim << " suffices";
    throw std::invalid_argument(msg.str());
  }

  Eigen::VectorXcd v(dim);
  double wn = std::exp(-lam);
  for (int n = 0; n < dim; ++n) {
    v(n) = std::sqrt(wn);
    wn *= lam / (n + 1);
  }
  return make_state(v);  // renormalizes away the discarded tail mass
}

cdouble inner_product(const StateVector& a, const StateVector& b) {
  int d = std::min(a.dim(), b.dim());
  return a.coeffs.head(d).dot(b.coeffs.head(d));  // Eigen conjugates the lhs
}

StateVector evolve_free(const StateVector& state, double tau) {
  Eigen::VectorXcd out(state.dim());
  for (int n = 0; n < state.dim(); ++n)
    out(n) = std::polar(1.0, -tau * (n + 0.5)) * state.coeffs(n);
  return StateVector{out};
}

double mean_quanta(const StateVector& state) {
  double m = 0.0;
  for (int n = 0; n < state.dim(); ++n) m += n * std::norm(state.coeffs(n));
  return m;
}

double quanta_variance(const StateVector& state) {
  double m = mean_quanta(state);
  double m2 = 0.0;
  for (int n = 0; n < state.dim(); ++n)
    m2 += static_cast<double>(n) * n * std::norm(state.coeffs(n));
  return m2 - m * m;
}

}  // namespace massqcrb
