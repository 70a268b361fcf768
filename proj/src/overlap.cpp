#include "massqcrb/overlap.hpp"

#include <cmath>

namespace massqcrb {

namespace {

// Exact factorials up to 20!; above that the log-gamma branch takes over.
double factorial_small(int n) {
  static const double table[] = {
      1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0, 362880.0,
      3628800.0, 39916800.0, 479001600.0, 6227020800.0, 87178291200.0,
      1307674368000.0, 20922789888000.0, 355687428096000.0,
      6402373705728000.0, 121645100408832000.0, 2432902008176640000.0};
  return table[n];
}

double element_direct(int m, int n, double y, double q) {
  const int rmin = std::min(m, n);
  const int par = rmin % 2;
  const double pref =
      std::sqrt(std::exp2(static_cast<double>(-(m + n))) * q *
                factorial_small(m) * factorial_small(n));
  long double acc = 0.0L;
  for (int r = par; r <= rmin; r += 2) {
    double t = std::pow(2.0 * q, r) / factorial_small(r);
    t *= std::pow(y, (m + n) / 2 - r);
    t /= factorial_small((n - r) / 2) * factorial_small((m - r) / 2);
    if (((m - r) / 2) % 2 != 0) t = -t;
    acc += t;
  }
  return pref * static_cast<double>(acc);
}

double element_loggamma(int m, int n, double y, double q) {
  const int rmin = std::min(m, n);
  const int par = rmin % 2;
  const double lp = 0.5 * (-(m + n) * M_LN2 + std::log(q) +
                           std::lgamma(m + 1.0) + std::lgamma(n + 1.0));
  const double l2q = std::log(2.0 * q);
  const double ly = std::log(y);
  long double acc = 0.0L;
  for (int r = par; r <= rmin; r += 2) {
    double lt = r * l2q - std::lgamma(r + 1.0) + ((m + n) / 2 - r) * ly -
                std::lgamma((n - r) / 2 + 1.0) - std::lgamma((m - r) / 2 + 1.0);
    double t = std::exp(lp + lt);
    if (((m - r) / 2) % 2 != 0) t = -t;
    acc += t;
  }
  return static_cast<double>(acc);
}

}  // namespace

double overlap_element(int m, int n, const Perturbation& pert) {
  if (m < 0 || n < 0)
    throw std::invalid_argument("overlap_element: indices must be >= 0");
  if ((m + n) % 2 != 0) return 0.0;  // opposite parity never mixes

  const double y = pert.y();
  const double q = pert.q();
  if (y == 0.0) return (m == n) ? 1.0 : 0.0;

  if (std::max(m, n) <= 20) return element_direct(m, n, y, q);
  return element_loggamma(m, n, y, q);
}

OverlapMatrix overlap_matrix(const Perturbation& pert, int dim) {
  if (dim < 1) throw std::invalid_argument("overlap_matrix: dim must be >= 1");
  OverlapMatrix out;
  out.epsilon = pert.epsilon();
  out.entries = Eigen::MatrixXd::Zero(dim, dim);
  for (int m = 0; m < dim; ++m)
    for (int n = m % 2; n < dim; n += 2)
      out.entries(m, n) = overlap_element(m, n, pert);
  return out;
}

}  // namespace massqcrb
