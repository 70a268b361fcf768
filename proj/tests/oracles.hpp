#pragma once

// Independent reference implementations used only by the tests.  Everything
// here is deliberately written from scratch (quadrature, recurrences, brute
// force) rather than calling into the library, so that agreement between the
// two is meaningful.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

namespace oracles {

// Gauss-Hermite rule (weight e^{-x^2}) via the symmetric tridiagonal Jacobi
// matrix; returns nodes and weights.
inline void gauss_hermite(int npts, std::vector<double>& nodes,
                          std::vector<double>& weights) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(npts, npts);
  for (int k = 1; k < npts; ++k) {
    double b = std::sqrt(k / 2.0);
    j(k, k - 1) = b;
    j(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  nodes.resize(npts);
  weights.resize(npts);
  const double mu0 = std::sqrt(M_PI);  // integral of the weight
  for (int i = 0; i < npts; ++i) {
    nodes[i] = es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
}

// Normalized harmonic-oscillator eigenfunction (unit frequency/mass) by the
// standard three-term recurrence with the Gaussian kept inside.
inline double hermite_fn(int n, double x) {
  double f0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
  if (n == 0) return f0;
  double f1 = std::sqrt(2.0) * x * f0;
  for (int k = 1; k < n; ++k) {
    double f2 = std::sqrt(2.0 / (k + 1.0)) * x * f1 -
                std::sqrt(k / (k + 1.0)) * f0;
    f0 = f1;
    f1 = f2;
  }
  return f1;
}

// Eigenfunction of an oscillator at frequency `omega` (same mass):
// the unit-frequency function with rescaled argument and measure.
inline double hermite_fn_omega(int n, double x, double omega) {
  return std::pow(omega, 0.25) * hermite_fn(n, std::sqrt(omega) * x);
}

// Overlap <m; omega_b | n; omega_a> by the trapezoid rule.  The integrand is
// entire with Gaussian decay, so the trapezoid error is governed by the
// integrand's Fourier transform at 2*pi/h and by domain truncation; picking h
// below the classical bandwidth and the window past the classical turning
// points drives both terms to machine zero.  `min_pts` only forces extra
// refinement beyond that rule.
inline double overlap_quadrature(int m, int n, double omega_b, double omega_a,
                                 int min_pts) {
  const double wmin = std::min(omega_a, omega_b);
  const double wmax = std::max(omega_a, omega_b);
  const int top = std::max(m, n);
  const double band = 2.0 * std::sqrt(wmax * (2.0 * top + 1.0)) + 24.0;
  const double xmax = std::sqrt((2.0 * top + 1.0) / wmin) + 12.0;
  int half = static_cast<int>(std::ceil(xmax * band / (2.0 * M_PI)));
  half = std::max(half, min_pts / 2 + 1);
  const double h = xmax / half;
  double acc = 0.0;
  for (int i = -half; i <= half; ++i) {
    double x = i * h;
    acc += hermite_fn_omega(m, x, omega_b) * hermite_fn_omega(n, x, omega_a);
  }
  return acc * h;
}

// Tail mass of a Poisson(lambda) distribution beyond the first `dim` terms.
inline double poisson_tail(double lambda, int dim) {
  double w = std::exp(-lambda), cum = w;
  for (int k = 1; k < dim; ++k) {
    w *= lambda / k;
    cum += w;
  }
  return 1.0 - cum;
}

}  // namespace oracles
