#include "massqcrb/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <future>
#include <stdexcept>
#include <thread>
#include <vector>

namespace massqcrb {

double eigenfunction(int n, double x) {
  if (n < 0) throw std::invalid_argument("eigenfunction: negative level");
  double prev = 0.0;
  double cur = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
  for (int k = 0; k < n; ++k) {
    const double next =
        std::sqrt(2.0 / (k + 1.0)) * x * cur - std::sqrt(k / (k + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

QuadratureRule gauss_hermite_rule(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite_rule: bad order");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = std::sqrt(k / 2.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("gauss_hermite_rule: eigensolver failed");
  QuadratureRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(order);
  const double sqrt_pi = std::sqrt(M_PI);
  for (int i = 0; i < order; ++i) {
    const double first = es.eigenvectors()(0, i);
    rule.weights(i) = sqrt_pi * first * first;
  }
  return rule;
}

namespace {

constexpr int kQuadratureOrder = 128;
constexpr double kImaginaryCap = 1e-10;

cdouble psi_at(const StateVector& state, double x) {
  double prev = 0.0;
  double cur = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
  cdouble acc = state.coeffs(0) * cur;
  for (int k = 1; k < state.coeffs.size(); ++k) {
    const double next =
        std::sqrt(2.0 / k) * x * cur - std::sqrt((k - 1.0) / k) * prev;
    prev = cur;
    cur = next;
    acc += state.coeffs(k) * cur;
  }
  return acc;
}

// Per-node autocorrelation kernel conj(psi(x-y)) psi(x+y) w e^{y^2}; the
// momentum dependence is a pure phase applied later.
Eigen::VectorXcd correlation_column(const StateVector& state,
                                    const QuadratureRule& rule, double x) {
  Eigen::VectorXcd col(rule.nodes.size());
  for (int k = 0; k < rule.nodes.size(); ++k) {
    const double y = rule.nodes(k);
    col(k) = std::conj(psi_at(state, x - y)) * psi_at(state, x + y) *
             (rule.weights(k) * std::exp(y * y));
  }
  return col;
}

double phase_integral(const Eigen::VectorXcd& col, const Eigen::VectorXd& y,
                      double p) {
  cdouble acc(0.0, 0.0);
  for (int k = 0; k < y.size(); ++k) {
    const double angle = -2.0 * y(k) * p;
    acc += col(k) * cdouble(std::cos(angle), std::sin(angle));
  }
  if (std::abs(acc.imag()) > kImaginaryCap)
    throw std::runtime_error(
        "wigner: quadrature lost reality; state coefficients corrupt?");
  return acc.real() / M_PI;
}

void check_range(std::pair<double, double> r, const char* name) {
  if (!std::isfinite(r.first) || !std::isfinite(r.second) ||
      !(r.second > r.first))
    throw std::invalid_argument(std::string("wigner_grid: bad ") + name +
                                " range");
}

}  // namespace

double wigner_point(const StateVector& state, double x, double p) {
  if (!std::isfinite(x) || !std::isfinite(p))
    throw std::invalid_argument("wigner_point: non-finite coordinates");
  const QuadratureRule rule = gauss_hermite_rule(kQuadratureOrder);
  return phase_integral(correlation_column(state, rule, x), rule.nodes, p);
}

PhaseSpaceGrid wigner_grid(const StateVector& state,
                           std::pair<double, double> x_range,
                           std::pair<double, double> p_range, int resolution) {
  if (resolution < 16)
    throw std::invalid_argument("wigner_grid: resolution below 16");
  check_range(x_range, "x");
  check_range(p_range, "p");

  PhaseSpaceGrid grid;
  grid.x_values.setLinSpaced(resolution, x_range.first, x_range.second);
  grid.p_values.setLinSpaced(resolution, p_range.first, p_range.second);
  grid.values.resize(resolution, resolution);

  const QuadratureRule rule = gauss_hermite_rule(kQuadratureOrder);
  std::vector<Eigen::VectorXcd> columns(resolution);
  for (int j = 0; j < resolution; ++j)
    columns[j] = correlation_column(state, rule, grid.x_values(j));

  const int rows = resolution;
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, rows));
  std::vector<std::future<void>> jobs;
  jobs.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const int lo = rows * w / workers;
    const int hi = rows * (w + 1) / workers;
    jobs.push_back(std::async(std::launch::async, [&, lo, hi] {
      for (int i = lo; i < hi; ++i)
        for (int j = 0; j < resolution; ++j)
          grid.values(i, j) =
              phase_integral(columns[j], rule.nodes, grid.p_values(i));
    }));
  }
  for (auto& j : jobs) j.get();

  const double dx = grid.x_values(1) - grid.x_values(0);
  const double dp = grid.p_values(1) - grid.p_values(0);
  grid.mass = grid.values.sum() * dx * dp;
  grid.normalization_warning = std::abs(grid.mass - 1.0) > 1e-3;
  return grid;
}

}  // namespace massqcrb
