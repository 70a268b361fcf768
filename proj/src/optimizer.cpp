#include "massqcrb/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <future>
#include <random>
#include <stdexcept>
#include <vector>

#include "massqcrb/fisher.hpp"

namespace massqcrb {

namespace {

struct RestartOutcome {
  Eigen::VectorXcd coeffs;
  double value = 0.0;  // -fisher_f, the quantity being maximized
  bool converged = false;
};

double objective(const Eigen::VectorXcd& raw, double tau) {
  return -fisher_f(make_state(Eigen::VectorXcd(raw.normalized())), tau);
}

RestartOutcome ascend(const Eigen::VectorXcd& start, double tau, double tol) {
  constexpr double kGradStep = 1e-7;
  constexpr double kStepFloor = 1e-14;
  constexpr int kMaxIters = 10000;

  RestartOutcome out;
  const int n = static_cast<int>(start.size());
  Eigen::VectorXcd z = start.normalized();
  double value = objective(z, tau);
  double step = 0.1;

  for (int iter = 0; iter < kMaxIters; ++iter) {
    Eigen::VectorXcd grad(n);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXcd re = z;
      re(i) += kGradStep;
      Eigen::VectorXcd im = z;
      im(i) += cdouble(0.0, kGradStep);
      grad(i) = cdouble((objective(re, tau) - value) / kGradStep,
                        (objective(im, tau) - value) / kGradStep);
    }

    bool accepted = false;
    while (step > kStepFloor) {
      Eigen::VectorXcd cand = (z + step * grad).normalized();
      const double cval = objective(cand, tau);
      if (cval > value) {
        const double gain = cval - value;
        z = cand;
        value = cval;
        step *= 1.3;
        accepted = true;
        if (gain < tol * std::max(1.0, std::abs(value))) out.converged = true;
        break;
      }
      step *= 0.4;
    }
    if (!accepted) {
      // No improving move along the gradient down to the step floor: the
      // point is stationary at finite-difference resolution.
      out.converged = true;
      break;
    }
    if (out.converged) break;
  }

  out.coeffs = z;
  out.value = value;
  return out;
}

Eigen::VectorXcd start_point(int index, int levels, std::uint64_t seed) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(levels);
  if (index == 0) {
    // Equal split between the bottom and top levels.
    c(0) = 1.0 / std::sqrt(2.0);
    c(levels - 1) = c(0);
    if (levels == 1) c(0) = 1.0;
    return c;
  }
  if (index == 1) {
    c(levels - 1) = 1.0;
    return c;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < levels; ++i) c(i) = cdouble(gauss(rng), gauss(rng));
  return c.normalized();
}

void canonicalize_phase(Eigen::VectorXcd& c) {
  for (int i = 0; i < c.size(); ++i) {
    if (std::abs(c(i)) > 1e-9) {
      c *= std::conj(c(i) / std::abs(c(i)));
      return;
    }
  }
}

}  // namespace

OptimizationReport optimize_state(int max_level, double tau, int restarts,
                                  std::uint64_t seed, double tol) {
  if (max_level < 0)
    throw std::invalid_argument("optimize_state: negative top level");
  if (restarts < 1)
    throw std::invalid_argument("optimize_state: need at least one restart");
  if (!std::isfinite(tau) || tau < 0.0)
    throw std::invalid_argument("optimize_state: time must be finite and >= 0");
  if (!(tol > 0.0) || !std::isfinite(tol))
    throw std::invalid_argument("optimize_state: tolerance must be positive");

  const int levels = max_level + 1;
  std::vector<std::future<RestartOutcome>> jobs;
  jobs.reserve(restarts);
  for (int r = 0; r < restarts; ++r)
    jobs.push_back(std::async(std::launch::async, [r, levels, seed, tau, tol] {
      return ascend(start_point(r, levels, seed), tau, tol);
    }));

  std::vector<RestartOutcome> results;
  results.reserve(restarts);
  for (auto& j : jobs) results.push_back(j.get());

  // Deterministic reduction: scan in restart order, replace only on a strict
  // improvement, so scheduling can never change the winner.
  int best = 0;
  bool all_converged = true;
  double lo = results[0].value, hi = results[0].value;
  for (int r = 0; r < restarts; ++r) {
    all_converged = all_converged && results[r].converged;
    lo = std::min(lo, results[r].value);
    hi = std::max(hi, results[r].value);
    if (results[r].value > results[best].value) best = r;
  }

  Eigen::VectorXcd coeffs = results[best].coeffs;
  canonicalize_phase(coeffs);

  OptimizationReport report;
  report.best_state = make_state(coeffs);
  report.best_f = -results[best].value;
  report.restarts_used = restarts;
  report.converged = all_converged;
  report.spread = hi - lo;
  return report;
}

double variance_certificate(const StateVector& state, double tau_large) {
  if (!std::isfinite(tau_large) || tau_large < 0.0)
    throw std::invalid_argument("variance_certificate: bad time");
  return tau_large * tau_large * quanta_variance(state);
}

}  // namespace massqcrb
