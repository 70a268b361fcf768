#include "massqcrb/fisher.hpp"

#include <cmath>
#include <stdexcept>

#include "massqcrb/evolution.hpp"

namespace massqcrb {

double fisher_f(const StateVector& state, double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("fisher_f: tau must be finite and >= 0");
  if (std::abs(state.coeffs.squaredNorm() - 1.0) > 1e-10)
    throw std::invalid_argument("fisher_f: state must be normalized");

  const int dim = state.dim();
  const cdouble e2t = std::polar(1.0, 2.0 * tau);
  const cdouble one_m_e2t = 1.0 - e2t;
  const cdouble one_m_e2t_sq = one_m_e2t * one_m_e2t;
  const double s2 = std::sin(tau) * std::sin(tau);

  // The bracket and the three lattice sums are kept apart until the end;
  // extended-precision accumulation tames the tau^2-scale cancellation
  // between the bracket squared and the diagonal sum.
  long double bracket = 0.0L, diag = 0.0L, step2 = 0.0L, step4 = 0.0L;

  for (int m = 0; m < dim; ++m) {
    const cdouble cm = state.coeffs(m);
    const double am = std::norm(cm);
    const double md = m;

    bracket += tau * md * am;
    diag += ((md * md + md + 1.0) * s2 * 0.5 + md * md * tau * tau) * am;

    if (m + 2 < dim) {
      const cdouble cm2 = state.coeffs(m + 2);
      const double w2 = std::sqrt((md + 1.0) * (md + 2.0));
      bracket += 0.5 * w2 * std::imag(cm * std::conj(cm2) * (e2t - 1.0));
      step2 += std::sqrt((md + 1.0) * (md + 1.0) * (md + 1.0) * (md + 2.0)) *
               tau * std::imag(one_m_e2t * std::conj(cm2) * cm);
    }
    if (m + 4 < dim) {
      const cdouble cm4 = state.coeffs(m + 4);
      step4 += 0.125 *
               std::sqrt((md + 1.0) * (md + 2.0) * (md + 3.0) * (md + 4.0)) *
               std::real(one_m_e2t_sq * cm * std::conj(cm4));
    }
  }

  return static_cast<double>(bracket * bracket - diag + step2 + step4);
}

double f_fock(int n, double tau) {
  if (n < 0) throw std::invalid_argument("f_fock: n must be >= 0");
  const double nd = n;
  const double s = std::sin(tau);
  return -0.5 * (nd * nd + nd + 1.0) * s * s;
}

double f_cat_s1(int n, double tau) {
  if (n < 0) throw std::invalid_argument("f_cat_s1: n must be >= 0");
  const double nd = n;
  const double s = std::sin(tau), s2 = std::sin(2.0 * tau);
  return ((nd + 1.0) * (nd + 2.0) * s2 * s2 -
          8.0 * (nd * nd + 3.0 * nd + 4.0) * s * s) /
             16.0 -
         tau * tau;
}

double f_cat_s2(int n, double tau) {
  if (n < 0) throw std::invalid_argument("f_cat_s2: n must be >= 0");
  const double nd = n;
  const double s = std::sin(tau);
  const double root =
      std::sqrt((nd + 1.0) * (nd + 2.0) * (nd + 3.0) * (nd + 4.0));
  return -0.25 * (2.0 * (nd * nd + 5.0 * nd + 11.0) * s * s +
                  root * std::cos(2.0 * tau) * s * s) -
         4.0 * tau * tau;
}

double f_coherent(double alpha, double tau) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("f_coherent: alpha must be >= 0");
  const double a2 = alpha * alpha;
  const double s = std::sin(tau);
  return -(0.5 + a2) * s * s - a2 * tau * (tau + std::sin(2.0 * tau));
}

double f_on_asymptotic(int max_level, double tau) {
  if (max_level < 1)
    throw std::invalid_argument("f_on_asymptotic: max level must be >= 1");
  const double half = 0.5 * tau * max_level;
  return -half * half;
}

double fidelity_finite_eps(const StateVector& state, double tau,
                           const Perturbation& pert) {
  const StateVector free_branch = evolve_free(state, tau);
  const StateVector pert_branch = evolve_in_perturbed_frame(state, tau, pert);
  return std::norm(inner_product(free_branch, pert_branch));
}

}  // namespace massqcrb
