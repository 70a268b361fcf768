#include "massqcrb/density.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "massqcrb/evolution.hpp"

namespace massqcrb {

namespace {

void check_density(const Eigen::MatrixXcd& m) {
  if (m.rows() < 1 || m.rows() != m.cols())
    throw std::invalid_argument("density: matrix must be square and non-empty");
  if (!m.allFinite())
    throw std::invalid_argument("density: non-finite entries");
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12)
    throw std::invalid_argument("density: not Hermitian within 1e-12");
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > 1e-10)
    throw std::invalid_argument("density: trace deviates from 1 beyond 1e-10");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("density: negative eigenvalue beyond 1e-10");
}

}  // namespace

int thermal_required_dim(double z, double tail_tol) {
  if (!(z > 0.0)) throw std::invalid_argument("thermal: z must be positive");
  if (!(tail_tol > 0.0) || tail_tol >= 1.0)
    throw std::invalid_argument("thermal: tail tolerance must be in (0,1)");
  return static_cast<int>(std::ceil(-std::log(tail_tol) / z));
}

Eigen::VectorXd thermal_weights(double z, int dim) {
  if (!(z > 0.0)) throw std::invalid_argument("thermal: z must be positive");
  if (dim < 1) throw std::invalid_argument("thermal: dim must be >= 1");
  Eigen::VectorXd p(dim);
  const double scale = -std::expm1(-z);  // 1 - e^{-z}, accurate at small z
  for (int n = 0; n < dim; ++n) p(n) = std::exp(-n * z) * scale;
  return p;
}

DensityMatrix thermal_state(const ThermalSpec& spec) {
  const double tail = std::exp(-spec.z * spec.dim);
  if (tail >= spec.tail_tol) {
    std::ostringstream msg;
    msg << "thermal: truncation " << spec.dim << " leaves weight " << tail
        << " outside; need dim >= " << thermal_required_dim(spec.z, spec.tail_tol);
    throw std::invalid_argument(msg.str());
  }
  Eigen::VectorXd p = thermal_weights(spec.z, spec.dim);
  p /= p.sum();  // renormalize over the kept block
  DensityMatrix out;
  out.matrix = p.cast<cdouble>().asDiagonal();
  return out;
}

DensityMatrix make_density(const Eigen::MatrixXcd& matrix) {
  check_density(matrix);
  DensityMatrix out;
  out.matrix = (matrix + matrix.adjoint()) / 2.0;  // strip rounding skew
  return out;
}

DensityMatrix density_from_pure(const StateVector& state) {
  if (std::abs(state.coeffs.squaredNorm() - 1.0) > 1e-10)
    throw std::invalid_argument("density: pure state not normalized");
  DensityMatrix out;
  out.matrix = state.coeffs * state.coeffs.adjoint();
  return out;
}

DensityMatrix evolve_density(const DensityMatrix& rho, double tau,
                             const Perturbation& pert, double tol) {
  EvolutionTime t(tau);
  const int dim = rho.dim();
  int work = evolution_working_dim(dim - 1, dim, pert.epsilon());
  if (work <= dim) work = dim + 16;

  for (int attempt = 0; attempt < 2; ++attempt) {
    Eigen::MatrixXcd v = perturbed_propagator(pert, tau, work);
    Eigen::MatrixXcd embedded = Eigen::MatrixXcd::Zero(work, work);
    embedded.topLeftCorner(dim, dim) = rho.matrix;
    Eigen::MatrixXcd evolved = v * embedded * v.adjoint();

    const double trace_err = std::abs(evolved.trace().real() - 1.0);
    const double herm_err = (evolved - evolved.adjoint()).cwiseAbs().maxCoeff();
    if (trace_err <= tol && herm_err <= tol) {
      DensityMatrix out;
      out.matrix = (evolved + evolved.adjoint()) / 2.0;
      return out;
    }
    work *= 2;
  }
  throw std::runtime_error(
      "evolve_density: truncation refused to converge; enlarge the input block");
}

namespace {

// Hermitian square root with negative eigenvalues clipped to zero.
Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m, const char* who) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error(std::string(who) + ": eigendecomposition failed");
  Eigen::VectorXd lam = es.eigenvalues();
  if (lam.minCoeff() < -1e-10)
    throw std::invalid_argument(std::string(who) + ": operator not PSD");
  Eigen::VectorXd root = lam.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim())
    throw std::invalid_argument("fidelity: dimension mismatch");
  Eigen::MatrixXcd s1 = psd_sqrt(rho1.matrix, "fidelity");
  Eigen::MatrixXcd inner = s1 * rho2.matrix * s1;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(inner, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("fidelity: eigendecomposition failed");
  // Rank-deficient products scatter O(machine eps) eigenvalues around zero;
  // the square root would amplify each to ~1e-8, so drop them before summing.
  const double cutoff = 1e-14 * std::max(0.0, es.eigenvalues().maxCoeff());
  double root_sum = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam > cutoff) root_sum += std::sqrt(lam);
  }
  return root_sum * root_sum;
}

double bures_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  const double root_f = std::min(1.0, std::sqrt(fidelity(rho1, rho2)));
  return std::sqrt(2.0 * (1.0 - root_f));
}

Eigen::MatrixXd fock_x2_matrix(int dim) {
  if (dim < 1) throw std::invalid_argument("fock_x2_matrix: dim must be >= 1");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    m(n, n) = (2.0 * n + 1.0) / 2.0;
    if (n + 2 < dim) {
      const double c = std::sqrt((n + 1.0) * (n + 2.0)) / 2.0;
      m(n, n + 2) = c;
      m(n + 2, n) = c;
    }
  }
  return m;
}

double observable_mean(const DensityMatrix& rho, const Eigen::MatrixXd& obs) {
  if (rho.dim() != obs.rows() || obs.rows() != obs.cols())
    throw std::invalid_argument("observable_mean: dimension mismatch");
  return (rho.matrix * obs.cast<cdouble>()).trace().real();
}

}  // namespace massqcrb
