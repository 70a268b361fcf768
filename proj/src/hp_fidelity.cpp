#include "hp_fidelity.hpp"

#include <cmath>
#include <stdexcept>

#include "massqcrb/evolution.hpp"

namespace massqcrb::detail {

namespace {

constexpr int kMaxLevel = 600;

const long double* factorial_table() {
  static const std::vector<long double> table = [] {
    std::vector<long double> f(kMaxLevel + 1);
    f[0] = 1.0L;
    for (int i = 1; i <= kMaxLevel; ++i) f[i] = f[i - 1] * i;
    return f;
  }();
  return table.data();
}

}  // namespace

long double overlap_element_ld(int m, int n, long double y, long double q) {
  if (m > kMaxLevel || n > kMaxLevel)
    throw std::logic_error("overlap_element_ld: index beyond factorial table");
  if ((m + n) % 2 != 0) return 0.0L;
  if (y == 0.0L) return (m == n) ? 1.0L : 0.0L;
  const long double* fact = factorial_table();

  const int rmin = std::min(m, n);
  const int par = rmin % 2;
  const int half_sum = (m + n) / 2;

  // Running powers across the r-loop keep every term a short product of
  // exactly representable updates (errors stay at a few ulp).
  long double pw2q = (par == 0) ? 1.0L : 2.0L * q;
  long double pwy = 1.0L;
  for (int i = 0; i < half_sum - par; ++i) pwy *= y;
  const long double step2q = (2.0L * q) * (2.0L * q);
  const long double inv_y2 = 1.0L / (y * y);

  long double acc = 0.0L;
  for (int r = par; r <= rmin; r += 2) {
    long double t = pw2q / fact[r] * pwy /
                    (fact[(n - r) / 2] * fact[(m - r) / 2]);
    if (((m - r) / 2) % 2 != 0) t = -t;
    acc += t;
    pw2q *= step2q;
    pwy *= inv_y2;
  }

  const long double pref =
      std::sqrt(std::exp2(-static_cast<long double>(m + n)) * q * fact[m] * fact[n]);
  return pref * acc;
}

NearIdentityFidelity::NearIdentityFidelity(const Eigen::VectorXd& weights,
                                           const Eigen::MatrixXcd& eigvecs,
                                           const Perturbation& pert,
                                           double support_cut) {
  eps_ = pert.epsilon();
  eps_ld_ = static_cast<long double>(eps_);
  const long double y = eps_ld_ / (2.0L - eps_ld_);
  const long double q = 2.0L * std::sqrt(1.0L - eps_ld_) / (2.0L - eps_ld_);

  dim_ = static_cast<int>(weights.size());
  if (dim_ < 1)
    throw std::invalid_argument("fidelity context: empty weight vector");
  work_ = evolution_working_dim(dim_ - 1, dim_, eps_);
  if (work_ <= dim_) work_ = dim_ + 16;

  diagonal_ = (eigvecs.size() == 0);
  if (diagonal_) {
    for (int n = 0; n < dim_; ++n) {
      if (weights(n) < support_cut) continue;
      ParityBlock& b = blocks_[n % 2];
      b.levels.push_back(n);
      b.kept_weight += static_cast<long double>(weights(n));
    }
    for (ParityBlock& b : blocks_) {
      const int s = static_cast<int>(b.levels.size());
      b.g.assign(static_cast<size_t>(work_) * s, 0.0L);
      for (int j = 0; j < s; ++j) {
        const int level = b.levels[j];
        const long double root_w =
            std::sqrt(static_cast<long double>(weights(level)));
        for (int k = level % 2; k < work_; k += 2)
          b.g[k + static_cast<size_t>(j) * work_] =
              overlap_element_ld(k, level, y, q) * root_w;
      }
    }
    return;
  }

  if (eigvecs.rows() != dim_ || eigvecs.cols() != dim_)
    throw std::invalid_argument("fidelity context: eigenvector shape mismatch");
  std::vector<int> kept;
  for (int j = 0; j < dim_; ++j)
    if (weights(j) >= support_cut) {
      kept.push_back(j);
      kept_weight_ += static_cast<long double>(weights(j));
    }
  s_ = static_cast<int>(kept.size());
  c_cols_.assign(static_cast<size_t>(dim_) * s_,
                 std::complex<long double>(0.0L, 0.0L));
  for (int jj = 0; jj < s_; ++jj) {
    const int j = kept[jj];
    const long double root_w = std::sqrt(static_cast<long double>(weights(j)));
    for (int d = 0; d < dim_; ++d) {
      const cdouble v = eigvecs(d, j);
      c_cols_[d + static_cast<size_t>(jj) * dim_] = {
          static_cast<long double>(v.real()) * root_w,
          static_cast<long double>(v.imag()) * root_w};
    }
  }
  r_full_.assign(static_cast<size_t>(work_) * dim_, 0.0L);
  for (int d = 0; d < dim_; ++d)
    for (int k = d % 2; k < work_; k += 2)
      r_full_[k + static_cast<size_t>(d) * work_] = overlap_element_ld(k, d, y, q);
}

namespace {

// Re tr(W^dag M) with W the polar factor of the double image of M; Kahan
// compensation on the long-double products.
long double variational_trace(const std::vector<std::complex<long double>>& m,
                              int s) {
  Eigen::MatrixXcd md(s, s);
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i) {
      const auto& v = m[i + static_cast<size_t>(j) * s];
      md(i, j) = cdouble(static_cast<double>(v.real()),
                         static_cast<double>(v.imag()));
    }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(md,
                                         Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXcd w = svd.matrixU() * svd.matrixV().adjoint();

  long double sum = 0.0L, comp = 0.0L;
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i) {
      const auto& v = m[i + static_cast<size_t>(j) * s];
      const long double term =
          static_cast<long double>(w(i, j).real()) * v.real() +
          static_cast<long double>(w(i, j).imag()) * v.imag();
      const long double t = term - comp;
      const long double next = sum + t;
      comp = (next - sum) - t;
      sum = next;
    }
  return sum;
}

}  // namespace

double NearIdentityFidelity::deficit_diagonal(double tau) const {
  const long double tau_ld = static_cast<long double>(tau);
  const long double rate = tau_ld * (1.0L - eps_ld_);
  long double total = 0.0L;
  for (const ParityBlock& b : blocks_) {
    const int s = static_cast<int>(b.levels.size());
    if (s == 0) continue;
    const int parity = b.levels.front() % 2;
    std::vector<std::complex<long double>> m(static_cast<size_t>(s) * s, std::complex<long double>(0.0L, 0.0L));
    for (int k = parity; k < work_; k += 2) {
      const long double theta = rate * (k + 0.5L);
      const long double c = std::cos(theta);
      const long double ms = -std::sin(theta);
      for (int i = 0; i < s; ++i) {
        const long double gi = b.g[k + static_cast<size_t>(i) * work_];
        if (gi == 0.0L) continue;
        for (int j = 0; j <= i; ++j) {
          const long double prod =
              gi * b.g[k + static_cast<size_t>(j) * work_];
          auto& cell = m[i + static_cast<size_t>(j) * s];
          cell = {cell.real() + prod * c, cell.imag() + prod * ms};
        }
      }
    }
    for (int j = 0; j < s; ++j)  // the bilinear form is symmetric
      for (int i = 0; i < j; ++i)
        m[i + static_cast<size_t>(j) * s] = m[j + static_cast<size_t>(i) * s];
    total += b.kept_weight - variational_trace(m, s);
  }
  return static_cast<double>(std::max(0.0L, total));
}

double NearIdentityFidelity::deficit_general(double tau) const {
  const long double tau_ld = static_cast<long double>(tau);
  const long double rate = tau_ld * (1.0L - eps_ld_);
  using cld = std::complex<long double>;

  // G = R C  and  A = R (E^dag C), with E the free propagator's phases.
  std::vector<cld> gmat(static_cast<size_t>(work_) * s_, cld(0.0L, 0.0L));
  std::vector<cld> amat(static_cast<size_t>(work_) * s_, cld(0.0L, 0.0L));
  std::vector<cld> ephase(dim_);
  for (int d = 0; d < dim_; ++d) {
    const long double th = tau_ld * (d + 0.5L);
    ephase[d] = {std::cos(th), -std::sin(th)};
  }
  for (int j = 0; j < s_; ++j)
    for (int k = 0; k < work_; ++k) {
      cld ag{}, aa{};
      for (int d = k % 2; d < dim_; d += 2) {
        const long double r = r_full_[k + static_cast<size_t>(d) * work_];
        if (r == 0.0L) continue;
        const cld cv = c_cols_[d + static_cast<size_t>(j) * dim_];
        ag += r * cv;
        aa += r * (ephase[d] * cv);
      }
      gmat[k + static_cast<size_t>(j) * work_] = ag;
      amat[k + static_cast<size_t>(j) * work_] = aa;
    }

  std::vector<cld> m(static_cast<size_t>(s_) * s_, cld(0.0L, 0.0L));
  for (int k = 0; k < work_; ++k) {
    const long double theta = rate * (k + 0.5L);
    const cld phase{std::cos(theta), -std::sin(theta)};
    for (int i = 0; i < s_; ++i) {
      const cld ai = std::conj(amat[k + static_cast<size_t>(i) * work_]) * phase;
      for (int j = 0; j < s_; ++j)
        m[i + static_cast<size_t>(j) * s_] +=
            ai * gmat[k + static_cast<size_t>(j) * work_];
    }
  }
  const long double total = kept_weight_ - variational_trace(m, s_);
  return static_cast<double>(std::max(0.0L, total));
}

double NearIdentityFidelity::deficit(double tau) const {
  if (!std::isfinite(tau) || tau < 0.0)
    throw std::invalid_argument("fidelity context: bad tau");
  return diagonal_ ? deficit_diagonal(tau) : deficit_general(tau);
}

}  // namespace massqcrb::detail
