#include "tc/hp_filter.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace tc {

namespace {

void require_series(const Vec& y, int n_expected = -1) {
  if (n_expected >= 0 && y.size() != n_expected)
    throw DimensionError("vector length " + std::to_string(y.size()) +
                         " does not match operator size " + std::to_string(n_expected));
  if (!y.allFinite())
    throw DataError("input contains missing or non-finite values");
}

void require_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw ParameterError("lambda must be finite and >= 0");
}

}  // namespace

PenaltyOperator build_penalty_operator(int n) {
  if (n < 5)
    throw InvalidLengthError("series length " + std::to_string(n) +
                             " is too short; need at least 5 observations");
  PenaltyOperator P;
  P.n = n;
  P.diag.assign(n, 6.0);
  P.diag[0] = P.diag[n - 1] = 1.0;
  P.diag[1] = P.diag[n - 2] = 5.0;
  P.off1.assign(n - 1, -4.0);
  P.off1[0] = P.off1[n - 2] = -2.0;
  P.off2.assign(n - 2, 1.0);
  return P;
}

PentaCholesky::PentaCholesky(const PenaltyOperator& penalty, double lambda)
    : n_(penalty.n), lambda_(lambda) {
  require_lambda(lambda);
  if (n_ < 5) throw InvalidLengthError("penalty operator is empty");
  d_.resize(n_);
  l1_.resize(n_ - 1);
  l2_.resize(n_ - 2);
  a0_.resize(n_);
  a1_.resize(n_ - 1);
  a2_.resize(n_ - 2);
  for (int i = 0; i < n_; ++i) a0_[i] = 1.0 + lambda * penalty.diag[i];
  for (int i = 0; i + 1 < n_; ++i) a1_[i] = lambda * penalty.off1[i];
  for (int i = 0; i + 2 < n_; ++i) a2_[i] = lambda * penalty.off2[i];

  auto a0 = [&](int i) { return a0_[i]; };
  auto a1 = [&](int i) { return a1_[i]; };
  auto a2 = [&](int i) { return a2_[i]; };

  d_[0] = a0(0);
  l1_[0] = a1(0) / d_[0];
  l2_[0] = a2(0) / d_[0];
  d_[1] = a0(1) - l1_[0] * l1_[0] * d_[0];
  l1_[1] = (a1(1) - l2_[0] * l1_[0] * d_[0]) / d_[1];
  l2_[1] = a2(1) / d_[1];
  for (int i = 2; i < n_; ++i) {
    d_[i] = a0(i) - l1_[i - 1] * l1_[i - 1] * d_[i - 1] -
            l2_[i - 2] * l2_[i - 2] * d_[i - 2];
    if (!(d_[i] > 0.0))
      throw NumericalError("pentadiagonal factorization lost positive definiteness");
    if (i < n_ - 1)
      l1_[i] = (a1(i) - l2_[i - 1] * l1_[i - 1] * d_[i - 1]) / d_[i];
    if (i < n_ - 2) l2_[i] = a2(i) / d_[i];
  }
}

void PentaCholesky::factor_sweep(double* z) const {
  // forward substitution with L (unit lower, bandwidth 2), then scale by D
  z[1] -= l1_[0] * z[0];
  for (int i = 2; i < n_; ++i) z[i] -= l1_[i - 1] * z[i - 1] + l2_[i - 2] * z[i - 2];
  for (int i = 0; i < n_; ++i) z[i] /= d_[i];
  // back substitution with L^T
  z[n_ - 2] -= l1_[n_ - 2] * z[n_ - 1];
  for (int i = n_ - 3; i >= 0; --i) z[i] -= l1_[i] * z[i + 1] + l2_[i] * z[i + 2];
}

namespace {

// Compensated accumulator: exact products via fma, Neumaier running error.
struct TwoSum {
  double s = 0.0, c = 0.0;
  void add(double v) {
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  void add_prod(double a, double x) {
    const double p = a * x;
    add(p);
    add(std::fma(a, x, -p));
  }
  double value() const { return s + c; }
};

}  // namespace

void PentaCholesky::apply(const double* x, double* y) const {
  // y = b_residual(x) evaluated as b - A x in compensated arithmetic, with b
  // preloaded into y. The extra digits matter: the refinement step below can
  // only repair what the residual still resolves.
  for (int i = 0; i < n_; ++i) {
    TwoSum acc;
    acc.add(y[i]);
    acc.add_prod(-a0_[i], x[i]);
    if (i >= 1) acc.add_prod(-a1_[i - 1], x[i - 1]);
    if (i + 1 < n_) acc.add_prod(-a1_[i], x[i + 1]);
    if (i >= 2) acc.add_prod(-a2_[i - 2], x[i - 2]);
    if (i + 2 < n_) acc.add_prod(-a2_[i], x[i + 2]);
    y[i] = acc.value();
  }
}

void PentaCholesky::solve_inplace(Vec& x) const {
  if (x.size() != n_)
    throw DimensionError("right-hand side length does not match factorization");
  Vec r = x;
  factor_sweep(x.data());
  // One refinement step with a compensated residual: r = b - A x to roughly
  // double precision, then x += solve(r). For lambda = 0 the residual is
  // exactly zero and x stays bitwise equal to b.
  apply(x.data(), r.data());
  factor_sweep(r.data());
  x += r;
}

Vec PentaCholesky::solve(const Vec& b) const {
  Vec x = b;
  solve_inplace(x);
  return x;
}

namespace {

std::shared_ptr<const PentaCholesky> make_factorization(int n, double lambda) {
  return std::make_shared<const PentaCholesky>(build_penalty_operator(n), lambda);
}

std::shared_ptr<const PenaltySpectrum> make_spectrum(int n) {
  const PenaltyOperator P = build_penalty_operator(n);
  Mat A = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) A(i, i) = P.diag[i];
  for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = A(i + 1, i) = P.off1[i];
  for (int i = 0; i + 2 < n; ++i) A(i, i + 2) = A(i + 2, i) = P.off2[i];
  Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("eigendecomposition of the penalty matrix failed");
  auto sp = std::make_shared<PenaltySpectrum>();
  sp->n = n;
  sp->mu = es.eigenvalues();
  // The null space of the second-difference operator is two-dimensional; the
  // solver returns tiny values of either sign there. Classify anything below
  // 1e-10 * max eigenvalue as an exact zero so the null-space dimension is
  // deterministic.
  const double cutoff = 1e-10 * sp->mu[n - 1];
  for (int i = 0; i < n; ++i)
    if (sp->mu[i] < cutoff) sp->mu[i] = 0.0;
  return sp;
}

}  // namespace

std::shared_ptr<const PentaCholesky> smoother_factorization(int n, double lambda) {
  require_lambda(lambda);
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::shared_ptr<const PentaCholesky>> cache;
  const auto key = std::make_pair(n, lambda);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  // Factor outside the lock; losing a race just discards a duplicate.
  auto fact = make_factorization(n, lambda);
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(key, std::move(fact));
  return it->second;
}

std::shared_ptr<const PenaltySpectrum> penalty_spectrum(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const PenaltySpectrum>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  auto sp = make_spectrum(n);
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(n, std::move(sp));
  return it->second;
}

FilterResult hp_smooth(const Vec& y, double lambda) {
  require_series(y);
  auto fact = smoother_factorization(static_cast<int>(y.size()), lambda);
  FilterResult res;
  res.trend = fact->solve(y);
  res.cycle = y - res.trend;
  res.method = "HP";
  res.iterations = 1;
  res.lambda = lambda;
  return res;
}

Vec apply_smoother(const SmootherSpec& spec, const Vec& v) {
  require_series(v, spec.n);
  return smoother_factorization(spec.n, spec.lambda)->solve(v);
}

SmootherTraces smoother_traces(const PenaltySpectrum& spectrum, double lambda,
                               int m_max) {
  // lambda = 0 makes tr(I - S) vanish and the criterion ratio undefined.
  if (!std::isfinite(lambda) || lambda <= 0.0)
    throw ParameterError("trace computation requires lambda > 0");
  if (m_max < 1) throw ParameterError("m_max must be >= 1");
  const int n = spectrum.n;
  SmootherTraces out;
  out.tr_boost.assign(m_max, 0.0);
  // Incremental eigenvalue powers: O(n) per level instead of O(n * m).
  Vec r(n), pw(n);
  for (int i = 0; i < n; ++i) {
    r[i] = lambda * spectrum.mu[i] / (1.0 + lambda * spectrum.mu[i]);
    pw[i] = 1.0;
    out.tr_residual += r[i];
  }
  for (int m = 1; m <= m_max; ++m) {
    double tr = 0.0;
    for (int i = 0; i < n; ++i) {
      pw[i] *= r[i];
      tr += 1.0 - pw[i];
    }
    out.tr_boost[m - 1] = tr;
  }
  return out;
}

ResidualRange residual_eigen_range(const PenaltySpectrum& spectrum, double lambda) {
  require_lambda(lambda);
  ResidualRange out;
  out.r_min = 1.0;
  for (int i = 0; i < spectrum.n; ++i) {
    if (spectrum.mu[i] <= 0.0) continue;
    const double r = lambda * spectrum.mu[i] / (1.0 + lambda * spectrum.mu[i]);
    out.r_min = std::min(out.r_min, r);
    out.r_max = std::max(out.r_max, r);
  }
  if (lambda == 0.0) out.r_min = out.r_max = 0.0;
  return out;
}

}  // namespace tc
