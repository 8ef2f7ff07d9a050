#include "tc/theory.hpp"

#include <cmath>

#include "tc/hp_filter.hpp"

namespace tc {

double kl_lambda(int k) {
  if (k < 1) throw ParameterError("basis index k must be >= 1");
  const double a = (k - 0.5) * M_PI;
  return 1.0 / (a * a);
}

KLBasis kl_basis(int k, int n, bool cosine) {
  KLBasis b;
  b.k = k;
  b.n = n;
  b.cosine = cosine;
  b.lambda_k = kl_lambda(k);
  b.phi.resize(n);
  const double scale = 1.0 / (n * std::sqrt(b.lambda_k));
  for (int t = 1; t <= n; ++t) {
    const double x = t * scale;
    b.phi[t - 1] = std::sqrt(2.0) * (cosine ? std::cos(x) : std::sin(x));
  }
  return b;
}

double shrinkage_factor(double mu, int k, int m) {
  if (!(mu > 0.0)) throw ParameterError("mu must be > 0");
  if (m < 1) throw ParameterError("m must be >= 1");
  const double lk = kl_lambda(k);
  return std::pow(mu / (mu + lk * lk), m);
}

namespace {

struct Interior {
  int lo;  // first index included
  int hi;  // one past last
};

Interior interior_range(int n, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw ParameterError("interior fraction must be in (0, 1]");
  const int drop = static_cast<int>(std::floor(n * (1.0 - fraction) / 2.0));
  return {drop, n - drop};
}

Vec residual_passes(const Vec& v, int n, double lambda, int m) {
  auto fact = smoother_factorization(n, lambda);
  Vec x = v;
  for (int j = 0; j < m; ++j) x -= fact->solve(x);
  return x;
}

}  // namespace

ShrinkageCheck empirical_shrinkage_error(int k, int n, double mu, int m,
                                         bool cosine, double interior_fraction) {
  const KLBasis basis = kl_basis(k, n, cosine);
  const double lambda = mu * std::pow(static_cast<double>(n), 4);
  ShrinkageCheck check;
  check.k = k;
  check.n = n;
  check.mu = mu;
  check.m = m;
  check.cosine = cosine;
  check.interior_fraction = interior_fraction;
  check.predicted_factor = shrinkage_factor(mu, k, m);
  check.k_outside_admissible = k > std::sqrt(std::log(static_cast<double>(n))) / M_PI;

  const Vec x = residual_passes(basis.phi, n, lambda, m);
  const Interior in = interior_range(n, interior_fraction);
  double sup = 0.0;
  for (int t = in.lo; t < in.hi; ++t)
    sup = std::max(sup, std::abs(x[t] - check.predicted_factor * basis.phi[t]));
  check.empirical_sup_error = sup;
  return check;
}

ShrinkageCheck exponential_shrinkage_check(double c, int n, double mu, int m) {
  if (!(mu > 0.0)) throw ParameterError("mu must be > 0");
  if (m < 1) throw ParameterError("m must be >= 1");
  const double lambda = mu * std::pow(static_cast<double>(n), 4);
  Vec e(n);
  for (int t = 1; t <= n; ++t) e[t - 1] = std::exp(c * t / n);

  const double c4 = std::pow(c, 4);
  const double retained = 1.0 - std::pow(mu * c4 / (mu * c4 + 1.0), m);

  // Trend side of m residual passes: e - (I-S)^m e.
  const Vec trend = e - residual_passes(e, n, lambda, m);
  const Interior in = interior_range(n, 0.6);
  double sup = 0.0;
  for (int t = in.lo; t < in.hi; ++t) {
    const double pred = retained * e[t];
    sup = std::max(sup, std::abs(trend[t] - pred) / std::abs(pred));
  }

  ShrinkageCheck check;
  check.k = 0;
  check.n = n;
  check.mu = mu;
  check.m = m;
  check.predicted_factor = retained;
  check.empirical_sup_error = sup;
  check.interior_fraction = 0.6;
  return check;
}

double polynomial_annihilation_error(int d, int n, double lambda, int m,
                                     double interior_fraction) {
  if (d < 0) throw ParameterError("degree must be >= 0");
  if (m < 1) throw ParameterError("m must be >= 1");
  Vec b(n);
  double sup_b = 0.0;
  for (int t = 1; t <= n; ++t) {
    b[t - 1] = std::pow(static_cast<double>(t) / n, d);
    sup_b = std::max(sup_b, std::abs(b[t - 1]));
  }
  const Vec x = residual_passes(b, n, lambda, m);
  const Interior in = interior_range(n, interior_fraction);
  double sup = 0.0;
  for (int t = in.lo; t < in.hi; ++t) sup = std::max(sup, std::abs(x[t]));
  return sup / sup_b;
}

std::vector<CheckRow> run_check_grid() {
  std::vector<CheckRow> rows;
  const double mu = 1.6e-5;
  const int n = 400;
  const double sqrt2 = std::sqrt(2.0);

  for (int k = 1; k <= 3; ++k)
    for (int m : {1, 2, 5})
      for (bool cosine : {false, true}) {
        const ShrinkageCheck ch = empirical_shrinkage_error(k, n, mu, m, cosine, 0.6);
        CheckRow row;
        row.name = std::string("trig_shrinkage k=") + std::to_string(k) +
                   " m=" + std::to_string(m) + (cosine ? " cos" : " sin");
        row.value = ch.empirical_sup_error;
        row.threshold = 0.05 * sqrt2;
        row.pass = row.value < row.threshold;
        rows.push_back(std::move(row));
      }

  {
    // Constants survive every pass exactly: the a = 0 branch.
    const double err =
        polynomial_annihilation_error(0, n, mu * std::pow(n, 4), 3, 1.0);
    rows.push_back({"constant_annihilated_exactly m=3", err, 1e-12, err < 1e-12});
  }

  for (double c : {3.0, -3.0}) {
    const ShrinkageCheck ch = exponential_shrinkage_check(c, n, mu, 1);
    CheckRow row;
    row.name = std::string("exp_shrinkage c=") + (c > 0 ? "+3" : "-3") + " m=1";
    row.value = ch.empirical_sup_error;
    row.threshold = 0.05;
    row.pass = row.value < row.threshold;
    rows.push_back(std::move(row));
  }

  const double lambda_n = 1600.0 * std::pow(n / 100.0, 4);
  for (int d : {0, 1}) {
    const double err = polynomial_annihilation_error(d, n, lambda_n, 1, 1.0);
    rows.push_back({"poly_exact d=" + std::to_string(d), err, 1e-12, err < 1e-12});
  }
  for (int d : {2, 3}) {
    const double err = polynomial_annihilation_error(d, n, lambda_n, 1);
    rows.push_back({"poly_interior d=" + std::to_string(d) + " m=1", err, 0.01,
                    err < 0.01});
  }
  {
    const double e1 = polynomial_annihilation_error(7, n, lambda_n, 1);
    const double e2 = polynomial_annihilation_error(7, n, lambda_n, 2);
    rows.push_back({"poly_comparative d=7 m=2 vs m=1 (ratio)", e2 / e1, 1.0,
                    e2 < e1});
  }
  return rows;
}

}  // namespace tc
