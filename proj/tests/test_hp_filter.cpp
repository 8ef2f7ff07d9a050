#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "oracles.hpp"
#include "tc/hp_filter.hpp"

using namespace tc;

namespace {

// Columns of the production smoother, reconstructed through solves.
Mat reconstruct_smoother(int n, double lambda) {
  auto fact = smoother_factorization(n, lambda);
  Mat S(n, n);
  for (int j = 0; j < n; ++j) {
    Vec e = Vec::Zero(n);
    e[j] = 1.0;
    S.col(j) = fact->solve(e);
  }
  return S;
}

}  // namespace

TEST_CASE("penalty bands match the dense second-difference product") {
  for (int n : {5, 6, 7, 10, 30}) {
    CAPTURE(n);
    const PenaltyOperator P = build_penalty_operator(n);
    const Mat dense = oracle::penalty(n);
    for (int i = 0; i < n; ++i) CHECK(P.diag[i] == dense(i, i));
    for (int i = 0; i + 1 < n; ++i) CHECK(P.off1[i] == dense(i, i + 1));
    for (int i = 0; i + 2 < n; ++i) CHECK(P.off2[i] == dense(i, i + 2));
  }
}

TEST_CASE("five-point penalty has the documented corner values") {
  const Mat dense = oracle::penalty(5);
  CHECK(dense(0, 0) == 1.0);
  CHECK(dense(0, 1) == -2.0);
  CHECK(dense(0, 2) == 1.0);
  CHECK(dense(0, 3) == 0.0);
  CHECK(dense(0, 4) == 0.0);

  const PenaltyOperator P = build_penalty_operator(5);
  CHECK(P.diag == std::vector<double>{1.0, 5.0, 6.0, 5.0, 1.0});
  CHECK(P.off1 == std::vector<double>{-2.0, -4.0, -4.0, -2.0});
  CHECK(P.off2 == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("series shorter than five observations are rejected") {
  CHECK_THROWS_AS(build_penalty_operator(4), InvalidLengthError);
  CHECK_THROWS_AS(hp_smooth(Vec::Ones(4), 1600.0), InvalidLengthError);
}

TEST_CASE("banded solve matches the dense inverse route") {
  Rng rng(41);
  for (int n : {5, 10, 30}) {
    for (double lambda : {0.0, 1.0, 1600.0, 1e7}) {
      CAPTURE(n);
      CAPTURE(lambda);
      const Vec y = oracle::random_vec(n, rng);
      const Vec banded = hp_smooth(y, lambda).trend;
      const Vec dense = oracle::smoother(n, lambda) * y;
      // Both routes lose digits with the conditioning of I + lambda * P,
      // whose spectrum spans [1, 1 + 16 lambda].
      const double tol = std::max(
          1e-9, 10 * std::numeric_limits<double>::epsilon() * (1 + 16 * lambda));
      CHECK((banded - dense).norm() <= tol * dense.norm());
    }
  }
}

TEST_CASE("hand-checked five-point solve") {
  Vec y(5);
  y << 1, -1, 2, -2, 3;
  const Vec banded = hp_smooth(y, 1.0).trend;
  const Vec dense = oracle::smoother(5, 1.0) * y;
  for (int i = 0; i < 5; ++i)
    CHECK(banded[i] == doctest::Approx(dense[i]).epsilon(1e-12));
}

TEST_CASE("zero penalty reproduces the input bit for bit") {
  Rng rng(7);
  const Vec y = oracle::random_vec(12, rng);
  const FilterResult res = hp_smooth(y, 0.0);
  for (int i = 0; i < 12; ++i) {
    CHECK(res.trend[i] == y[i]);
    CHECK(res.cycle[i] == 0.0);
  }
}

TEST_CASE("large penalty converges to the least-squares line") {
  Rng rng(11);
  const int n = 40;
  Vec y(n);
  for (int t = 0; t < n; ++t)
    y[t] = 3.0 + 0.5 * (t + 1) + std::sin(0.3 * t) + 0.2 * rng.gaussian();
  const Vec trend = hp_smooth(y, 1e12).trend;
  const Vec line = oracle::affine_fit(y);
  CHECK((trend - line).norm() <= 1e-4 * line.norm());
}

TEST_CASE("smoother is symmetric with eigenvalues in (0,1]") {
  const int n = 50;
  const Mat S = reconstruct_smoother(n, 1600.0);
  CHECK((S - S.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()),
                                        Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
}

TEST_CASE("trend and cycle always add back to the input") {
  Rng rng(3);
  for (int n : {5, 17, 80}) {
    const Vec y = oracle::random_vec(n, rng);
    const FilterResult res = hp_smooth(y, 1600.0);
    CHECK((res.trend + res.cycle - y).norm() <= 1e-10 * y.norm());
  }
}

TEST_CASE("affine input passes through with a zero cycle") {
  const int n = 60;
  Vec y(n);
  for (int t = 0; t < n; ++t) y[t] = -4.0 + 2.5 * (t + 1);
  for (double lambda : {1.0, 1600.0, 1e9}) {
    const FilterResult res = hp_smooth(y, lambda);
    const double tol = std::max(
        1e-10, 10 * std::numeric_limits<double>::epsilon() * (1 + 16 * lambda));
    CHECK(res.cycle.cwiseAbs().maxCoeff() <= tol * y.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("guards reject bad penalties and bad inputs") {
  CHECK_THROWS_AS(hp_smooth(Vec::Ones(10), -1.0), ParameterError);
  CHECK_THROWS_AS(hp_smooth(Vec::Ones(10),
                            std::numeric_limits<double>::infinity()),
                  ParameterError);
  Vec bad = Vec::Ones(10);
  bad[4] = missing_value;
  CHECK_THROWS_AS(hp_smooth(bad, 1600.0), DataError);

  auto fact = smoother_factorization(10, 1600.0);
  CHECK_THROWS_AS(fact->solve(Vec::Ones(9)), DimensionError);

  SmootherSpec spec{10, 1600.0};
  CHECK_THROWS_AS(apply_smoother(spec, Vec::Ones(9)), DimensionError);
}

TEST_CASE("spectrum has exactly two zeros and the documented trace") {
  auto sp5 = penalty_spectrum(5);
  int zeros = 0;
  for (int i = 0; i < 5; ++i)
    if (sp5->mu[i] == 0.0) ++zeros;
  CHECK(zeros == 2);
  // trace of the 5-point penalty: sum of squared stencil entries, 3*(1+4+1)
  CHECK(sp5->mu.sum() == doctest::Approx(18.0).epsilon(1e-12));

  auto sp12 = penalty_spectrum(12);
  const Vec dense = oracle::penalty_eigenvalues(12);
  for (int i = 0; i < 12; ++i)
    CHECK(sp12->mu[i] == doctest::Approx(std::max(0.0, dense[i])).epsilon(1e-8));
}

TEST_CASE("smoother trace from the spectrum equals the dense diagonal sum") {
  const int n = 30;
  const double lambda = 1600.0;
  auto sp = penalty_spectrum(n);
  double tr_s = 0.0;
  for (int i = 0; i < n; ++i) tr_s += 1.0 / (1.0 + lambda * sp->mu[i]);
  const double dense = oracle::smoother(n, lambda).trace();
  CHECK(std::abs(tr_s - dense) < 1e-8);
}

TEST_CASE("traces match the dense matrix-power route") {
  const int n = 20;
  const double lambda = 1600.0;
  auto sp = penalty_spectrum(n);
  const SmootherTraces traces = smoother_traces(*sp, lambda, 5);

  const Mat R = oracle::residual(n, lambda);
  CHECK(std::abs(traces.tr_residual - R.trace()) < 1e-8);
  for (int m = 1; m <= 5; ++m) {
    const double dense = n - oracle::matrix_power(R, m).trace();
    CHECK(traces.tr_boost[m - 1] == doctest::Approx(dense).epsilon(1e-8));
  }
}

TEST_CASE("first boost trace equals the smoother trace") {
  const int n = 25;
  const double lambda = 1600.0;
  auto sp = penalty_spectrum(n);
  const SmootherTraces traces = smoother_traces(*sp, lambda, 1);
  double tr_s = 0.0;
  for (int i = 0; i < n; ++i) tr_s += 1.0 / (1.0 + lambda * sp->mu[i]);
  CHECK(traces.tr_boost[0] == doctest::Approx(tr_s).epsilon(1e-12));
}

TEST_CASE("boost trace increases toward the full dimension") {
  // The residual operator is a strict contraction off the affine null space
  // (dense spectral radius < 1 below), so its powers vanish and the boost
  // trace climbs to n: the two null directions contribute 1 apiece from the
  // first level on, the rest approach 1 geometrically.
  const int n = 12;
  const double lambda = 10.0;
  auto sp = penalty_spectrum(n);

  Eigen::SelfAdjointEigenSolver<Mat> es(oracle::residual(n, lambda),
                                        Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().maxCoeff() < 1.0);

  const int m_max = 1000000;
  const SmootherTraces traces = smoother_traces(*sp, lambda, m_max);
  for (int m = 1; m < 50; ++m)
    CHECK(traces.tr_boost[m] > traces.tr_boost[m - 1]);
  CHECK(std::abs(traces.tr_boost[m_max - 1] - n) < 1e-6);
}

TEST_CASE("traces require a positive penalty") {
  auto sp = penalty_spectrum(10);
  CHECK_THROWS_AS(smoother_traces(*sp, 0.0, 5), ParameterError);
  CHECK_THROWS_AS(smoother_traces(*sp, -2.0, 5), ParameterError);
  CHECK_THROWS_AS(smoother_traces(*sp, 1600.0, 0), ParameterError);
}

TEST_CASE("residual eigenvalue range brackets the dense extremes") {
  const int n = 20;
  const double lambda = 1600.0;
  auto sp = penalty_spectrum(n);
  const ResidualRange range = residual_eigen_range(*sp, lambda);

  Eigen::SelfAdjointEigenSolver<Mat> es(oracle::residual(n, lambda),
                                        Eigen::EigenvaluesOnly);
  const Vec ev = es.eigenvalues();
  // Two zero directions, then the contraction band [r_min, r_max].
  CHECK(range.r_min == doctest::Approx(ev[2]).epsilon(1e-8));
  CHECK(range.r_max == doctest::Approx(ev[n - 1]).epsilon(1e-8));
  CHECK(range.r_min > 0.0);
  CHECK(range.r_max < 1.0);

  const ResidualRange zero = residual_eigen_range(*sp, 0.0);
  CHECK(zero.r_min == 0.0);
  CHECK(zero.r_max == 0.0);
}

TEST_CASE("factorization cache returns shared objects") {
  auto a = smoother_factorization(33, 1600.0);
  auto b = smoother_factorization(33, 1600.0);
  CHECK(a.get() == b.get());
  auto c = smoother_factorization(33, 6.25);
  CHECK(a.get() != c.get());
  CHECK(penalty_spectrum(33).get() == penalty_spectrum(33).get());
}
