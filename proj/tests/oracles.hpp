#pragma once

// Dense reference implementations for the test suite. Everything here takes
// the slow, obvious route on purpose (explicit matrices, full inverses,
// normal equations): the production code must agree with these, never the
// other way around. Keep this file free of production headers other than the
// basic types.

#include <Eigen/Dense>

#include "tc/rng.hpp"
#include "tc/types.hpp"

namespace oracle {

// (n-2) x n second-difference map: row i is (1, -2, 1) at columns i..i+2.
inline tc::Mat second_difference(int n) {
  tc::Mat D = tc::Mat::Zero(n - 2, n);
  for (int i = 0; i + 2 < n; ++i) {
    D(i, i) = 1.0;
    D(i, i + 1) = -2.0;
    D(i, i + 2) = 1.0;
  }
  return D;
}

// n x n curvature penalty.
inline tc::Mat penalty(int n) {
  const tc::Mat D = second_difference(n);
  return D.transpose() * D;
}

// Dense smoother (I + lambda P)^{-1}, full-pivot inverse.
inline tc::Mat smoother(int n, double lambda) {
  const tc::Mat A = tc::Mat::Identity(n, n) + lambda * penalty(n);
  return A.fullPivLu().solve(tc::Mat::Identity(n, n));
}

// Dense residual operator I - S.
inline tc::Mat residual(int n, double lambda) {
  return tc::Mat::Identity(n, n) - smoother(n, lambda);
}

// Plain repeated multiplication; m stays small in every use.
inline tc::Mat matrix_power(const tc::Mat& A, int m) {
  tc::Mat P = tc::Mat::Identity(A.rows(), A.cols());
  for (int j = 0; j < m; ++j) P = P * A;
  return P;
}

// OLS through the normal equations, deliberately a different algorithm from
// the QR used in production.
inline tc::Vec ols(const tc::Mat& X, const tc::Vec& y) {
  return (X.transpose() * X).ldlt().solve(X.transpose() * y);
}

// Least-squares affine fit a + b t (t = 1..n), evaluated back on the grid.
inline tc::Vec affine_fit(const tc::Vec& y) {
  const int n = static_cast<int>(y.size());
  tc::Mat X(n, 2);
  for (int t = 0; t < n; ++t) {
    X(t, 0) = 1.0;
    X(t, 1) = t + 1;
  }
  const tc::Vec beta = ols(X, y);
  return X * beta;
}

inline tc::Vec random_vec(int n, tc::Rng& rng) {
  tc::Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.gaussian();
  return v;
}

// Ascending eigenvalues of the dense penalty matrix.
inline tc::Vec penalty_eigenvalues(int n) {
  Eigen::SelfAdjointEigenSolver<tc::Mat> es(penalty(n), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace oracle
