#pragma once

#include <memory>
#include <vector>

#include "tc/types.hpp"

namespace tc {

// Bands of the symmetric pentadiagonal matrix D D', where D is the
// (n-2) x n second-difference operator. Row i of D is (1, -2, 1) placed at
// columns i..i+2. Stored by diagonals; diag[i] is the main diagonal entry.
struct PenaltyOperator {
  int n = 0;
  std::vector<double> diag;   // n entries
  std::vector<double> off1;   // n-1 entries
  std::vector<double> off2;   // n-2 entries
};

// Requires n >= 5 so that every band pattern (edge rows and interior rows)
// is present. Shorter series are rejected rather than special-cased.
PenaltyOperator build_penalty_operator(int n);

// LDL^T factorization of A = I + lambda * DD'. A is symmetric positive
// definite for every lambda >= 0 (identity plus a PSD matrix), so the
// factorization exists without pivoting. Factor once, solve many times:
// both passes are O(n). Each solve applies one step of iterative refinement,
// which keeps the forward error near machine precision even when lambda
// pushes the condition number to 1 + 16 lambda; polynomial pass-through
// identities hold to ~1e-15 instead of eps * cond.
class PentaCholesky {
 public:
  PentaCholesky(const PenaltyOperator& penalty, double lambda);

  int size() const { return n_; }
  double lambda() const { return lambda_; }

  Vec solve(const Vec& b) const;
  void solve_inplace(Vec& x) const;

 private:
  void factor_sweep(double* z) const;  // L D L^T sweeps, in place
  // y holds b on entry, b - A x (compensated) on exit.
  void apply(const double* x, double* y) const;

  int n_;
  double lambda_;
  std::vector<double> d_, l1_, l2_;
  std::vector<double> a0_, a1_, a2_;  // bands of A, kept for the residual
};

struct SmootherSpec {
  int n = 0;
  double lambda = 0.0;
};

// Eigenvalues of DD' in ascending order. The two leading eigenvalues are
// exact zeros (the null space is spanned by constants and linear trends);
// solver output below 1e-10 * max eigenvalue is classified as zero.
struct PenaltySpectrum {
  int n = 0;
  Vec mu;
};

struct SmootherTraces {
  double tr_residual = 0.0;      // tr(I - S)
  std::vector<double> tr_boost;  // tr(B_m) for m = 1..m_max
};

// Shared, thread-safe caches. Concurrent callers may hold the returned
// objects while other threads insert new entries.
std::shared_ptr<const PentaCholesky> smoother_factorization(int n, double lambda);
std::shared_ptr<const PenaltySpectrum> penalty_spectrum(int n);

// Trend extraction: solves (I + lambda * DD') f = y.
FilterResult hp_smooth(const Vec& y, double lambda);

// One smoother pass S v for arbitrary v (no result bookkeeping).
Vec apply_smoother(const SmootherSpec& spec, const Vec& v);

// Trace identities evaluated through the penalty spectrum:
//   tr(I - S) = sum_i r_i,        r_i = lambda*mu_i / (1 + lambda*mu_i)
//   tr(B_m)   = sum_i (1 - r_i^m)
// Each r_i lies in [0,1), so tr(B_m) increases in m toward n; the two
// zero-penalty directions have r_i = 0 and contribute 1 apiece from m = 1 on.
// Requires lambda > 0: at lambda = 0 the residual trace vanishes and every
// ratio built on it is undefined.
SmootherTraces smoother_traces(const PenaltySpectrum& spectrum, double lambda,
                               int m_max);

// Smallest and largest nonzero residual eigenvalue r_i; bounds the per-step
// contraction of repeated residual passes on any input.
struct ResidualRange {
  double r_min = 0.0;
  double r_max = 0.0;
};
ResidualRange residual_eigen_range(const PenaltySpectrum& spectrum, double lambda);

}  // namespace tc
