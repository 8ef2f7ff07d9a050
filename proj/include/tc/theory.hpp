#pragma once

#include <string>
#include <vector>

#include "tc/types.hpp"

namespace tc {

// Sampled trigonometric basis with eigen-scale lambda_k = 1/((k-1/2) pi)^2:
//   sine:   sqrt(2) sin(t / (n sqrt(lambda_k)))
//   cosine: sqrt(2) cos(t / (n sqrt(lambda_k)))
// for t = 1..n. With the smoothing penalty tied to the sample size as
// lambda = mu n^4, repeated residual passes scale these vectors by an
// n-free factor, which is what the checks below measure.
struct KLBasis {
  int k = 1;
  int n = 0;
  bool cosine = false;
  double lambda_k = 0.0;
  Vec phi;
};

double kl_lambda(int k);
KLBasis kl_basis(int k, int n, bool cosine);

// Predicted residual-pass multiplier (mu / (mu + lambda_k^2))^m.
double shrinkage_factor(double mu, int k, int m);

struct ShrinkageCheck {
  int k = 0;
  int n = 0;
  double mu = 0.0;
  int m = 0;
  bool cosine = false;
  double predicted_factor = 0.0;
  double empirical_sup_error = 0.0;
  double interior_fraction = 0.6;
  bool k_outside_admissible = false;  // k above the pi^{-1} sqrt(log n) bound
};

// Applies (I - S)^m with lambda = mu n^4 to the sampled basis vector and
// reports sup |result - predicted_factor * basis| over the middle
// interior_fraction of indices. The k-bound is a flag, never an error:
// at workable n every small k exceeds it.
ShrinkageCheck empirical_shrinkage_error(int k, int n, double mu, int m,
                                         bool cosine, double interior_fraction);

// Applies the smoother m times to e^{c t / n} and reports the interior sup
// of |result - pred| / |pred| where pred keeps the fraction
// 1 - (mu c^4 / (mu c^4 + 1))^m of the exponential. c = 0 reduces to exact
// constant pass-through with predicted multiplier 1.
ShrinkageCheck exponential_shrinkage_check(double c, int n, double mu, int m);

// Interior sup of (I - S)^m applied to (t/n)^d, normalized by sup (t/n)^d.
// Exactly zero (machine precision) for d <= 1; small for d <= 4m - 1.
double polynomial_annihilation_error(int d, int n, double lambda, int m,
                                     double interior_fraction = 0.6);

struct CheckRow {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

// The fixed grid behind the `check` subcommand: trigonometric shrinkage for
// k in 1..3 and m in {1,2,5}, constant and exponential checks, polynomial
// annihilation up to the comparative degree-7 case.
std::vector<CheckRow> run_check_grid();

}  // namespace tc
