#pragma once

#include "tc/hp_filter.hpp"
#include "tc/types.hpp"

namespace tc {

struct BoostConfig {
  double lambda = 0.0;
  int m_max = 200;
};

struct ICPath {
  std::vector<double> values;  // IC(m) for m = 1..m_max
  int argmin = 1;              // smallest m attaining the minimum
  bool at_cap = false;         // argmin hit m_max
};

// Repeated residual smoothing: cycle after m passes is (I - S)^m y, trend is
// y minus that. m = 1 reproduces hp_smooth bit for bit; m = 2 is the
// "twicing" variant.
FilterResult boosted_hp(const Vec& y, double lambda, int m);

// Stopping criterion path
//   IC(m) = |c_m|^2 / |c_1|^2 + log(n) * tr(B_m) / tr(I - S)
// evaluated for m = 1..m_max with a single factorization (one extra solve
// per level) and traces from the cached penalty spectrum. An input whose
// first-pass cycle is numerically zero (affine input) has no well-defined
// ratio and is rejected: treat such input as pure trend instead.
ICPath ic_path(const Vec& y, double lambda, int m_max);

// Iterates until the IC minimum and returns that trend/cycle pair together
// with the full path. A minimum at m_max sets stopping_not_interior: the
// path never turned up within the cap, so the cap, not the criterion, chose.
FilterResult boosted_hp_bic(const Vec& y, const BoostConfig& config);

}  // namespace tc
