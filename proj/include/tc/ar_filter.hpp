#pragma once

#include "tc/types.hpp"

namespace tc {

enum class ARMode { one_step, projection };

struct ARSpec {
  int p = 4;
  int horizon = 1;             // used by projection mode
  ARMode mode = ARMode::one_step;

  static ARSpec by_frequency(Frequency f) {
    return ARSpec{default_ar_order(f), 1, ARMode::one_step};
  }
};

struct ARCoefficients {
  Vec beta;          // intercept first, then lag coefficients
  Vec fitted;        // full length; leading undefined positions are NaN
  Vec residuals;     // y - fitted on the defined range, NaN elsewhere
  int first_defined; // index of the first defined fitted value
};

// OLS with intercept.
//   one_step:   y_t     on (1, y_{t-1}, ..., y_{t-p}),     defined from t = p
//   projection: y_{t+h} on (1, y_t,     ..., y_{t-p+1}),   defined from t = p+h-1
// projection with h = 1 is the same regression as one_step.
ARCoefficients ar_fit(const Vec& y, const ARSpec& spec);

// Trend = fitted values, cycle = residuals. The first p (one_step) or
// p+h-1 (projection) positions have no regressors and carry NaN markers:
// downstream consumers must skip them, never zero-fill.
FilterResult ar_trend_cycle(const Vec& y, const ARSpec& spec);

}  // namespace tc
