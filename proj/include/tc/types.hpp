#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tc/errors.hpp"

namespace tc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double missing_value = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double x) { return std::isnan(x); }

enum class Frequency { quarterly, monthly, annual, custom };

std::string to_string(Frequency f);
Frequency parse_frequency(const std::string& s);

// Conventional smoothing penalty for each sampling frequency.
inline double default_lambda(Frequency f) {
  switch (f) {
    case Frequency::quarterly: return 1600.0;
    case Frequency::monthly: return 129600.0;
    case Frequency::annual: return 6.25;
    default:
      throw ParameterError("no default lambda for custom frequency; pass one explicitly");
  }
}

// Cycle phase used by the simulation designs (zero of the AR(2) polynomial
// at modulus 0.5, angle pi/10 per quarter or pi/30 per month).
inline double cycle_phase(Frequency f) {
  switch (f) {
    case Frequency::quarterly: return M_PI / 10.0;
    case Frequency::monthly: return M_PI / 30.0;
    default:
      throw ParameterError("cycle phase defined for quarterly and monthly only");
  }
}

// Default autoregressive order for the regression-based detrender.
inline int default_ar_order(Frequency f) {
  switch (f) {
    case Frequency::quarterly: return 4;
    case Frequency::monthly: return 12;
    default:
      throw ParameterError("default AR order defined for quarterly and monthly only");
  }
}

struct FilterResult {
  Vec trend;
  Vec cycle;
  std::string method;    // "HP", "2HP", "bHP", "AR"
  int iterations = 1;    // number of smoother passes actually applied
  double lambda = 0.0;   // 0 for the AR method
  std::vector<double> ic;        // information criterion path (empty unless selected by it)
  bool stopping_not_interior = false;  // iteration cap was the argmin
};

inline std::string to_string(Frequency f) {
  switch (f) {
    case Frequency::quarterly: return "quarterly";
    case Frequency::monthly: return "monthly";
    case Frequency::annual: return "annual";
    default: return "custom";
  }
}

inline Frequency parse_frequency(const std::string& s) {
  if (s == "quarterly" || s == "q") return Frequency::quarterly;
  if (s == "monthly" || s == "m") return Frequency::monthly;
  if (s == "annual" || s == "a") return Frequency::annual;
  if (s == "custom") return Frequency::custom;
  throw ParameterError("unknown frequency '" + s + "' (expected quarterly|monthly|annual|custom)");
}

}  // namespace tc
