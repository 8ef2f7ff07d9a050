#include "tc/ar_filter.hpp"

#include <Eigen/QR>

namespace tc {

ARCoefficients ar_fit(const Vec& y, const ARSpec& spec) {
  if (spec.p < 1) throw ParameterError("lag order p must be >= 1");
  if (spec.horizon < 1) throw ParameterError("horizon must be >= 1");
  if (!y.allFinite())
    throw DataError("input contains missing or non-finite values");

  const int n = static_cast<int>(y.size());
  const int p = spec.p;
  const int h = (spec.mode == ARMode::projection) ? spec.horizon : 1;
  const int first = p + h - 1;  // first index with a full regressor set
  const int rows = n - first;
  if (rows < p + 2)
    throw SampleSizeError("need at least " + std::to_string(first + p + 2) +
                          " observations for p=" + std::to_string(p) +
                          ", have " + std::to_string(n));

  Mat X(rows, p + 1);
  Vec Y(rows);
  for (int r = 0; r < rows; ++r) {
    const int t = first + r;
    X(r, 0) = 1.0;
    // regressors y_{t-h}, y_{t-h-1}, ..., y_{t-h-p+1}
    for (int j = 0; j < p; ++j) X(r, 1 + j) = y[t - h - j];
    Y[r] = y[t];
  }

  Eigen::ColPivHouseholderQR<Mat> qr(X);
  if (qr.rank() < p + 1)
    throw SingularDesignError(
        "design matrix is rank deficient (rank " + std::to_string(qr.rank()) +
        " of " + std::to_string(p + 1) + "); lagged regressors are collinear");

  ARCoefficients out;
  out.beta = qr.solve(Y);
  out.first_defined = first;
  out.fitted = Vec::Constant(n, missing_value);
  out.residuals = Vec::Constant(n, missing_value);
  for (int r = 0; r < rows; ++r) {
    const int t = first + r;
    double v = out.beta[0];
    for (int j = 0; j < p; ++j) v += out.beta[1 + j] * y[t - h - j];
    out.fitted[t] = v;
    out.residuals[t] = y[t] - v;
  }
  return out;
}

FilterResult ar_trend_cycle(const Vec& y, const ARSpec& spec) {
  ARCoefficients fit = ar_fit(y, spec);
  FilterResult res;
  res.trend = std::move(fit.fitted);
  res.cycle = std::move(fit.residuals);
  res.method = "AR";
  res.iterations = 1;
  res.lambda = 0.0;
  return res;
}

}  // namespace tc
