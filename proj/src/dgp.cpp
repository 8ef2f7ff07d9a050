#include "tc/dgp.hpp"

#include <cmath>

namespace tc {

Vec gen_cycle(int n, double phase, double sigma_e, Rng& rng) {
  if (n < 1) throw ParameterError("cycle length must be >= 1");
  if (!(sigma_e >= 0.0)) throw ParameterError("sigma_e must be >= 0");
  const double a1 = std::cos(phase);
  const double a2 = -0.25;
  const int burn = 500;
  Vec c(n);
  double prev2 = 0.0, prev1 = 0.0;
  for (int t = 0; t < burn + n; ++t) {
    // The shock is always drawn so the stream position does not depend on
    // sigma_e (the sigma_e -> 0 limit stays stream-aligned).
    const double cur = a1 * prev1 + a2 * prev2 + sigma_e * rng.gaussian();
    prev2 = prev1;
    prev1 = cur;
    if (t >= burn) c[t - burn] = cur;
  }
  return c;
}

double det_lin(int t, int n) { return 100.0 * t / n - 50.0; }

double det_snd(int t, int n) {
  const double x = 100.0 * t / n;
  return 5.0 * std::pow(x, 0.2) * std::cos(0.05 * M_PI * std::pow(x, 0.9));
}

double default_sigma_e(int id) { return id <= 5 ? 5.0 : 1.0; }

namespace {

double cubic_term(int t, int n) {
  const double r = static_cast<double>(t) / n;
  return 500.0 * r * r * r;
}

}  // namespace

SimulatedDraw gen_dgp(const DGPSpec& spec) {
  if (spec.id < 1 || spec.id > 10)
    throw SpecError("design id " + std::to_string(spec.id) + " is not in 1..10");
  if (spec.n < 1) throw ParameterError("n must be >= 1");
  if (spec.frequency != Frequency::quarterly && spec.frequency != Frequency::monthly)
    throw ParameterError("simulation designs are quarterly or monthly");
  const int n = spec.n;
  const int id = spec.id;
  const double sigma = spec.sigma_e.value_or(default_sigma_e(id));
  if (!(sigma >= 0.0)) throw ParameterError("sigma_e must be >= 0");
  const int half = (n + 1) / 2;  // break at t <= ceil(n/2)

  Rng rng(spec.seed);
  SimulatedDraw draw;
  draw.spec = spec;
  draw.spec.sigma_e = sigma;
  draw.f.resize(n);

  // Stochastic trend core, consuming exactly n shocks in t order.
  switch (id) {
    case 1:
    case 2:
    case 3: {
      double x = 0.0, f = 0.0;
      for (int t = 1; t <= n; ++t) {
        x += rng.gaussian();  // X_t = X_{t-1} + v_t
        f += x;               // f_t = f_{t-1} + X_t
        draw.f[t - 1] = f;
      }
      break;
    }
    case 4:
    case 5: {
      double x = 0.0, f = 0.0;
      for (int t = 1; t <= n; ++t) {
        if (t <= half) {
          draw.f[t - 1] = sigma * rng.gaussian();  // w_t
        } else {
          x += rng.gaussian();  // restarted double sum, fresh v_t
          f += x;
          const double lin = det_lin(t, n);
          draw.f[t - 1] = lin * lin + f;
        }
      }
      break;
    }
    case 6:
    case 7:
    case 8: {
      const double rho = std::exp(spec.c / n);
      double f = 0.0;
      for (int t = 1; t <= n; ++t) {
        f = rho * f + rng.gaussian();
        draw.f[t - 1] = f;
      }
      break;
    }
    case 9:
    case 10: {
      const double rho = std::exp(spec.c / n);
      double f = 0.0;
      for (int t = 1; t <= n; ++t) {
        if (t <= half) {
          draw.f[t - 1] = sigma * rng.gaussian();  // w_t
        } else {
          f = rho * f + rng.gaussian();  // restarted recursion
          draw.f[t - 1] = det_lin(t, n) + f;
        }
      }
      break;
    }
    default:
      break;
  }

  // Deterministic add-ons.
  if (id == 2 || id == 5 || id == 7 || id == 10)
    for (int t = 1; t <= n; ++t) draw.f[t - 1] += det_snd(t, n);
  if (id == 3 || id == 8)
    for (int t = 1; t <= n; ++t) draw.f[t - 1] += cubic_term(t, n);

  draw.cycle = gen_cycle(n, cycle_phase(spec.frequency), sigma, rng);
  draw.y = draw.f + draw.cycle;
  return draw;
}

}  // namespace tc
