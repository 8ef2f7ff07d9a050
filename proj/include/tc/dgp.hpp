#pragma once

#include <cstdint>
#include <optional>

#include "tc/rng.hpp"
#include "tc/types.hpp"

namespace tc {

// One synthetic draw is fully determined by this struct. Designs:
//   1  integrated-of-order-2 trend (double partial sum of N(0,1) shocks)
//   2  = 1 + slowly damped oscillation
//   3  = 1 + 500 (t/n)^3
//   4  white noise first half, then squared linear trend + restarted
//      double partial sum
//   5  = 4 + slowly damped oscillation
//   6  near-unit-root recursion f_t = e^{c/n} f_{t-1} + v_t, zero start
//   7  = 6 + slowly damped oscillation
//   8  = 6 + 500 (t/n)^3
//   9  white noise first half, then linear trend + restarted near-unit-root
//      recursion
//   10 = 9 + slowly damped oscillation
// The cycle added on top is the same AR(2) for every design.
struct DGPSpec {
  int id = 1;                      // 1..10
  int n = 100;
  Frequency frequency = Frequency::quarterly;
  double c = 0.0;                  // root exponent, designs 6..10 only
  std::optional<double> sigma_e;   // cycle/noise shock scale; default by id
  std::uint64_t seed = 0;
};

struct SimulatedDraw {
  Vec y;      // y = f + cycle exactly
  Vec f;      // true trend
  Vec cycle;
  DGPSpec spec;
};

// AR(2) cycle c_t = cos(phase) c_{t-1} - 0.25 c_{t-2} + e_t, e ~ N(0, sigma_e^2),
// both complex roots at modulus 0.5. Starts from zeros and discards a
// 500-observation burn-in.
Vec gen_cycle(int n, double phase, double sigma_e, Rng& rng);

// Deterministic trend pieces, t = 1..n.
double det_lin(int t, int n);   // 100 t/n - 50
double det_snd(int t, int n);   // 5 (100t/n)^{1/5} cos[0.05 pi (100t/n)^{0.9}]

// Shock scale shared by the cycle and the white-noise halves: 5 for designs
// 1..5, 1 for designs 6..10, unless overridden.
double default_sigma_e(int id);

// Draw order is part of the output contract (bit-reproducibility and
// cross-design stream alignment): the n trend shocks are drawn first in
// t order, then the 500 + n cycle shocks. Designs that share a seed
// therefore see identical shock streams, e.g. differencing the design-1
// trend recovers the design-6 c=0 trend.
SimulatedDraw gen_dgp(const DGPSpec& spec);

}  // namespace tc
