#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tc/dgp.hpp"
#include "tc/types.hpp"

namespace tc {

struct MethodSpec {
  enum class Kind { hp, hp2, bhp_bic, bhp_fixed, ar, oracle };
  Kind kind = Kind::hp;
  int fixed_m = 2;   // bhp_fixed only
  int ar_order = 0;  // ar only; 0 means default by frequency
  int m_max = 200;   // bhp_bic only

  // "hp" | "2hp" | "bhp" | "bhp_fixed(M)" | "ar" | "ar(P)" | "oracle"
  static MethodSpec parse(const std::string& text);
  std::string label() const;
};

struct BenchConfig {
  std::vector<DGPSpec> designs;  // templates; n supplied by sample_sizes
  std::vector<int> sample_sizes;
  std::vector<MethodSpec> methods;
  int replications = 1000;
  std::uint64_t base_seed = 0;
  bool scaled_lambda = false;  // lambda = mu * n^4 instead of the frequency default
  double mu = 1.6e-5;
  int workers = 1;
};

struct CellResult {
  int dgp_id = 0;
  int n = 0;
  double c = 0.0;
  Frequency frequency = Frequency::quarterly;
  std::string method;
  double lambda = 0.0;
  double mean_mse = 0.0;
  double mc_se = 0.0;
  int replications = 0;  // successful replications aggregated
  int failures = 0;
  int skipped_positions = 0;  // per-replication window positions skipped
  double mean_m = 0.0;        // mean selected iteration count; NaN unless chosen by IC
  bool unreliable = false;    // failures exceed 1% of requested replications
  std::string failure_note;   // first failure message, if any
};

struct BenchReport {
  std::vector<CellResult> cells;
  std::string config_echo;   // canonical JSON; excludes workers (results do not depend on them)
  int requested_replications = 0;
  double wall_seconds = 0.0;  // not rendered: varies run to run
  int workers_used = 1;       // not rendered
};

// Trimmed trend evaluation: mean of squared deviations over positions
// 5..n-4 (1-based), divisor n-8. Throws WindowError for n < 9 and DataError
// if the window contains undefined entries (use trend_mse_skipping then).
double trend_mse(const Vec& fhat, const Vec& f);

// Same window, but NaN entries of fhat are skipped and the divisor reduced.
struct WindowedMSE {
  double mse = 0.0;
  int used = 0;
  int skipped = 0;
};
WindowedMSE trend_mse_skipping(const Vec& fhat, const Vec& f);

// Runs every (design, n, method) cell. Replications are independent tasks
// with preassigned seed substreams (base_seed XOR replication index) and are
// claimed by workers in arbitrary order; results land in per-replication
// slots and are reduced in index order afterwards, so the report is
// identical for any worker count. Failed replications are excluded from the
// aggregates and counted.
BenchReport run_experiment(const BenchConfig& config);

// format: "csv" | "markdown" | "json". Bit-stable given the same report.
std::string render_report(const BenchReport& report, const std::string& format);

// Config file I/O (JSON). The echo string is canonical: parsing it back
// yields the same config (minus workers).
BenchConfig parse_bench_config(const std::string& json_text);
std::string config_echo_json(const BenchConfig& config);

double lambda_for(const BenchConfig& config, Frequency freq, int n);

}  // namespace tc
