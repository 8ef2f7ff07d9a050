#pragma once

#include <istream>
#include <string>
#include <vector>

#include "tc/bench.hpp"
#include "tc/types.hpp"

namespace tc {

struct PanelSeries {
  int id = 0;           // 1-based column order, stable across exclusions
  std::string name;
  Vec values;           // full date axis; NaN where missing
  int first = 0;        // usable range [first, last], inclusive
  int last = -1;
  bool excluded = false;
  std::string note;     // exclusion reason or interpolation note
};

struct PanelDataset {
  std::vector<std::string> dates;
  std::vector<PanelSeries> series;
  Frequency frequency = Frequency::custom;
};

struct PanelLoadOptions {
  int date_column = 0;          // 0-based position of the date column
  int skip_metadata_rows = 0;   // rows after the header to drop (transform codes)
  Frequency frequency = Frequency::custom;
  bool interpolate_interior = false;  // linear fill instead of exclusion
};

// Header row, then skip_metadata_rows dropped rows, then one row per date.
// Leading/trailing missing values per series define the usable range;
// interior gaps exclude the series (with a note) unless interpolation is on.
PanelDataset load_panel(std::istream& in, const PanelLoadOptions& options);
PanelDataset load_panel_file(const std::string& path, const PanelLoadOptions& options);

struct PanelCycleSeries {
  int id = 0;
  std::string name;
  Vec trend;               // full axis, NaN outside the usable range
  Vec cycle;
  Vec standardized;        // filled by standardize_and_flip
  int m = 0;               // iterations used (selected or fixed)
  bool excluded = false;
  std::string note;
};

struct PanelCycles {
  std::vector<std::string> dates;
  std::vector<PanelCycleSeries> series;
  std::string method;
  double lambda = 0.0;
};

// Filters every non-excluded series on its usable range. lambda <= 0 means
// the frequency default. Per-series failures mark the series excluded and
// keep its slot (auditability), they never abort the panel.
PanelCycles filter_panel(const PanelDataset& panel, const MethodSpec& method,
                         double lambda = 0.0);

// Divides each cycle by its sample standard deviation (divisor length-1)
// over the usable range, then negates the series whose ids appear in flips.
// Zero-variance series are excluded with a note.
void standardize_and_flip(PanelCycles& cycles, const std::vector<int>& flips);

// Sign conventions for the stock FRED-style panels: unemployment and money
// stock blocks enter negated.
std::vector<int> default_flips(Frequency freq);

struct AggregateIndex {
  std::vector<std::string> dates;
  Vec values;                  // per-date mean of standardized cycles; NaN if empty
  std::vector<int> coverage;   // contributing series per date
  std::string method;
};

AggregateIndex aggregate_index(const PanelCycles& cycles);

struct ACTestResult {
  int K = 0;
  Vec t_stats;
  double joint_stat = 0.0;
  double critical_5pct = 0.0;
  bool reject = false;
  int n_used = 0;
};

// Heteroskedasticity-robust autocorrelation test. With e the demeaned input,
//   t_k = sum_t e_t e_{t-k} / sqrt(sum_t e_t^2 e_{t-k}^2),
// and the joint statistic sum_k t_k^2 is referred to a chi-square(K) 5%
// critical value. (Joint statistic without cross-correlation corrections;
// labeled as such in outputs.)
ACTestResult robust_ac_test(const Vec& z, int K);

// Default portmanteau depth: 6 quarterly, 18 monthly.
int default_ac_lags(Frequency freq);

}  // namespace tc
