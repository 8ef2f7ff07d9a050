#include "tc/panel.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <fstream>

#include "tc/ar_filter.hpp"
#include "tc/boosting.hpp"
#include "tc/csv.hpp"
#include "tc/hp_filter.hpp"

namespace tc {

PanelDataset load_panel(std::istream& in, const PanelLoadOptions& options) {
  const CsvTable table = read_csv(in);
  if (table.records.empty()) throw FormatError("panel file has no header row");
  const auto& header = table.records[0];
  const int width = static_cast<int>(header.size());
  if (options.date_column < 0 || options.date_column >= width)
    throw ParameterError("date column index out of range");
  const int first_data = 1 + options.skip_metadata_rows;
  if (static_cast<int>(table.records.size()) < first_data)
    throw FormatError("fewer rows than declared metadata rows");

  PanelDataset panel;
  panel.frequency = options.frequency;
  const int rows = static_cast<int>(table.records.size()) - first_data;

  int id = 0;
  for (int col = 0; col < width; ++col) {
    if (col == options.date_column) continue;
    PanelSeries s;
    s.id = ++id;
    s.name = header[col];
    s.values = Vec::Constant(rows, missing_value);
    panel.series.push_back(std::move(s));
  }

  for (int r = 0; r < rows; ++r) {
    const auto& record = table.records[first_data + r];
    if (static_cast<int>(record.size()) != width)
      throw FormatError("row " + std::to_string(first_data + r + 1) + " has " +
                        std::to_string(record.size()) + " fields, header has " +
                        std::to_string(width));
    int si = 0;
    for (int col = 0; col < width; ++col) {
      if (col == options.date_column) {
        panel.dates.push_back(record[col]);
      } else {
        panel.series[si].values[r] =
            parse_cell(record[col], first_data + r + 1, col + 1);
        ++si;
      }
    }
  }

  for (PanelSeries& s : panel.series) {
    int first = 0;
    while (first < rows && is_missing(s.values[first])) ++first;
    if (first == rows) {
      s.excluded = true;
      s.note = "all values missing";
      s.first = 0;
      s.last = -1;
      continue;
    }
    int last = rows - 1;
    while (is_missing(s.values[last])) --last;
    s.first = first;
    s.last = last;

    int gaps = 0;
    for (int t = first; t <= last; ++t)
      if (is_missing(s.values[t])) ++gaps;
    if (gaps == 0) continue;
    if (!options.interpolate_interior) {
      s.excluded = true;
      s.note = std::to_string(gaps) + " interior gap(s) in the usable range "
               "(rerun with interior interpolation to include)";
      continue;
    }
    // Linear fill between the nearest defined neighbors.
    for (int t = first + 1; t < last; ++t) {
      if (!is_missing(s.values[t])) continue;
      int lo = t - 1;
      int hi = t + 1;
      while (is_missing(s.values[hi])) ++hi;
      for (int u = t; u < hi; ++u) {
        const double w = static_cast<double>(u - lo) / (hi - lo);
        s.values[u] = (1.0 - w) * s.values[lo] + w * s.values[hi];
      }
      t = hi;
    }
    s.note = "interpolated " + std::to_string(gaps) + " interior value(s)";
  }
  return panel;
}

PanelDataset load_panel_file(const std::string& path, const PanelLoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return load_panel(in, options);
}

PanelCycles filter_panel(const PanelDataset& panel, const MethodSpec& method,
                         double lambda) {
  if (method.kind == MethodSpec::Kind::oracle)
    throw ParameterError("the oracle method needs a true trend; not available for panels");
  const bool needs_lambda = method.kind != MethodSpec::Kind::ar;
  double lam = lambda;
  if (needs_lambda && !(lam > 0.0)) lam = default_lambda(panel.frequency);
  ARSpec ar_spec;
  if (method.kind == MethodSpec::Kind::ar) {
    ar_spec = method.ar_order > 0
                  ? ARSpec{method.ar_order, 1, ARMode::one_step}
                  : ARSpec::by_frequency(panel.frequency);
  }

  PanelCycles out;
  out.dates = panel.dates;
  out.method = method.label();
  out.lambda = needs_lambda ? lam : 0.0;
  const int rows = static_cast<int>(panel.dates.size());

  for (const PanelSeries& s : panel.series) {
    PanelCycleSeries cs;
    cs.id = s.id;
    cs.name = s.name;
    cs.trend = Vec::Constant(rows, missing_value);
    cs.cycle = Vec::Constant(rows, missing_value);
    cs.standardized = Vec::Constant(rows, missing_value);
    if (s.excluded) {
      cs.excluded = true;
      cs.note = s.note;
      out.series.push_back(std::move(cs));
      continue;
    }
    const Vec segment = s.values.segment(s.first, s.last - s.first + 1);
    try {
      FilterResult fr;
      switch (method.kind) {
        case MethodSpec::Kind::hp:
          fr = hp_smooth(segment, lam);
          break;
        case MethodSpec::Kind::hp2:
          fr = boosted_hp(segment, lam, 2);
          break;
        case MethodSpec::Kind::bhp_fixed:
          fr = boosted_hp(segment, lam, method.fixed_m);
          break;
        case MethodSpec::Kind::bhp_bic:
          fr = boosted_hp_bic(segment, BoostConfig{lam, method.m_max});
          break;
        case MethodSpec::Kind::ar:
          fr = ar_trend_cycle(segment, ar_spec);
          break;
        default:
          throw ParameterError("unsupported panel method");
      }
      cs.trend.segment(s.first, segment.size()) = fr.trend;
      cs.cycle.segment(s.first, segment.size()) = fr.cycle;
      cs.m = fr.iterations;
    } catch (const Error& e) {
      cs.excluded = true;
      cs.note = e.what();
    }
    out.series.push_back(std::move(cs));
  }
  return out;
}

void standardize_and_flip(PanelCycles& cycles, const std::vector<int>& flips) {
  for (PanelCycleSeries& s : cycles.series) {
    if (s.excluded) continue;
    double sum = 0.0, sumsq = 0.0, rawsq = 0.0;
    int count = 0;
    for (int t = 0; t < s.cycle.size(); ++t) {
      const double v = s.cycle[t];
      if (is_missing(v)) continue;
      sum += v;
      sumsq += v * v;
      const double raw = s.trend[t] + v;  // reconstructs the input value
      rawsq += raw * raw;
      ++count;
    }
    if (count < 2) {
      s.excluded = true;
      s.note = "too few defined cycle values to standardize";
      continue;
    }
    const double var = (sumsq - sum * sum / count) / (count - 1);
    // An affine input leaves only solver rounding noise in the cycle, which
    // is tiny but not exactly zero; judge the variance against the raw
    // series scale rather than against literal zero.
    if (!(var > 1e-20 * std::max(rawsq / count, 1e-300))) {
      s.excluded = true;
      s.note = "zero-variance cycle (affine raw series?)";
      continue;
    }
    const double scale =
        (std::find(flips.begin(), flips.end(), s.id) != flips.end() ? -1.0 : 1.0) /
        std::sqrt(var);
    for (int t = 0; t < s.cycle.size(); ++t)
      s.standardized[t] = is_missing(s.cycle[t]) ? missing_value : scale * s.cycle[t];
  }
}

std::vector<int> default_flips(Frequency freq) {
  std::vector<int> flips;
  switch (freq) {
    case Frequency::quarterly:
      for (int id = 58; id <= 72; ++id) flips.push_back(id);   // unemployment
      flips.push_back(197);                                    // unemployment
      for (int id = 158; id <= 162; ++id) flips.push_back(id); // money stocks
      break;
    case Frequency::monthly:
      for (int id = 25; id <= 31; ++id) flips.push_back(id);   // unemployment
      for (int id = 70; id <= 73; ++id) flips.push_back(id);   // money stock
      break;
    default:
      throw ParameterError("no default sign-flip list for this frequency");
  }
  return flips;
}

AggregateIndex aggregate_index(const PanelCycles& cycles) {
  const int rows = static_cast<int>(cycles.dates.size());
  AggregateIndex index;
  index.dates = cycles.dates;
  index.method = cycles.method;
  index.values = Vec::Constant(rows, missing_value);
  index.coverage.assign(rows, 0);
  int usable = 0;
  for (const PanelCycleSeries& s : cycles.series)
    if (!s.excluded) ++usable;
  if (usable == 0) throw DataError("no usable series to aggregate");
  for (int t = 0; t < rows; ++t) {
    double sum = 0.0;
    int count = 0;
    for (const PanelCycleSeries& s : cycles.series) {
      if (s.excluded || is_missing(s.standardized[t])) continue;
      sum += s.standardized[t];
      ++count;
    }
    index.coverage[t] = count;
    if (count > 0) index.values[t] = sum / count;
  }
  return index;
}

ACTestResult robust_ac_test(const Vec& z, int K) {
  if (K < 1) throw ParameterError("K must be >= 1");
  if (!z.allFinite())
    throw DataError("autocorrelation test input contains missing values");
  const int n = static_cast<int>(z.size());
  if (n < K + 2)
    throw SampleSizeError("series too short for K = " + std::to_string(K) +
                          " lags (n = " + std::to_string(n) + ")");
  const Vec e = z.array() - z.mean();
  if (!(e.squaredNorm() > 0.0))
    throw DegenerateInputError("constant input has no autocorrelation structure");

  ACTestResult res;
  res.K = K;
  res.n_used = n;
  res.t_stats.resize(K);
  for (int k = 1; k <= K; ++k) {
    double num = 0.0, den = 0.0;
    for (int t = k; t < n; ++t) {
      const double prod = e[t] * e[t - k];
      num += prod;
      den += prod * prod;
    }
    if (!(den > 0.0))
      throw DegenerateInputError("degenerate denominator at lag " + std::to_string(k));
    res.t_stats[k - 1] = num / std::sqrt(den);
  }
  res.joint_stat = res.t_stats.squaredNorm();
  res.critical_5pct =
      boost::math::quantile(boost::math::chi_squared_distribution<double>(K), 0.95);
  res.reject = res.joint_stat > res.critical_5pct;
  return res;
}

int default_ac_lags(Frequency freq) {
  switch (freq) {
    case Frequency::quarterly: return 6;
    case Frequency::monthly: return 18;
    default:
      throw ParameterError("no default lag depth for this frequency; pass K explicitly");
  }
}

}  // namespace tc
