#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adbound/decompose.hpp"
#include "adbound/io.hpp"
#include "adbound/model.hpp"

namespace adbound {

enum class SourceKind { File, RandomNetwork, RandomMaxCsp };

/// One benchmark configuration. Read from `key = value` text by parse_experiment_config.
struct ExperimentConfig {
  TaskKind task = TaskKind::Belief;
  SourceKind source = SourceKind::RandomNetwork;
  std::string model_path;

  // Network generator shape.
  int roots = 5;
  int children = 20;
  int parents = 2;
  int cardinality = 2;
  // MAX-CSP generator shape.
  int vars = 15;
  int constraints = 60;

  bool run_ad = true;
  bool run_mb = true;
  int ad_ibound = 3;
  int mb_ibound = 4;
  int evidence_count = 0;
  int trials = 25;
  std::uint64_t seed = 1;

  bool exact = true;
  std::size_t exact_max_cells = std::size_t{1} << 24;
  /// Redraw generated instances whose interaction graph is wider than ad_ibound.
  bool resample_wide = false;

  DecomposeConstants constants;
  /// Line-delimited JSON records go here when non-empty.
  std::string records_path;

  void validate() const;
};

ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::string& path);

/// Bounds of one method on one quantity. For aggregate rows the vectors hold
/// a single entry: the mean over trials of the per-trial average (base-10 log
/// for probabilities, raw counts for MAX-CSP).
struct BoundReport {
  int trial = -1;
  std::string method;    // "AD" or "MB"
  int ibound = 0;
  std::string quantity;  // "query", "evidence", "mpe" or "maxcsp"
  std::vector<double> low, est, high;
  std::optional<std::vector<double>> exact;
  /// Mean |f(est) - f(exact)|, f = log10 or identity; NaN without exact.
  double est_eps = 0.0;
  /// Mean f(high) - f(low).
  double hi_lo = 0.0;
  double elapsed_seconds = 0.0;
  bool aggregate = false;
  /// Trial-level context: the query and evidence used.
  VariableId query = -1;
  Evidence evidence;
};

struct ExperimentResult {
  std::vector<BoundReport> trials;
  std::vector<BoundReport> aggregate;
};

/// Runs every trial and folds the aggregate rows. Throws with trial context
/// when a trial fails.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Fills est_eps and hi_lo of a per-trial report from its vectors.
void fill_metrics(BoundReport& r, bool log_scale);

/// Mean rows over the given per-trial reports, grouped by method, i-bound and
/// quantity in first-appearance order. Independent of trial order.
std::vector<BoundReport> aggregate_reports(const std::vector<BoundReport>& trials, bool log_scale);

/// Table with columns per method/quantity and rows Low, Est., High, Exact,
/// Est. eps, Hi-Lo, Time.
std::string format_table(const std::vector<BoundReport>& aggregate);

/// One JSON object per line; aggregate rows carry "aggregate": true.
void write_records(std::ostream& out, const ExperimentResult& result);

/// log10 clamped at 1e-300 so zero bounds stay finite in averages.
double safe_log10(double x);

}  // namespace adbound
