#ifndef SCMSTREAM_EXPERIMENT_HPP
#define SCMSTREAM_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "scmstream/base.hpp"
#include "scmstream/eval.hpp"
#include "scmstream/gen.hpp"
#include "scmstream/wrapper.hpp"

namespace scmstream {

/// Batch experiment description. Parsed from a flat key=value file with
/// repeated keys for lists ('#' starts a comment):
///
///   drift=sudden          # sudden | incremental
///   noise=0
///   noise=0.1
///   imbalance=0
///   seed=42
///   n=30000
///   dim=8
///   classes=2
///   n_drifts=1
///   strategy=S            # B | nB | S | nS
///   base=NB               # NB | KNN | SGD
///   chunk=200
///   initial_chunk=200
///   alpha=0.01
///   delta=0.002
///   fold_seed=7
///   out=results
///   jobs=1
///   stream=path.csv       # optional explicit stream files instead of the grid
struct ExperimentConfig {
  std::vector<DriftKind> drifts;
  std::vector<double> noises;
  std::vector<double> imbalances;
  std::vector<std::uint64_t> seeds;
  std::size_t stream_length = 30000;
  int stream_dim = 8;
  int stream_classes = 2;
  int n_drifts = 1;

  std::vector<std::string> stream_files;

  std::vector<Strategy> strategies;
  std::vector<BaseKind> bases;
  std::size_t chunk = 200;
  std::size_t initial_chunk = 200;
  double alpha = 0.01;
  double adwin_delta = AdwinDetector::kDefaultDelta;
  std::uint64_t fold_seed = 7;

  std::string out_dir = "results";
  int jobs = 1;

  static ExperimentConfig parse_file(const std::string& path);
  void validate_for_generate() const;
  void validate_for_run() const;
};

/// Grid expansion in deterministic order: drift x noise x imbalance x seed.
std::vector<StreamConfig> expand_grid(const ExperimentConfig& config);

/// Stream files cmd_run/cmd_report operate on: explicit list when given,
/// otherwise the expanded grid's canonical names under out_dir.
std::vector<std::string> resolve_stream_paths(const ExperimentConfig& config);

struct RunRecord {
  std::string stream_path;
  BaseKind base;
  Strategy strategy;
  std::string metrics_file;  // relative to out_dir
  std::size_t instances = 0;
  double wall_ms = 0.0;
};

/// Generates every grid stream plus its metadata sidecar; returns the paths.
std::vector<std::string> generate_all(const ExperimentConfig& config);

/// Runs stream x base x strategy prequentially. Distinct runs go to a worker
/// pool of `jobs` threads, each run single-threaded inside; the manifest
/// gains a row as each run completes and a terminal `# complete` marker.
std::vector<RunRecord> run_all(const ExperimentConfig& config);

struct ComparisonReport {
  BaseKind base;
  std::vector<std::string> stream_names;
  std::vector<Strategy> strategies;
  // per criterion (mafdr, mafnr, mamcc_loss)
  std::vector<std::string> criteria;
  std::vector<std::vector<std::vector<double>>> scores;  // [criterion][stream][strategy]
  std::vector<double> friedman_p_raw;                    // per criterion
  std::vector<double> friedman_p_holm;                   // Holm across the criteria
  std::vector<std::vector<double>> average_rank;         // [criterion][strategy]
  // pairwise Wilcoxon p matrices; NaN marks n/a (too few nonzero diffs)
  std::vector<std::vector<std::vector<double>>> pairwise_p_raw;   // [criterion][i][j]
  std::vector<std::vector<std::vector<double>>> pairwise_p_holm;  // [criterion][i][j]
};

/// Builds the per-base comparison from the metrics CSVs on disk (missing
/// files raise MissingInputError) and writes report_<base>.csv/.txt plus
/// rankplot_<base>_<criterion>.csv files.
std::vector<ComparisonReport> report_all(const ExperimentConfig& config);

int cmd_generate(const ExperimentConfig& config);
int cmd_run(const ExperimentConfig& config);
int cmd_report(const ExperimentConfig& config);

}  // namespace scmstream

#endif
