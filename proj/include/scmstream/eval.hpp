#ifndef SCMSTREAM_EVAL_HPP
#define SCMSTREAM_EVAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "scmstream/core.hpp"

namespace scmstream {

class ConfusionAccumulator {
 public:
  explicit ConfusionAccumulator(int num_classes);

  void add(int true_label, int predicted_label);
  void merge(const ConfusionAccumulator& other);
  void clear();

  std::int64_t at(int true_label, int predicted_label) const;
  std::int64_t total() const { return total_; }
  int num_classes() const { return M_; }

 private:
  int M_;
  std::vector<std::int64_t> counts_;  // row-major, rows = true class
  std::int64_t total_ = 0;
};

/// Macro-averaged FDR (1 - precision). Per-class undefined ratios contribute
/// 0 when the class is absent from both truth and predictions, otherwise 1.
double macro_fdr(const ConfusionAccumulator& acc);

/// Macro-averaged FNR (1 - recall); same undefined-ratio convention.
double macro_fnr(const ConfusionAccumulator& acc);

/// Macro-averaged one-vs-rest Matthews correlation, rescaled to a loss:
/// (1 - mean MCC)/2, so 0 is perfect and 1 the worst. A zero denominator
/// makes that class's MCC 0.
double macro_mcc_loss(const ConfusionAccumulator& acc);

struct StreamEvent {
  std::int64_t position;
  char kind;  // 'T' trained, 'D' drift
};

struct ChunkMetrics {
  std::size_t index;
  double mafdr;
  double mafnr;
  double mamcc_loss;
};

struct ChunkMetricsReport {
  std::vector<ChunkMetrics> chunks;  // completed chunks only
  double pooled_mafdr = 0.0;         // micro-pooled over every scored instance
  double pooled_mafnr = 0.0;
  double pooled_mamcc_loss = 0.0;
  double chunk_mean_mafdr = 0.0;  // unweighted mean over completed chunks
  double chunk_mean_mafnr = 0.0;
  double chunk_mean_mamcc_loss = 0.0;
  std::vector<StreamEvent> events;
  std::size_t chunk_size = 0;
  std::size_t instances = 0;

  double pooled(const std::string& criterion) const;
};

/// Writes/reads the per-chunk CSV:
///   chunk_index,mafdr,mafnr,mamcc_loss,events
/// with trailing `pooled` and `chunk_mean` summary rows.
void write_metrics_csv(const std::string& path, const ChunkMetricsReport& report);
ChunkMetricsReport read_metrics_csv(const std::string& path);

/// Prequential (test-then-update) evaluation: every instance is scored with
/// the classifier's current prediction and only then shown to it.
template <typename StreamModel>
ChunkMetricsReport prequential_run(StreamModel& model, const Dataset& stream,
                                   std::size_t chunk = 200);

// --- statistical comparison stack ------------------------------------------

struct RankTable {
  std::vector<std::vector<double>> ranks;  // rows = streams, columns = algorithms
  std::vector<double> average_ranks;       // column means
};

/// Per-row fractional ranking with tie averaging; rank 1 is best.
RankTable average_ranks(const std::vector<std::vector<double>>& scores,
                        bool lower_is_better = true);

struct TestResult {
  double statistic;
  double p_value;
};

/// Friedman chi-square over the rank table (N rows, k columns),
/// p from the chi-square distribution with k-1 degrees of freedom.
TestResult friedman_test(const RankTable& table);

/// Two-sided Wilcoxon signed-rank test on paired scores. Zero differences
/// are dropped (at least 5 nonzero pairs required), tied magnitudes get
/// midranks. Exact signed-rank distribution for n <= 25, normal
/// approximation with tie and continuity corrections above. The statistic is
/// the positive-rank sum W+.
TestResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b);

/// Holm step-down adjustment; the result preserves the input order.
std::vector<double> holm_adjust(const std::vector<double>& p_values);
std::vector<bool> holm_reject(const std::vector<double>& p_values, double alpha);

}  // namespace scmstream

#include "scmstream/eval_impl.hpp"

#endif
