#ifndef SCMSTREAM_ADWIN_HPP
#define SCMSTREAM_ADWIN_HPP

#include <cstdint>
#include <deque>
#include <vector>

namespace scmstream {

/// ADWIN adaptive-windowing change detector over reals in [0,1].
///
/// The window is kept as an exponential histogram: row r holds at most
/// max_buckets buckets, each summarizing exactly 2^r elements by their sum.
/// Every insertion appends a singleton bucket, compresses overfull rows by
/// merging their two oldest buckets into the next row, and then repeatedly
/// tests every bucket boundary as an older/newer split (W0, W1): a change is
/// declared when |mean(W0) - mean(W1)| >= eps_cut with
///
///   eps_cut = sqrt( ln(4*W/delta) / (2*m) ),   m = 1/(1/n0 + 1/n1),
///
/// in which case the oldest bucket is dropped and the scan restarts. Cuts
/// only ever remove the oldest elements, so the retained window is always a
/// suffix of the input sequence.
class AdwinDetector {
 public:
  static constexpr double kDefaultDelta = 0.002;
  static constexpr int kMaxBucketsPerRow = 5;

  explicit AdwinDetector(double delta = kDefaultDelta, int max_buckets = kMaxBucketsPerRow);

  /// Appends one element; returns true when any cut occurred.
  /// Throws std::invalid_argument unless value is in [0,1].
  bool add_element(double value);

  /// Number of elements currently retained.
  std::size_t window_size() const { return static_cast<std::size_t>(total_count_); }

  double sum() const { return total_sum_; }
  double mean() const { return total_count_ > 0 ? total_sum_ / total_count_ : 0.0; }

  double delta() const { return delta_; }

  /// Total buckets across all rows (memory diagnostics).
  std::size_t bucket_count() const;
  std::size_t row_count() const { return rows_.size(); }

 private:
  void compress();
  bool find_cut() const;
  void drop_oldest_bucket();

  double delta_;
  int max_buckets_;
  // rows_[r]: bucket sums, oldest first; each bucket covers 2^r elements
  std::vector<std::deque<double>> rows_;
  std::int64_t total_count_ = 0;
  double total_sum_ = 0.0;
};

}  // namespace scmstream

#endif
