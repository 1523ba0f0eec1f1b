#include "scmstream/adwin.hpp"

#include <cmath>
#include <stdexcept>

namespace scmstream {

AdwinDetector::AdwinDetector(double delta, int max_buckets)
    : delta_(delta), max_buckets_(max_buckets) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("adwin: delta must be in (0,1)");
  if (max_buckets < 2) throw std::invalid_argument("adwin: max_buckets must be >= 2");
}

bool AdwinDetector::add_element(double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument("adwin: value outside [0,1]");
  }
  if (rows_.empty()) rows_.emplace_back();
  rows_[0].push_back(value);
  total_sum_ += value;
  ++total_count_;
  compress();

  bool any_cut = false;
  while (find_cut()) {
    drop_oldest_bucket();
    any_cut = true;
  }
  return any_cut;
}

void AdwinDetector::compress() {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    while (static_cast<int>(rows_[r].size()) > max_buckets_) {
      double merged = rows_[r].front();
      rows_[r].pop_front();
      merged += rows_[r].front();
      rows_[r].pop_front();
      if (r + 1 >= rows_.size()) rows_.emplace_back();
      rows_[r + 1].push_back(merged);
    }
  }
}

bool AdwinDetector::find_cut() const {
  const std::int64_t w = total_count_;
  if (w < 2) return false;
  const double log_term = std::log(4.0 * static_cast<double>(w) / delta_);
  double sum0 = 0.0;
  std::int64_t n0 = 0;
  // boundaries from oldest to newest: highest row first, front to back
  for (std::size_t r = rows_.size(); r-- > 0;) {
    const std::int64_t bucket_n = std::int64_t{1} << r;
    for (double bucket_sum : rows_[r]) {
      sum0 += bucket_sum;
      n0 += bucket_n;
      const std::int64_t n1 = w - n0;
      if (n1 <= 0) break;
      const double mu0 = sum0 / static_cast<double>(n0);
      const double mu1 = (total_sum_ - sum0) / static_cast<double>(n1);
      const double m = 1.0 / (1.0 / static_cast<double>(n0) + 1.0 / static_cast<double>(n1));
      const double eps_cut = std::sqrt(log_term / (2.0 * m));
      if (std::fabs(mu0 - mu1) >= eps_cut) return true;
    }
  }
  return false;
}

void AdwinDetector::drop_oldest_bucket() {
  for (std::size_t r = rows_.size(); r-- > 0;) {
    if (!rows_[r].empty()) {
      total_sum_ -= rows_[r].front();
      total_count_ -= std::int64_t{1} << r;
      rows_[r].pop_front();
      return;
    }
  }
}

std::size_t AdwinDetector::bucket_count() const {
  std::size_t n = 0;
  for (const auto& row : rows_) n += row.size();
  return n;
}

}  // namespace scmstream
