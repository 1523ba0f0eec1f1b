#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "scmstream/eval.hpp"
#include "scmstream/special.hpp"

namespace scmstream {

RankTable average_ranks(const std::vector<std::vector<double>>& scores, bool lower_is_better) {
  if (scores.empty()) throw std::invalid_argument("rank table needs at least one row");
  const std::size_t k = scores.front().size();
  if (k == 0) throw std::invalid_argument("rank table needs at least one column");

  RankTable table;
  table.ranks.reserve(scores.size());
  table.average_ranks.assign(k, 0.0);
  for (const auto& row : scores) {
    if (row.size() != k) throw std::invalid_argument("ragged score matrix");
    for (double v : row) {
      if (std::isnan(v)) throw std::invalid_argument("missing score entry");
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return lower_is_better ? row[a] < row[b] : row[a] > row[b];
    });
    std::vector<double> ranks(k, 0.0);
    std::size_t i = 0;
    while (i < k) {
      std::size_t j = i;
      while (j + 1 < k && row[order[j + 1]] == row[order[i]]) ++j;
      const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
      for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
      i = j + 1;
    }
    for (std::size_t c = 0; c < k; ++c) table.average_ranks[c] += ranks[c];
    table.ranks.push_back(std::move(ranks));
  }
  for (double& r : table.average_ranks) r /= static_cast<double>(table.ranks.size());
  return table;
}

TestResult friedman_test(const RankTable& table) {
  const std::size_t n = table.ranks.size();
  const std::size_t k = n > 0 ? table.ranks.front().size() : 0;
  if (n < 2 || k < 2) throw std::invalid_argument("friedman test needs N >= 2 and k >= 2");
  double sum_sq = 0.0;
  for (double r : table.average_ranks) sum_sq += r * r;
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  const double stat = 12.0 * nd / (kd * (kd + 1.0)) * (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
  const double p = chi_square_sf(stat, static_cast<int>(k) - 1);
  return TestResult{stat, p};
}

namespace {

// Exact two-sided p over the 2^n equiprobable sign patterns, computed by
// dynamic programming over doubled midranks (so ties stay integral).
double wilcoxon_exact_p(const std::vector<double>& ranks, double w_plus) {
  std::vector<std::int64_t> doubled(ranks.size());
  std::int64_t total = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    doubled[i] = static_cast<std::int64_t>(std::llround(2.0 * ranks[i]));
    total += doubled[i];
  }
  std::vector<double> ways(total + 1, 0.0);
  ways[0] = 1.0;
  for (std::int64_t r : doubled) {
    for (std::int64_t s = total; s >= r; --s) ways[s] += ways[s - r];
  }
  const double count = std::ldexp(1.0, static_cast<int>(ranks.size()));  // 2^n
  const std::int64_t w2 = static_cast<std::int64_t>(std::llround(2.0 * w_plus));
  double le = 0.0, ge = 0.0;
  for (std::int64_t s = 0; s <= total; ++s) {
    if (s <= w2) le += ways[s];
    if (s >= w2) ge += ways[s];
  }
  return std::min(1.0, 2.0 * std::min(le, ge) / count);
}

}  // namespace

TestResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("wilcoxon: length mismatch");
  std::vector<double> diffs;
  diffs.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) diffs.push_back(d);
  }
  const std::size_t n = diffs.size();
  if (n < 5) throw std::invalid_argument("wilcoxon: fewer than 5 nonzero differences");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::fabs(diffs[x]) < std::fabs(diffs[y]);
  });
  std::vector<double> ranks(n, 0.0);
  std::vector<double> tie_sizes;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && std::fabs(diffs[order[j + 1]]) == std::fabs(diffs[order[i]])) ++j;
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
    tie_sizes.push_back(static_cast<double>(j - i + 1));
    i = j + 1;
  }
  double w_plus = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (diffs[t] > 0.0) w_plus += ranks[t];
  }

  if (n <= 25) {
    return TestResult{w_plus, wilcoxon_exact_p(ranks, w_plus)};
  }
  const double nd = static_cast<double>(n);
  const double mu = nd * (nd + 1.0) / 4.0;
  double tie_term = 0.0;
  for (double t : tie_sizes) tie_term += t * t * t - t;
  const double sigma2 = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term / 48.0;
  const double sigma = std::sqrt(sigma2);
  double z = 0.0;
  if (sigma > 0.0) {
    const double shift = w_plus > mu ? -0.5 : (w_plus < mu ? 0.5 : 0.0);  // continuity
    z = (w_plus - mu + shift) / sigma;
  }
  return TestResult{w_plus, std::min(1.0, 2.0 * normal_sf(std::fabs(z)))};
}

std::vector<double> holm_adjust(const std::vector<double>& p_values) {
  if (p_values.empty()) throw std::invalid_argument("holm: empty p-value list");
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("holm: p outside [0,1]");
  }
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  std::vector<double> adjusted(m, 0.0);
  double running_max = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double scaled = std::min(1.0, static_cast<double>(m - i) * p_values[order[i]]);
    running_max = std::max(running_max, scaled);
    adjusted[order[i]] = running_max;
  }
  return adjusted;
}

std::vector<bool> holm_reject(const std::vector<double>& p_values, double alpha) {
  const auto adjusted = holm_adjust(p_values);
  std::vector<bool> reject(adjusted.size());
  for (std::size_t i = 0; i < adjusted.size(); ++i) reject[i] = adjusted[i] <= alpha;
  return reject;
}

}  // namespace scmstream
