// Benchmark comparing the OpenMP kernels against their serial references:
// kd-tree vs brute-force neighbour search, batch RRC evaluation, and stream
// generation. Results are checked for equality while timing.
#include <omp.h>

#include <cstdio>
#include <random>
#include <vector>

#include "scmstream/gen.hpp"
#include "scmstream/kdtree.hpp"
#include "scmstream/rrc.hpp"

using namespace scmstream;

namespace {

bool same(const std::vector<SupportVector>& a, const std::vector<SupportVector>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

void bench_knn(int n, int d, int k, int queries) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  std::vector<double> points(static_cast<std::size_t>(n) * d);
  for (double& v : points) v = unif(rng);
  std::vector<FeatureVector> qs(queries, FeatureVector(d));
  for (auto& q : qs) {
    for (double& v : q) v = unif(rng);
  }

  DynamicPointIndex index;
  double t0 = omp_get_wtime();
  index.assign(points, d);
  const double build_s = omp_get_wtime() - t0;

  std::vector<std::vector<Neighbor>> tree_result(queries), scan_result(queries);
  t0 = omp_get_wtime();
  for (int i = 0; i < queries; ++i) tree_result[i] = index.knn(qs[i], k);
  const double tree_s = omp_get_wtime() - t0;

  t0 = omp_get_wtime();
  for (int i = 0; i < queries; ++i) scan_result[i] = brute_force_knn(points, d, qs[i].data(), k);
  const double scan_s = omp_get_wtime() - t0;

  bool equal = true;
  for (int i = 0; i < queries; ++i) {
    if (tree_result[i].size() != scan_result[i].size()) equal = false;
    else {
      for (std::size_t j = 0; j < tree_result[i].size(); ++j) {
        if (tree_result[i][j].id != scan_result[i][j].id) equal = false;
      }
    }
  }
  std::printf("knn        n=%d k=%d q=%d   kd-tree %.3fs (+%.3fs build)  scan %.3fs  speedup %.1fx  equal=%s\n",
              n, k, queries, tree_s, build_s, scan_s, scan_s / (tree_s + build_s),
              equal ? "yes" : "NO");
}

void bench_rrc(int count, int m, int threads) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<SupportVector> supports(count, SupportVector(m));
  for (auto& s : supports) {
    double total = 0.0;
    for (double& g : s) {
      g = unif(rng) + 1e-6;
      total += g;
    }
    for (double& g : s) g /= total;
  }

  std::vector<SupportVector> serial, parallel;
  double t0 = omp_get_wtime();
  rrc_probabilities_batch_serial(supports, serial);
  const double serial_s = omp_get_wtime() - t0;

  t0 = omp_get_wtime();
  rrc_probabilities_batch(supports, parallel, threads);
  const double parallel_s = omp_get_wtime() - t0;

  std::printf("rrc batch  n=%d M=%d        serial %.3fs  omp(%d) %.3fs  speedup %.1fx  identical=%s\n",
              count, m, serial_s, threads, parallel_s, serial_s / parallel_s,
              same(serial, parallel) ? "yes" : "NO");
}

void bench_generate(std::size_t n, int threads) {
  StreamConfig cfg;
  cfg.n = n;
  cfg.seed = 13;
  cfg.noise = 0.1;

  double t0 = omp_get_wtime();
  const Dataset serial = generate_stream_serial(cfg);
  const double serial_s = omp_get_wtime() - t0;

  t0 = omp_get_wtime();
  const Dataset parallel = generate_stream(cfg, threads);
  const double parallel_s = omp_get_wtime() - t0;

  bool equal = serial.size() == parallel.size();
  for (std::size_t i = 0; equal && i < serial.size(); ++i) {
    equal = serial.instances[i].x == parallel.instances[i].x &&
            serial.instances[i].label == parallel.instances[i].label;
  }
  std::printf("generate   n=%zu           serial %.3fs  omp(%d) %.3fs  speedup %.1fx  identical=%s\n",
              n, serial_s, threads, parallel_s, serial_s / parallel_s, equal ? "yes" : "NO");
}

}  // namespace

int main() {
  const int threads = omp_get_max_threads();
  std::printf("threads available: %d\n", threads);
  bench_knn(20000, 8, 100, 2000);
  bench_rrc(2000, 4, threads);
  bench_generate(200000, threads);
  return 0;
}
