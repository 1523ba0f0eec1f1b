#include "scmstream/rrc.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scmstream/special.hpp"

namespace scmstream {

std::vector<BetaParams> beta_params(const std::vector<double>& supports) {
  check_support_vector(supports, 1e-6);
  const double m = static_cast<double>(supports.size());
  std::vector<BetaParams> params(supports.size());
  for (std::size_t i = 0; i < supports.size(); ++i) {
    const double g = std::clamp(supports[i], kSupportClip, 1.0 - kSupportClip);
    params[i] = BetaParams{m * g, m * (1.0 - g)};
  }
  return params;
}

namespace {

constexpr int kInterior = kQuadratureNodes - 2;  // 511 nodes on [h, 1-h]
constexpr int kTailSlabs = 24;                   // geometric slabs per boundary cell
const double kH = 1.0 / (kQuadratureNodes - 1);

struct QuadGrid {
  double u[kInterior];
  double log_u[kInterior];
  double log_1mu[kInterior];
  double simpson_w[kInterior];
  double hi_edge[kTailSlabs + 1];  // 1-h ... 1
  double hi_mid[kTailSlabs];
  double lo_edge[kTailSlabs + 1];  // 0 ... h
  double lo_mid[kTailSlabs];
};

const QuadGrid& grid() {
  static const QuadGrid g = [] {
    QuadGrid q;
    for (int j = 0; j < kInterior; ++j) {
      q.u[j] = (j + 1) * kH;
      q.log_u[j] = std::log(q.u[j]);
      q.log_1mu[j] = std::log1p(-q.u[j]);
      // composite Simpson over 510 intervals: 1,4,2,4,...,2,4,1 times h/3
      double w = (j == 0 || j == kInterior - 1) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      q.simpson_w[j] = w * kH / 3.0;
    }
    q.hi_edge[0] = 1.0 - kH;
    q.lo_edge[kTailSlabs] = kH;
    for (int s = 1; s < kTailSlabs; ++s) {
      q.hi_edge[s] = 1.0 - kH * std::ldexp(1.0, -s);
      q.lo_edge[kTailSlabs - s] = kH * std::ldexp(1.0, -s);
    }
    q.hi_edge[kTailSlabs] = 1.0;
    q.lo_edge[0] = 0.0;
    for (int s = 0; s < kTailSlabs; ++s) {
      q.hi_mid[s] = 0.5 * (q.hi_edge[s] + q.hi_edge[s + 1]);
      q.lo_mid[s] = 0.5 * (q.lo_edge[s] + q.lo_edge[s + 1]);
    }
    return q;
  }();
  return g;
}

}  // namespace

std::vector<double> rrc_probabilities(const std::vector<double>& supports) {
  const auto params = beta_params(supports);
  const int m = static_cast<int>(params.size());
  if (m == 1) return {1.0};
  const QuadGrid& q = grid();

  // cdf[i*kInterior + j] = I_{u_j}(a_i, b_i)
  std::vector<double> cdf(static_cast<std::size_t>(m) * kInterior);
  std::vector<double> log_norm(m);
  for (int i = 0; i < m; ++i) {
    log_norm[i] = log_beta(params[i].a, params[i].b);
    double* row = cdf.data() + static_cast<std::size_t>(i) * kInterior;
    for (int j = 0; j < kInterior; ++j) {
      row[j] = regularized_incomplete_beta(params[i].a, params[i].b, q.u[j]);
    }
  }
  // boundary-cell cdf values shared across classes
  std::vector<double> hi_mid_cdf(static_cast<std::size_t>(m) * kTailSlabs);
  std::vector<double> lo_mid_cdf(static_cast<std::size_t>(m) * kTailSlabs);
  std::vector<double> hi_edge_cdf(static_cast<std::size_t>(m) * (kTailSlabs + 1));
  std::vector<double> lo_edge_cdf(static_cast<std::size_t>(m) * (kTailSlabs + 1));
  for (int i = 0; i < m; ++i) {
    for (int s = 0; s < kTailSlabs; ++s) {
      hi_mid_cdf[i * kTailSlabs + s] =
          regularized_incomplete_beta(params[i].a, params[i].b, q.hi_mid[s]);
      lo_mid_cdf[i * kTailSlabs + s] =
          regularized_incomplete_beta(params[i].a, params[i].b, q.lo_mid[s]);
    }
    for (int s = 0; s <= kTailSlabs; ++s) {
      hi_edge_cdf[i * (kTailSlabs + 1) + s] =
          regularized_incomplete_beta(params[i].a, params[i].b, q.hi_edge[s]);
      lo_edge_cdf[i * (kTailSlabs + 1) + s] =
          regularized_incomplete_beta(params[i].a, params[i].b, q.lo_edge[s]);
    }
  }

  std::vector<double> raw(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const double am1 = params[i].a - 1.0;
    const double bm1 = params[i].b - 1.0;
    double acc = 0.0;
    for (int j = 0; j < kInterior; ++j) {
      double prod = 1.0;
      for (int k = 0; k < m; ++k) {
        if (k != i) prod *= cdf[static_cast<std::size_t>(k) * kInterior + j];
      }
      if (prod == 0.0) continue;
      const double pdf = std::exp(am1 * q.log_u[j] + bm1 * q.log_1mu[j] - log_norm[i]);
      acc += q.simpson_w[j] * pdf * prod;
    }
    // Stieltjes slabs over [1-h, 1] and [0, h]: exact Beta mass per slab
    // times the product of the other cdfs at the slab midpoint.
    for (int s = 0; s < kTailSlabs; ++s) {
      const double dmass = hi_edge_cdf[i * (kTailSlabs + 1) + s + 1] -
                           hi_edge_cdf[i * (kTailSlabs + 1) + s];
      if (dmass > 0.0) {
        double prod = 1.0;
        for (int k = 0; k < m; ++k) {
          if (k != i) prod *= hi_mid_cdf[k * kTailSlabs + s];
        }
        acc += dmass * prod;
      }
      const double dmass_lo = lo_edge_cdf[i * (kTailSlabs + 1) + s + 1] -
                              lo_edge_cdf[i * (kTailSlabs + 1) + s];
      if (dmass_lo > 0.0) {
        double prod = 1.0;
        for (int k = 0; k < m; ++k) {
          if (k != i) prod *= lo_mid_cdf[k * kTailSlabs + s];
        }
        acc += dmass_lo * prod;
      }
    }
    raw[i] = acc;
  }

  double total = 0.0;
  for (double v : raw) total += v;
  if (total <= 0.0) {
    std::fill(raw.begin(), raw.end(), 1.0 / m);
    return raw;
  }
  for (double& v : raw) v /= total;
  return raw;
}

void rrc_probabilities_batch_serial(const std::vector<SupportVector>& in,
                                    std::vector<SupportVector>& out) {
  out.resize(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = rrc_probabilities(in[i]);
}

void rrc_probabilities_batch(const std::vector<SupportVector>& in,
                             std::vector<SupportVector>& out, int num_threads) {
  if (num_threads <= 1) {
    rrc_probabilities_batch_serial(in, out);
    return;
  }
  out.resize(in.size());
  const std::int64_t n = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(dynamic, 16) num_threads(num_threads)
  for (std::int64_t i = 0; i < n; ++i) {
    out[i] = rrc_probabilities(in[i]);
  }
}

}  // namespace scmstream
