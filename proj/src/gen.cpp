#include "scmstream/gen.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <vector>

namespace scmstream {

DriftKind drift_kind_from_string(const std::string& tag) {
  if (tag == "sudden") return DriftKind::Sudden;
  if (tag == "incremental") return DriftKind::Incremental;
  throw ConfigError("unknown drift kind: " + tag);
}

std::string to_string(DriftKind kind) {
  return kind == DriftKind::Sudden ? "sudden" : "incremental";
}

void StreamConfig::validate() const {
  if (n < 400) throw ConfigError("stream length must be >= 400 (two warm-up chunks)");
  if (d < 1) throw ConfigError("dimensionality must be >= 1");
  if (M < 2) throw ConfigError("class count must be >= 2");
  if (n_drifts < 1) throw ConfigError("n_drifts must be >= 1");
  if (!(noise >= 0.0 && noise < 0.5)) throw ConfigError("noise must be in [0, 0.5)");
  if (!(imbalance_ratio >= 0.0)) throw ConfigError("imbalance ratio must be >= 0");
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct ConceptModel {
  // means[concept][class][component][dim]
  std::vector<double> means;
  int d;
  int M;

  double mean(int concept_id, int cls, int comp, int dim) const {
    return means[((static_cast<std::size_t>(concept_id) * M + cls) * 2 + comp) * d + dim];
  }
};

ConceptModel draw_concepts(const StreamConfig& cfg) {
  ConceptModel model;
  model.d = cfg.d;
  model.M = cfg.M;
  model.means.resize(2 * static_cast<std::size_t>(cfg.M) * 2 * cfg.d);
  std::mt19937_64 rng(splitmix64(cfg.seed));
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  for (double& v : model.means) v = unif(rng);
  return model;
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Blend weight of the alternate concept at position t: a step (sudden) or an
// alternating logistic ramp of width n/10 (incremental) at each drift point.
double concept_weight(const StreamConfig& cfg, std::size_t t) {
  const double n = static_cast<double>(cfg.n);
  if (cfg.drift == DriftKind::Sudden) {
    int passed = 0;
    for (int m = 1; m <= cfg.n_drifts; ++m) {
      const double p = n * m / (cfg.n_drifts + 1.0);
      if (static_cast<double>(t) >= p) ++passed;
    }
    return passed % 2 == 1 ? 1.0 : 0.0;
  }
  const double scale = n / 40.0;  // 12%..88% transition spans ~n/10
  double w = 0.0;
  for (int m = 1; m <= cfg.n_drifts; ++m) {
    const double p = n * m / (cfg.n_drifts + 1.0);
    const double ramp = logistic((static_cast<double>(t) - p) / scale);
    w += (m % 2 == 1) ? ramp : -ramp;
  }
  return std::clamp(w, 0.0, 1.0);
}

LabeledInstance draw_instance(const StreamConfig& cfg, const ConceptModel& model, std::size_t t) {
  std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(t) + 1)));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const int active = unif(rng) < concept_weight(cfg, t) ? 1 : 0;

  // majority class 1 carries weight (ratio+1), each other class weight 1
  const double majority = cfg.imbalance_ratio + 1.0;
  const double total = majority + (cfg.M - 1);
  double u = unif(rng) * total;
  int cls = 0;
  if (u >= majority) cls = 1 + static_cast<int>((u - majority) / 1.0);
  if (cls > cfg.M - 1) cls = cfg.M - 1;

  const int comp = unif(rng) < 0.5 ? 0 : 1;
  LabeledInstance inst;
  inst.t = static_cast<std::int64_t>(t);
  inst.x.resize(cfg.d);
  for (int f = 0; f < cfg.d; ++f) {
    inst.x[f] = model.mean(active, cls, comp, f) + gauss(rng);
  }
  // the flip draw is consumed even at noise 0 so noisy and clean variants of
  // one seed differ only in the flipped labels
  int label = cls + 1;
  const double flip = unif(rng);
  if (flip < cfg.noise) {
    const int offset = 1 + static_cast<int>(unif(rng) * (cfg.M - 1));
    label = 1 + (cls + offset) % cfg.M;
  }
  inst.label = label;
  return inst;
}

}  // namespace

Dataset generate_stream(const StreamConfig& config, int num_threads) {
  config.validate();
  const ConceptModel model = draw_concepts(config);
  Dataset data;
  data.d = config.d;
  data.M = config.M;
  data.instances.resize(config.n);
  const std::int64_t n = static_cast<std::int64_t>(config.n);
  if (num_threads <= 1) {
    for (std::int64_t t = 0; t < n; ++t) {
      data.instances[t] = draw_instance(config, model, static_cast<std::size_t>(t));
    }
  } else {
#pragma omp parallel for schedule(static) num_threads(num_threads)
    for (std::int64_t t = 0; t < n; ++t) {
      data.instances[t] = draw_instance(config, model, static_cast<std::size_t>(t));
    }
  }
  return data;
}

Dataset generate_stream_serial(const StreamConfig& config) { return generate_stream(config, 1); }

std::string stream_file_name(const StreamConfig& config) {
  return "stream_" + to_string(config.drift) + "_" + format_double(config.noise) + "_" +
         format_double(config.imbalance_ratio) + "_" + std::to_string(config.seed) + ".csv";
}

void write_stream_with_metadata(const std::string& directory, const StreamConfig& config,
                                const Dataset& data) {
  const std::string path = directory + "/" + stream_file_name(config);
  write_stream_csv(path, data);
  std::ofstream meta(path + ".meta", std::ios::binary);
  if (!meta) throw std::runtime_error("cannot write metadata: " + path + ".meta");
  meta << "n=" << config.n << '\n'
       << "d=" << config.d << '\n'
       << "classes=" << config.M << '\n'
       << "drift=" << to_string(config.drift) << '\n'
       << "n_drifts=" << config.n_drifts << '\n'
       << "noise=" << format_double(config.noise) << '\n'
       << "imbalance=" << format_double(config.imbalance_ratio) << '\n'
       << "seed=" << config.seed << '\n';
}

}  // namespace scmstream
