#include "scmstream/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace scmstream {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

double parse_num(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad numeric value '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad integer value '" + value + "'");
  }
}

std::string stream_stem(const std::string& path) { return fs::path(path).stem().string(); }

std::string metrics_file_name(const std::string& stream_path, BaseKind base, Strategy strategy) {
  return "metrics_" + stream_stem(stream_path) + "__" + to_string(base) + "_" +
         to_string(strategy) + ".csv";
}

// d/M come from the sidecar when present, otherwise from the run config.
void stream_shape(const ExperimentConfig& cfg, const std::string& path, int& d, int& m) {
  d = cfg.stream_dim;
  m = cfg.stream_classes;
  std::ifstream meta(path + ".meta");
  if (!meta) return;
  std::string line;
  while (std::getline(meta, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "d") d = static_cast<int>(parse_num(key, value));
    if (key == "classes") m = static_cast<int>(parse_num(key, value));
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "drift") cfg.drifts.push_back(drift_kind_from_string(value));
    else if (key == "noise") cfg.noises.push_back(parse_num(key, value));
    else if (key == "imbalance") cfg.imbalances.push_back(parse_num(key, value));
    else if (key == "seed") cfg.seeds.push_back(parse_u64(key, value));
    else if (key == "n") cfg.stream_length = static_cast<std::size_t>(parse_u64(key, value));
    else if (key == "dim") cfg.stream_dim = static_cast<int>(parse_num(key, value));
    else if (key == "classes") cfg.stream_classes = static_cast<int>(parse_num(key, value));
    else if (key == "n_drifts") cfg.n_drifts = static_cast<int>(parse_num(key, value));
    else if (key == "stream") cfg.stream_files.push_back(value);
    else if (key == "strategy") cfg.strategies.push_back(strategy_from_string(value));
    else if (key == "base") cfg.bases.push_back(base_kind_from_string(value));
    else if (key == "chunk") cfg.chunk = static_cast<std::size_t>(parse_u64(key, value));
    else if (key == "initial_chunk") cfg.initial_chunk = static_cast<std::size_t>(parse_u64(key, value));
    else if (key == "alpha") cfg.alpha = parse_num(key, value);
    else if (key == "delta") cfg.adwin_delta = parse_num(key, value);
    else if (key == "fold_seed") cfg.fold_seed = parse_u64(key, value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "jobs") cfg.jobs = static_cast<int>(parse_u64(key, value));
    else throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");
  if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
  if (cfg.chunk < 1) throw ConfigError("chunk must be >= 1");
  if (cfg.initial_chunk < 1) throw ConfigError("initial_chunk must be >= 1");
  return cfg;
}

void ExperimentConfig::validate_for_generate() const {
  for (const auto& sc : expand_grid(*this)) sc.validate();
  if (drifts.empty() || noises.empty() || imbalances.empty() || seeds.empty()) {
    throw ConfigError("generate needs at least one drift, noise, imbalance, and seed");
  }
}

void ExperimentConfig::validate_for_run() const {
  if (strategies.empty()) throw ConfigError("run needs at least one strategy");
  if (bases.empty()) throw ConfigError("run needs at least one base classifier");
}

std::vector<StreamConfig> expand_grid(const ExperimentConfig& config) {
  std::vector<StreamConfig> out;
  for (DriftKind drift : config.drifts) {
    for (double noise : config.noises) {
      for (double imbalance : config.imbalances) {
        for (std::uint64_t seed : config.seeds) {
          StreamConfig sc;
          sc.n = config.stream_length;
          sc.d = config.stream_dim;
          sc.M = config.stream_classes;
          sc.drift = drift;
          sc.n_drifts = config.n_drifts;
          sc.noise = noise;
          sc.imbalance_ratio = imbalance;
          sc.seed = seed;
          out.push_back(sc);
        }
      }
    }
  }
  return out;
}

std::vector<std::string> resolve_stream_paths(const ExperimentConfig& config) {
  std::vector<std::string> paths;
  if (!config.stream_files.empty()) {
    for (const auto& f : config.stream_files) {
      if (fs::exists(f)) paths.push_back(f);
      else paths.push_back((fs::path(config.out_dir) / f).string());
    }
  } else {
    for (const auto& sc : expand_grid(config)) {
      paths.push_back((fs::path(config.out_dir) / stream_file_name(sc)).string());
    }
  }
  return paths;
}

std::vector<std::string> generate_all(const ExperimentConfig& config) {
  config.validate_for_generate();
  const auto grid = expand_grid(config);
  fs::create_directories(config.out_dir);
  std::vector<std::string> paths(grid.size());
  const std::int64_t n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(dynamic) num_threads(config.jobs)
  for (std::int64_t i = 0; i < n; ++i) {
    const Dataset data = generate_stream(grid[i], 1);
    write_stream_with_metadata(config.out_dir, grid[i], data);
    paths[i] = (fs::path(config.out_dir) / stream_file_name(grid[i])).string();
  }
  return paths;
}

std::vector<RunRecord> run_all(const ExperimentConfig& config) {
  config.validate_for_run();
  const auto streams = resolve_stream_paths(config);
  if (streams.empty()) throw ConfigError("no streams configured");
  for (const auto& s : streams) {
    if (!fs::exists(s)) throw MissingInputError("missing stream file: " + s);
  }
  fs::create_directories(config.out_dir);

  std::vector<RunRecord> runs;
  for (const auto& stream : streams) {
    for (BaseKind base : config.bases) {
      for (Strategy strategy : config.strategies) {
        runs.push_back(RunRecord{stream, base, strategy,
                                 metrics_file_name(stream, base, strategy), 0, 0.0});
      }
    }
  }

  const std::string manifest_path = (fs::path(config.out_dir) / "manifest.csv").string();
  std::ofstream manifest(manifest_path, std::ios::binary);
  if (!manifest) throw std::runtime_error("cannot write manifest: " + manifest_path);
  manifest << "stream,base,strategy,metrics_file,instances,wall_ms,status\n";
  manifest.flush();

  const std::int64_t n = static_cast<std::int64_t>(runs.size());
#pragma omp parallel for schedule(dynamic) num_threads(config.jobs)
  for (std::int64_t i = 0; i < n; ++i) {
    RunRecord& run = runs[i];
    int d = 0, m = 0;
    stream_shape(config, run.stream_path, d, m);
    const Dataset stream = read_stream_csv(run.stream_path, d, m);

    const auto start = std::chrono::steady_clock::now();
    StreamClassifierOptions opts;
    opts.initial_chunk_size = config.initial_chunk;
    opts.adwin_delta = config.adwin_delta;
    opts.scm.fold_seed = config.fold_seed;
    opts.scm.num_threads = 1;  // runs stay sequential inside
    StreamClassifier model(run.strategy, base_factory(run.base), d, m, opts);
    const ChunkMetricsReport report = prequential_run(model, stream, config.chunk);
    const auto stop = std::chrono::steady_clock::now();

    run.instances = report.instances;
    run.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    write_metrics_csv((fs::path(config.out_dir) / run.metrics_file).string(), report);

#pragma omp critical(scmstream_manifest)
    {
      manifest << stream_stem(run.stream_path) << ',' << to_string(run.base) << ','
               << to_string(run.strategy) << ',' << run.metrics_file << ',' << run.instances
               << ',' << format_double(run.wall_ms) << ",ok\n";
      manifest.flush();
    }
  }
  manifest << "# complete\n";
  return runs;
}

namespace {

std::string format_p(double p) {
  if (std::isnan(p)) return "n/a";
  std::ostringstream ss;
  ss.precision(4);
  ss << std::scientific << p;
  return ss.str();
}

// Demsar-style bars: maximal contiguous spans (in rank order) whose end
// pair shows no significant difference.
std::vector<std::pair<int, int>> non_significant_bars(const std::vector<std::vector<double>>& p,
                                                      const std::vector<int>& rank_order,
                                                      double alpha) {
  const int k = static_cast<int>(rank_order.size());
  std::vector<std::pair<int, int>> spans;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double pij = p[rank_order[i]][rank_order[j]];
      if (std::isnan(pij) || pij > alpha) spans.emplace_back(i, j);
    }
  }
  std::vector<std::pair<int, int>> maximal;
  for (const auto& s : spans) {
    bool contained = false;
    for (const auto& t : spans) {
      if (t != s && t.first <= s.first && s.second <= t.second) contained = true;
    }
    if (!contained) maximal.push_back(s);
  }
  std::sort(maximal.begin(), maximal.end());
  return maximal;
}

}  // namespace

std::vector<ComparisonReport> report_all(const ExperimentConfig& config) {
  config.validate_for_run();
  const auto streams = resolve_stream_paths(config);
  if (streams.empty()) throw ConfigError("no streams configured");
  const std::vector<std::string> criteria = {"mafdr", "mafnr", "mamcc_loss"};

  std::vector<ComparisonReport> reports;
  for (BaseKind base : config.bases) {
    ComparisonReport rep;
    rep.base = base;
    rep.strategies = config.strategies;
    rep.criteria = criteria;
    for (const auto& s : streams) rep.stream_names.push_back(stream_stem(s));

    rep.scores.assign(criteria.size(), {});
    for (std::size_t c = 0; c < criteria.size(); ++c) {
      rep.scores[c].assign(streams.size(),
                           std::vector<double>(config.strategies.size(), 0.0));
    }
    for (std::size_t s = 0; s < streams.size(); ++s) {
      for (std::size_t a = 0; a < config.strategies.size(); ++a) {
        const std::string file =
            (fs::path(config.out_dir) / metrics_file_name(streams[s], base, config.strategies[a]))
                .string();
        if (!fs::exists(file)) {
          throw MissingInputError("missing run output: " + file);
        }
        const ChunkMetricsReport metrics = read_metrics_csv(file);
        for (std::size_t c = 0; c < criteria.size(); ++c) {
          rep.scores[c][s][a] = metrics.pooled(criteria[c]);
        }
      }
    }

    for (std::size_t c = 0; c < criteria.size(); ++c) {
      const RankTable table = average_ranks(rep.scores[c], true);
      rep.average_rank.push_back(table.average_ranks);
      rep.friedman_p_raw.push_back(friedman_test(table).p_value);

      const std::size_t k = config.strategies.size();
      std::vector<std::vector<double>> pair_raw(k, std::vector<double>(k, std::nan("")));
      std::vector<double> flat;
      std::vector<std::pair<std::size_t, std::size_t>> flat_idx;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
          std::vector<double> a(streams.size()), b(streams.size());
          for (std::size_t s = 0; s < streams.size(); ++s) {
            a[s] = rep.scores[c][s][i];
            b[s] = rep.scores[c][s][j];
          }
          try {
            const double p = wilcoxon_signed_rank(a, b).p_value;
            pair_raw[i][j] = pair_raw[j][i] = p;
            flat.push_back(p);
            flat_idx.emplace_back(i, j);
          } catch (const std::invalid_argument&) {
            // n/a: too few nonzero differences
          }
        }
      }
      std::vector<std::vector<double>> pair_holm(k, std::vector<double>(k, std::nan("")));
      if (!flat.empty()) {
        const auto adjusted = holm_adjust(flat);
        for (std::size_t t = 0; t < flat.size(); ++t) {
          pair_holm[flat_idx[t].first][flat_idx[t].second] = adjusted[t];
          pair_holm[flat_idx[t].second][flat_idx[t].first] = adjusted[t];
        }
      }
      rep.pairwise_p_raw.push_back(std::move(pair_raw));
      rep.pairwise_p_holm.push_back(std::move(pair_holm));
    }
    rep.friedman_p_holm = holm_adjust(rep.friedman_p_raw);
    reports.push_back(std::move(rep));
  }

  // emit files
  fs::create_directories(config.out_dir);
  for (const auto& rep : reports) {
    const std::string base_tag = to_string(rep.base);
    std::ofstream csv((fs::path(config.out_dir) / ("report_" + base_tag + ".csv")).string(),
                      std::ios::binary);
    std::ofstream txt((fs::path(config.out_dir) / ("report_" + base_tag + ".txt")).string(),
                      std::ios::binary);
    if (!csv || !txt) throw std::runtime_error("cannot write report files");

    csv << "criterion,row,name";
    for (Strategy s : rep.strategies) csv << ',' << to_string(s);
    csv << '\n';
    txt << "Stream classifiers based on " << base_tag << "\n";
    for (std::size_t c = 0; c < rep.criteria.size(); ++c) {
      txt << "\n== " << rep.criteria[c] << " ==\n";
      txt << "Friedman p-value (Holm): " << format_p(rep.friedman_p_holm[c]) << "\n";
      csv << rep.criteria[c] << ",friedman_p_raw,," << format_p(rep.friedman_p_raw[c]);
      for (std::size_t i = 1; i < rep.strategies.size(); ++i) csv << ',';
      csv << '\n';
      csv << rep.criteria[c] << ",friedman_p_holm,," << format_p(rep.friedman_p_holm[c]);
      for (std::size_t i = 1; i < rep.strategies.size(); ++i) csv << ',';
      csv << '\n';
      csv << rep.criteria[c] << ",average_rank,";
      txt << "Average rank:";
      for (std::size_t a = 0; a < rep.strategies.size(); ++a) {
        csv << ',' << format_double(rep.average_rank[c][a]);
        txt << ' ' << to_string(rep.strategies[a]) << '=' << rep.average_rank[c][a];
      }
      csv << '\n';
      txt << '\n';
      for (std::size_t i = 0; i < rep.strategies.size(); ++i) {
        csv << rep.criteria[c] << ",wilcoxon_p_raw," << to_string(rep.strategies[i]);
        for (std::size_t j = 0; j < rep.strategies.size(); ++j) {
          csv << ',' << (i == j ? "" : format_p(rep.pairwise_p_raw[c][i][j]));
        }
        csv << '\n';
      }
      for (std::size_t i = 0; i < rep.strategies.size(); ++i) {
        csv << rep.criteria[c] << ",wilcoxon_p_holm," << to_string(rep.strategies[i]);
        txt << to_string(rep.strategies[i]) << ':';
        for (std::size_t j = 0; j < rep.strategies.size(); ++j) {
          const double p = rep.pairwise_p_holm[c][i][j];
          csv << ',' << (i == j ? "" : format_p(p));
          if (j > i) txt << ' ' << to_string(rep.strategies[j]) << '=' << format_p(p);
        }
        csv << '\n';
        txt << '\n';
      }

      // rank plot data: algorithms ordered by average rank with bar ids
      std::vector<int> order(rep.strategies.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return rep.average_rank[c][a] < rep.average_rank[c][b];
      });
      const auto bars = non_significant_bars(rep.pairwise_p_holm[c], order, config.alpha);
      std::ofstream plot((fs::path(config.out_dir) /
                          ("rankplot_" + base_tag + "_" + rep.criteria[c] + ".csv"))
                             .string(),
                         std::ios::binary);
      plot << "algorithm,average_rank,bars\n";
      for (std::size_t pos = 0; pos < order.size(); ++pos) {
        plot << to_string(rep.strategies[order[pos]]) << ','
             << format_double(rep.average_rank[c][order[pos]]) << ',';
        std::string ids;
        for (std::size_t b = 0; b < bars.size(); ++b) {
          if (static_cast<int>(pos) >= bars[b].first && static_cast<int>(pos) <= bars[b].second) {
            if (!ids.empty()) ids += ';';
            ids += std::to_string(b);
          }
        }
        plot << ids << '\n';
      }
    }
  }
  return reports;
}

int cmd_generate(const ExperimentConfig& config) {
  const auto paths = generate_all(config);
  for (const auto& p : paths) std::cout << p << '\n';
  return 0;
}

int cmd_run(const ExperimentConfig& config) {
  const auto runs = run_all(config);
  for (const auto& r : runs) {
    std::cout << r.metrics_file << " (" << r.instances << " instances, " << r.wall_ms
              << " ms)\n";
  }
  return 0;
}

int cmd_report(const ExperimentConfig& config) {
  const auto reports = report_all(config);
  for (const auto& rep : reports) {
    std::cout << "report_" << to_string(rep.base) << ".txt\n";
  }
  return 0;
}

}  // namespace scmstream
