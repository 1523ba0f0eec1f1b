#ifndef SCMSTREAM_GEN_HPP
#define SCMSTREAM_GEN_HPP

#include <cstdint>
#include <string>

#include "scmstream/core.hpp"

namespace scmstream {

enum class DriftKind { Sudden, Incremental };

DriftKind drift_kind_from_string(const std::string& tag);
std::string to_string(DriftKind kind);

/// Synthetic drifting-stream configuration. Two latent concepts, each a
/// per-class Gaussian mixture (2 components per class, means uniform in
/// [-5,5]^d, isotropic unit variance). The active concept follows a step
/// (sudden) or logistic ramp of width n/10 (incremental) at each drift
/// point. Class priors are (ratio+1):1 majority versus each minority class;
/// labels flip to a uniformly random other class with probability `noise`.
struct StreamConfig {
  std::size_t n = 30000;
  int d = 8;
  int M = 2;
  DriftKind drift = DriftKind::Sudden;
  int n_drifts = 1;
  double noise = 0.0;
  double imbalance_ratio = 0.0;
  std::uint64_t seed = 0;

  /// Throws ConfigError; n must cover at least two initial chunks of the
  /// default warm-up size (400), noise stays below 0.5.
  void validate() const;
};

/// Deterministic for a fixed config: per-instance randomness comes from a
/// counter-based generator, so parallel and serial generation are
/// bit-identical.
Dataset generate_stream(const StreamConfig& config, int num_threads = 1);

/// Serial reference for the benchmark; same bytes as generate_stream.
Dataset generate_stream_serial(const StreamConfig& config);

/// Canonical file name: stream_<kind>_<noise>_<imbalance>_<seed>.csv
std::string stream_file_name(const StreamConfig& config);

/// Writes the stream CSV plus a `<file>.meta` sidecar with the config echoed
/// as key=value lines.
void write_stream_with_metadata(const std::string& directory, const StreamConfig& config,
                                const Dataset& data);

}  // namespace scmstream

#endif
