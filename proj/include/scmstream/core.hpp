#ifndef SCMSTREAM_CORE_HPP
#define SCMSTREAM_CORE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace scmstream {

// Feature vectors and support vectors are plain double sequences; labels are
// 1-based class indices in {1, ..., M}.
using FeatureVector = std::vector<double>;
using SupportVector = std::vector<double>;

struct LabeledInstance {
  FeatureVector x;
  int label = 0;
  std::int64_t t = 0;  // arrival index, strictly increasing within a stream
};

struct Dataset {
  std::vector<LabeledInstance> instances;
  int d = 0;
  int M = 0;

  std::size_t size() const { return instances.size(); }
  bool empty() const { return instances.empty(); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::int64_t row, const std::string& what)
      : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::int64_t row() const { return row_; }

 private:
  std::int64_t row_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Maximum-support decision; ties resolved toward the lowest class index.
/// Returns a 1-based label.
int argmax_with_tie_break(const std::vector<double>& supports);

/// Throws std::invalid_argument unless each entry is in [0,1] and the sum is
/// 1 within `tol`.
void check_support_vector(const std::vector<double>& supports, double tol = 1e-9);

/// Shortest round-trip decimal formatting (std::to_chars).
std::string format_double(double v);

/// Reads the stream CSV format: optional `f1,...,fd,label` header, then one
/// instance per row (d numeric fields + 1-based integer label). Arrival
/// indices are assigned in row order. Malformed rows raise ParseError with
/// the 1-based data row number.
Dataset read_stream_csv(const std::string& path, int d, int M);

/// Writes the canonical stream CSV: header line, '.' decimal point,
/// '\n' newlines. read_stream_csv followed by write_stream_csv reproduces a
/// canonical file byte for byte.
void write_stream_csv(const std::string& path, const Dataset& data);

}  // namespace scmstream

#endif
