#include "scmstream/core.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace scmstream {

int argmax_with_tie_break(const std::vector<double>& supports) {
  if (supports.empty()) throw std::invalid_argument("argmax of empty support vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < supports.size(); ++i) {
    if (supports[i] > supports[best]) best = i;
  }
  return static_cast<int>(best) + 1;
}

void check_support_vector(const std::vector<double>& supports, double tol) {
  if (supports.empty()) throw std::invalid_argument("empty support vector");
  double sum = 0.0;
  for (double g : supports) {
    if (!std::isfinite(g) || g < -tol || g > 1.0 + tol) {
      throw std::invalid_argument("support out of [0,1]");
    }
    sum += g;
  }
  if (std::fabs(sum - 1.0) > tol) throw std::invalid_argument("supports do not sum to 1");
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

bool parse_double(const std::string& field, double& out) {
  const char* first = field.data();
  const char* last = first + field.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

Dataset read_stream_csv(const std::string& path, int d, int M) {
  if (d <= 0 || M <= 0) throw std::invalid_argument("d and M must be positive");
  std::ifstream in(path);
  if (!in) throw MissingInputError("cannot open stream file: " + path);

  Dataset data;
  data.d = d;
  data.M = M;

  std::string line;
  std::int64_t row = 0;
  bool first_line = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_row(line);
    if (first_line) {
      first_line = false;
      double probe;
      if (!fields.empty() && !parse_double(fields[0], probe)) continue;  // header
    }
    ++row;
    if (fields.size() != static_cast<std::size_t>(d) + 1) {
      throw ParseError(row, "expected " + std::to_string(d + 1) + " fields, got " +
                                std::to_string(fields.size()));
    }
    LabeledInstance inst;
    inst.x.resize(d);
    for (int j = 0; j < d; ++j) {
      if (!parse_double(fields[j], inst.x[j])) {
        throw ParseError(row, "non-numeric feature '" + fields[j] + "'");
      }
    }
    int label = 0;
    {
      const std::string& f = fields[d];
      auto res = std::from_chars(f.data(), f.data() + f.size(), label);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw ParseError(row, "non-integer label '" + f + "'");
      }
    }
    if (label < 1 || label > M) {
      throw ParseError(row, "label " + std::to_string(label) + " outside 1.." + std::to_string(M));
    }
    inst.label = label;
    inst.t = row - 1;
    data.instances.push_back(std::move(inst));
  }
  return data;
}

void write_stream_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write stream file: " + path);
  for (int j = 1; j <= data.d; ++j) out << 'f' << j << ',';
  out << "label\n";
  for (const auto& inst : data.instances) {
    for (double v : inst.x) out << format_double(v) << ',';
    out << inst.label << '\n';
  }
}

}  // namespace scmstream
