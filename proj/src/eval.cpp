#include "scmstream/eval.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scmstream {

ConfusionAccumulator::ConfusionAccumulator(int num_classes) : M_(num_classes) {
  if (num_classes < 1) throw std::invalid_argument("confusion matrix needs M >= 1");
  counts_.assign(static_cast<std::size_t>(M_) * M_, 0);
}

void ConfusionAccumulator::add(int true_label, int predicted_label) {
  if (true_label < 1 || true_label > M_ || predicted_label < 1 || predicted_label > M_) {
    throw std::invalid_argument("label outside 1..M");
  }
  ++counts_[static_cast<std::size_t>(true_label - 1) * M_ + (predicted_label - 1)];
  ++total_;
}

void ConfusionAccumulator::merge(const ConfusionAccumulator& other) {
  if (other.M_ != M_) throw std::invalid_argument("confusion matrix size mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

void ConfusionAccumulator::clear() {
  std::fill(counts_.begin(), counts_.end(), 0);
  total_ = 0;
}

std::int64_t ConfusionAccumulator::at(int true_label, int predicted_label) const {
  return counts_[static_cast<std::size_t>(true_label - 1) * M_ + (predicted_label - 1)];
}

namespace {

struct ClassCounts {
  double tp, fp, fn, tn;
  bool absent;  // class never true and never predicted
};

ClassCounts one_vs_rest(const ConfusionAccumulator& acc, int cls) {
  const int m = acc.num_classes();
  double tp = 0, fp = 0, fn = 0;
  for (int j = 1; j <= m; ++j) {
    for (int i = 1; i <= m; ++i) {
      const double c = static_cast<double>(acc.at(j, i));
      if (j == cls && i == cls) tp += c;
      else if (i == cls) fp += c;
      else if (j == cls) fn += c;
    }
  }
  const double tn = static_cast<double>(acc.total()) - tp - fp - fn;
  return ClassCounts{tp, fp, fn, tn, tp + fp + fn == 0.0};
}

void check_nonempty(const ConfusionAccumulator& acc) {
  if (acc.total() == 0) throw std::invalid_argument("empty confusion accumulator");
}

}  // namespace

double macro_fdr(const ConfusionAccumulator& acc) {
  check_nonempty(acc);
  const int m = acc.num_classes();
  double sum = 0.0;
  for (int c = 1; c <= m; ++c) {
    const ClassCounts k = one_vs_rest(acc, c);
    double value;
    if (k.tp + k.fp > 0.0) value = k.fp / (k.tp + k.fp);
    else value = k.absent ? 0.0 : 1.0;  // present but never predicted: worst
    sum += value;
  }
  return sum / m;
}

double macro_fnr(const ConfusionAccumulator& acc) {
  check_nonempty(acc);
  const int m = acc.num_classes();
  double sum = 0.0;
  for (int c = 1; c <= m; ++c) {
    const ClassCounts k = one_vs_rest(acc, c);
    double value;
    if (k.tp + k.fn > 0.0) value = k.fn / (k.tp + k.fn);
    else value = k.absent ? 0.0 : 1.0;
    sum += value;
  }
  return sum / m;
}

double macro_mcc_loss(const ConfusionAccumulator& acc) {
  check_nonempty(acc);
  const int m = acc.num_classes();
  double sum = 0.0;
  for (int c = 1; c <= m; ++c) {
    const ClassCounts k = one_vs_rest(acc, c);
    const double denom2 = (k.tp + k.fp) * (k.tp + k.fn) * (k.tn + k.fp) * (k.tn + k.fn);
    double mcc = 0.0;
    if (denom2 > 0.0) mcc = (k.tp * k.tn - k.fp * k.fn) / std::sqrt(denom2);
    sum += mcc;
  }
  return (1.0 - sum / m) / 2.0;
}

double ChunkMetricsReport::pooled(const std::string& criterion) const {
  if (criterion == "mafdr") return pooled_mafdr;
  if (criterion == "mafnr") return pooled_mafnr;
  if (criterion == "mamcc_loss") return pooled_mamcc_loss;
  throw std::invalid_argument("unknown criterion: " + criterion);
}

namespace {

std::string event_field(const std::vector<StreamEvent>& events, std::int64_t lo,
                        std::int64_t hi) {
  std::string out;
  for (const auto& ev : events) {
    if (ev.position >= lo && ev.position < hi) {
      if (!out.empty()) out += ';';
      out += ev.kind;
      out += '@';
      out += std::to_string(ev.position);
    }
  }
  return out;
}

}  // namespace

void write_metrics_csv(const std::string& path, const ChunkMetricsReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write metrics file: " + path);
  out << "chunk_index,mafdr,mafnr,mamcc_loss,events\n";
  for (const auto& c : report.chunks) {
    const std::int64_t lo = static_cast<std::int64_t>(c.index * report.chunk_size);
    const std::int64_t hi = lo + static_cast<std::int64_t>(report.chunk_size);
    out << c.index << ',' << format_double(c.mafdr) << ',' << format_double(c.mafnr) << ','
        << format_double(c.mamcc_loss) << ',' << event_field(report.events, lo, hi) << '\n';
  }
  out << "pooled," << format_double(report.pooled_mafdr) << ','
      << format_double(report.pooled_mafnr) << ',' << format_double(report.pooled_mamcc_loss)
      << ",\n";
  out << "chunk_mean," << format_double(report.chunk_mean_mafdr) << ','
      << format_double(report.chunk_mean_mafnr) << ','
      << format_double(report.chunk_mean_mamcc_loss) << ",\n";
}

ChunkMetricsReport read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("cannot open metrics file: " + path);
  ChunkMetricsReport report;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string idx, fdr, fnr, mcc, events;
    std::getline(ss, idx, ',');
    std::getline(ss, fdr, ',');
    std::getline(ss, fnr, ',');
    std::getline(ss, mcc, ',');
    std::getline(ss, events);
    const double vf = std::stod(fdr), vn = std::stod(fnr), vm = std::stod(mcc);
    if (idx == "pooled") {
      report.pooled_mafdr = vf;
      report.pooled_mafnr = vn;
      report.pooled_mamcc_loss = vm;
    } else if (idx == "chunk_mean") {
      report.chunk_mean_mafdr = vf;
      report.chunk_mean_mafnr = vn;
      report.chunk_mean_mamcc_loss = vm;
    } else {
      report.chunks.push_back({static_cast<std::size_t>(std::stoull(idx)), vf, vn, vm});
      std::stringstream es(events);
      std::string tok;
      while (std::getline(es, tok, ';')) {
        if (tok.size() >= 3 && tok[1] == '@') {
          report.events.push_back({std::stoll(tok.substr(2)), tok[0]});
        }
      }
    }
  }
  return report;
}

}  // namespace scmstream
