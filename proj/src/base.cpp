#include "scmstream/base.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scmstream {

namespace {

constexpr double kDensityFloor = 1e-12;
constexpr double kBandwidthFloor = 1e-6;

void check_training_set(const Dataset& train, int d, int M) {
  if (train.empty()) throw std::invalid_argument("training set is empty");
  if (train.d != d) throw std::invalid_argument("training set dimensionality mismatch");
  if (train.M != M) throw std::invalid_argument("training set class count mismatch");
}

void softmax_normalize(std::vector<double>& scores) {
  double hi = scores[0];
  for (double s : scores) hi = std::max(hi, s);
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp(s - hi);
    sum += s;
  }
  for (double& s : scores) s /= sum;
}

}  // namespace

BaseClassifier::BaseClassifier(int d, int M) : d_(d), M_(M) {
  if (d <= 0 || M <= 0) throw std::invalid_argument("classifier needs d >= 1 and M >= 1");
}

void BaseClassifier::check_query(const FeatureVector& x) const {
  if (static_cast<int>(x.size()) != d_) {
    throw std::invalid_argument("query dimensionality mismatch");
  }
}

// ---------------------------------------------------------------------------
// NaiveBayesKde

void NaiveBayesKde::FeatureStats::push(double v) {
  values.push_back(v);
  const double delta = v - mean;
  mean += delta / static_cast<double>(values.size());
  m2 += delta * (v - mean);
}

double NaiveBayesKde::FeatureStats::sample_sd() const {
  if (values.size() < 2) return 0.0;
  return std::sqrt(std::max(0.0, m2 / static_cast<double>(values.size() - 1)));
}

NaiveBayesKde::NaiveBayesKde(int d, int M, std::optional<double> fixed_bandwidth)
    : BaseClassifier(d, M), fixed_bandwidth_(fixed_bandwidth) {}

void NaiveBayesKde::fit(const Dataset& train) {
  check_training_set(train, d_, M_);
  stats_.assign(static_cast<std::size_t>(M_) * d_, FeatureStats{});
  class_counts_.assign(M_, 0);
  total_ = 0;
  trained_ = true;
  for (const auto& inst : train.instances) update(inst);
}

void NaiveBayesKde::update(const LabeledInstance& inst) {
  if (!trained_) throw std::logic_error("update before fit");
  check_query(inst.x);
  if (inst.label < 1 || inst.label > M_) throw std::invalid_argument("label out of range");
  const int cls = inst.label - 1;
  for (int f = 0; f < d_; ++f) stats_[cls * d_ + f].push(inst.x[f]);
  ++class_counts_[cls];
  ++total_;
}

double NaiveBayesKde::bandwidth(int cls, int feature) const {
  if (fixed_bandwidth_) return *fixed_bandwidth_;
  const FeatureStats& st = stats_[cls * d_ + feature];
  const double n = static_cast<double>(st.values.size());
  if (n < 1.0) return kBandwidthFloor;
  const double h = 1.06 * st.sample_sd() * std::pow(n, -0.2);
  return std::max(h, kBandwidthFloor);
}

SupportVector NaiveBayesKde::supports(const FeatureVector& x) const {
  if (!trained_) throw std::logic_error("supports before fit");
  check_query(x);
  constexpr double kInvSqrt2Pi = 0.39894228040143267794;
  std::vector<double> log_post(M_);
  for (int c = 0; c < M_; ++c) {
    double lp = std::log((class_counts_[c] + 1.0) / (total_ + static_cast<double>(M_)));
    for (int f = 0; f < d_; ++f) {
      const FeatureStats& st = stats_[c * d_ + f];
      double density = 0.0;
      if (!st.values.empty()) {
        const double h = bandwidth(c, f);
        const double inv_h = 1.0 / h;
        double acc = 0.0;
        for (double v : st.values) {
          const double z = (x[f] - v) * inv_h;
          acc += std::exp(-0.5 * z * z);
        }
        density = acc * inv_h * kInvSqrt2Pi / static_cast<double>(st.values.size());
      }
      lp += std::log(std::max(density, kDensityFloor));
    }
    log_post[c] = lp;
  }
  softmax_normalize(log_post);
  return log_post;
}

std::unique_ptr<BaseClassifier> NaiveBayesKde::clone() const {
  return std::make_unique<NaiveBayesKde>(*this);
}

// ---------------------------------------------------------------------------
// KnnClassifier

KnnClassifier::KnnClassifier(int d, int M, int k) : BaseClassifier(d, M), index_(d), k_(k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
}

void KnnClassifier::fit(const Dataset& train) {
  check_training_set(train, d_, M_);
  std::vector<double> flat;
  flat.reserve(train.size() * d_);
  labels_.clear();
  labels_.reserve(train.size());
  for (const auto& inst : train.instances) {
    flat.insert(flat.end(), inst.x.begin(), inst.x.end());
    labels_.push_back(inst.label);
  }
  index_.assign(flat, d_);
  trained_ = true;
}

void KnnClassifier::update(const LabeledInstance& inst) {
  if (!trained_) throw std::logic_error("update before fit");
  if (inst.label < 1 || inst.label > M_) throw std::invalid_argument("label out of range");
  index_.insert(inst.x);
  labels_.push_back(inst.label);
}

SupportVector KnnClassifier::supports(const FeatureVector& x) const {
  if (!trained_) throw std::logic_error("supports before fit");
  check_query(x);
  const auto neighbours = index_.knn(x, k_);
  std::vector<double> out(M_, 0.0);
  for (const auto& nb : neighbours) out[labels_[nb.id] - 1] += 1.0;
  const double denom = static_cast<double>(neighbours.size() + M_);
  for (double& v : out) v = (v + 1.0) / denom;
  return out;
}

std::unique_ptr<BaseClassifier> KnnClassifier::clone() const {
  return std::make_unique<KnnClassifier>(*this);
}

// ---------------------------------------------------------------------------
// SgdLinearClassifier

SgdLinearClassifier::SgdLinearClassifier(int d, int M) : BaseClassifier(d, M) {
  weights_.assign(static_cast<std::size_t>(M_) * d_, 0.0);
  bias_.assign(M_, 0.0);
}

void SgdLinearClassifier::fit(const Dataset& train) {
  check_training_set(train, d_, M_);
  std::fill(weights_.begin(), weights_.end(), 0.0);
  std::fill(bias_.begin(), bias_.end(), 0.0);
  steps_ = 0;
  trained_ = true;
  for (int epoch = 0; epoch < kEpochs; ++epoch) {
    for (const auto& inst : train.instances) step(inst);
  }
}

void SgdLinearClassifier::update(const LabeledInstance& inst) {
  if (!trained_) throw std::logic_error("update before fit");
  step(inst);
}

void SgdLinearClassifier::step(const LabeledInstance& inst) {
  check_query(inst.x);
  if (inst.label < 1 || inst.label > M_) throw std::invalid_argument("label out of range");
  // eta_t = 1/(lambda*(t + t0)) with t0 such that eta_0 = kInitialRate
  const double t0 = 1.0 / (kLambda * kInitialRate);
  const double eta = 1.0 / (kLambda * (static_cast<double>(steps_) + t0));
  ++steps_;
  for (int c = 0; c < M_; ++c) {
    double* w = weights_.data() + static_cast<std::size_t>(c) * d_;
    const double y = (inst.label - 1 == c) ? 1.0 : -1.0;
    double margin = bias_[c];
    for (int f = 0; f < d_; ++f) margin += w[f] * inst.x[f];
    const double shrink = 1.0 - eta * kLambda;
    if (y * margin < 1.0) {
      for (int f = 0; f < d_; ++f) w[f] = shrink * w[f] + eta * y * inst.x[f];
      bias_[c] += eta * y;
    } else {
      for (int f = 0; f < d_; ++f) w[f] *= shrink;
    }
  }
}

SupportVector SgdLinearClassifier::supports(const FeatureVector& x) const {
  // well-defined without fit: zero weights give uniform supports
  check_query(x);
  std::vector<double> margins(M_);
  for (int c = 0; c < M_; ++c) {
    const double* w = weights_.data() + static_cast<std::size_t>(c) * d_;
    double m = bias_[c];
    for (int f = 0; f < d_; ++f) m += w[f] * x[f];
    margins[c] = m;
  }
  softmax_normalize(margins);
  return margins;
}

std::unique_ptr<BaseClassifier> SgdLinearClassifier::clone() const {
  return std::make_unique<SgdLinearClassifier>(*this);
}

// ---------------------------------------------------------------------------

BaseKind base_kind_from_string(const std::string& tag) {
  if (tag == "NB") return BaseKind::NaiveBayes;
  if (tag == "KNN") return BaseKind::Knn;
  if (tag == "SGD") return BaseKind::Sgd;
  throw ConfigError("unknown base classifier tag: " + tag);
}

std::string to_string(BaseKind kind) {
  switch (kind) {
    case BaseKind::NaiveBayes: return "NB";
    case BaseKind::Knn: return "KNN";
    case BaseKind::Sgd: return "SGD";
  }
  return "?";
}

std::unique_ptr<BaseClassifier> make_base_classifier(BaseKind kind, int d, int M) {
  switch (kind) {
    case BaseKind::NaiveBayes: return std::make_unique<NaiveBayesKde>(d, M);
    case BaseKind::Knn: return std::make_unique<KnnClassifier>(d, M);
    case BaseKind::Sgd: return std::make_unique<SgdLinearClassifier>(d, M);
  }
  throw std::logic_error("unreachable");
}

BaseFactory base_factory(BaseKind kind) {
  return [kind](int d, int M) { return make_base_classifier(kind, d, M); };
}

}  // namespace scmstream
