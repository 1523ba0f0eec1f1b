#ifndef SCMSTREAM_BASE_HPP
#define SCMSTREAM_BASE_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "scmstream/core.hpp"
#include "scmstream/kdtree.hpp"

namespace scmstream {

/// Batch-trainable classifier exposing the canonical support model: for any
/// query, supports() returns M values in [0,1] summing to 1. Classes absent
/// from the training data keep small smoothed supports, never exact zeros.
class BaseClassifier {
 public:
  virtual ~BaseClassifier() = default;

  /// Throws std::invalid_argument on an empty dataset.
  virtual void fit(const Dataset& train) = 0;

  /// Incorporates one labeled instance. For the NB and kNN variants the
  /// result is identical to refitting on the augmented dataset; for SGD it is
  /// a single gradient step.
  virtual void update(const LabeledInstance& inst) = 0;

  virtual SupportVector supports(const FeatureVector& x) const = 0;

  virtual std::unique_ptr<BaseClassifier> clone() const = 0;
  virtual std::string_view name() const = 0;

  int predict(const FeatureVector& x) const { return argmax_with_tie_break(supports(x)); }

  int dim() const { return d_; }
  int num_classes() const { return M_; }
  bool trained() const { return trained_; }

 protected:
  BaseClassifier(int d, int M);
  void check_query(const FeatureVector& x) const;

  int d_ = 0;
  int M_ = 0;
  bool trained_ = false;
};

/// Naive Bayes with per-class, per-feature Gaussian kernel density
/// estimation. Bandwidth: Silverman h = 1.06 * sd * n^(-1/5), floored at
/// 1e-6; class priors Laplace-smoothed. Densities are floored at 1e-12 so
/// absent classes and far-away queries degrade to the smoothed priors.
class NaiveBayesKde : public BaseClassifier {
 public:
  NaiveBayesKde(int d, int M, std::optional<double> fixed_bandwidth = std::nullopt);

  void fit(const Dataset& train) override;
  void update(const LabeledInstance& inst) override;
  SupportVector supports(const FeatureVector& x) const override;
  std::unique_ptr<BaseClassifier> clone() const override;
  std::string_view name() const override { return "NB"; }

  double bandwidth(int cls, int feature) const;

 private:
  struct FeatureStats {
    std::vector<double> values;
    double mean = 0.0;
    double m2 = 0.0;  // sum of squared deviations (Welford)

    void push(double v);
    double sample_sd() const;
  };

  // class-major: stats_[cls * d_ + feature]
  std::vector<FeatureStats> stats_;
  std::vector<std::int64_t> class_counts_;
  std::int64_t total_ = 0;
  std::optional<double> fixed_bandwidth_;
};

/// k-nearest-neighbour classifier with unweighted votes and Laplace-smoothed
/// supports (count_i + 1) / (k + M). Exact neighbour search via the kd-tree
/// index; distance ties resolve toward the earlier arrival.
class KnnClassifier : public BaseClassifier {
 public:
  static constexpr int kDefaultK = 10;

  KnnClassifier(int d, int M, int k = kDefaultK);

  void fit(const Dataset& train) override;
  void update(const LabeledInstance& inst) override;
  SupportVector supports(const FeatureVector& x) const override;
  std::unique_ptr<BaseClassifier> clone() const override;
  std::string_view name() const override { return "KNN"; }

  const DynamicPointIndex& index() const { return index_; }
  int k() const { return k_; }

 private:
  DynamicPointIndex index_;
  std::vector<int> labels_;  // id order
  int k_;
};

/// One-vs-rest linear classifier trained with hinge-loss SGD
/// (L2 lambda = 1e-4, eta_t = 1/(lambda*(t + t0)), t0 chosen so eta_0 = 0.1,
/// 5 in-order epochs in fit). Supports are the softmax of the margins.
class SgdLinearClassifier : public BaseClassifier {
 public:
  static constexpr double kLambda = 1e-4;
  static constexpr double kInitialRate = 0.1;
  static constexpr int kEpochs = 5;

  SgdLinearClassifier(int d, int M);

  void fit(const Dataset& train) override;
  void update(const LabeledInstance& inst) override;
  SupportVector supports(const FeatureVector& x) const override;
  std::unique_ptr<BaseClassifier> clone() const override;
  std::string_view name() const override { return "SGD"; }

  double weight(int cls, int feature) const { return weights_[cls * d_ + feature]; }
  double bias(int cls) const { return bias_[cls]; }

 private:
  void step(const LabeledInstance& inst);

  std::vector<double> weights_;  // class-major
  std::vector<double> bias_;
  std::int64_t steps_ = 0;
};

enum class BaseKind { NaiveBayes, Knn, Sgd };

BaseKind base_kind_from_string(const std::string& tag);  // "NB" | "KNN" | "SGD"
std::string to_string(BaseKind kind);

std::unique_ptr<BaseClassifier> make_base_classifier(BaseKind kind, int d, int M);

/// Factory signature shared by the SCM trainer and the stream strategies.
using BaseFactory = std::function<std::unique_ptr<BaseClassifier>(int d, int M)>;

BaseFactory base_factory(BaseKind kind);

}  // namespace scmstream

#endif
