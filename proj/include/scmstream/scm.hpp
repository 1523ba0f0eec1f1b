#ifndef SCMSTREAM_SCM_HPP
#define SCMSTREAM_SCM_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "scmstream/base.hpp"
#include "scmstream/core.hpp"
#include "scmstream/kdtree.hpp"

namespace scmstream {

/// Validation point: feature vector, true label, and decision memberships
/// mu_D_i = P(decision = i | x) estimated by the randomized reference
/// classifier of the model that did NOT train on this point.
struct ValidationObject {
  FeatureVector x;
  int label = 0;
  std::vector<double> decision_memberships;
  std::int64_t t = 0;
};

/// Arrival-ordered validation store with an exact spatial index over the
/// feature vectors. Object ids equal current positions.
class ValidationSet {
 public:
  ValidationSet() = default;
  explicit ValidationSet(int dim) : index_(dim) {}

  void reset(int dim);
  void assign(std::vector<ValidationObject> objects, int dim);
  void append(ValidationObject obj);
  void truncate_to_newest(std::size_t count);

  std::size_t size() const { return objects_.size(); }
  bool empty() const { return objects_.empty(); }
  const ValidationObject& operator[](std::size_t i) const { return objects_[i]; }
  const std::vector<ValidationObject>& objects() const { return objects_; }
  std::vector<ValidationObject> take_objects();

  std::vector<Neighbor> knn(const FeatureVector& query, int k) const {
    return index_.knn(query, k);
  }
  const DynamicPointIndex& index() const { return index_; }

 private:
  std::vector<ValidationObject> objects_;
  DynamicPointIndex index_;
};

/// Neighbourhood size rule: K = ceil(sqrt(|V|)), bumped by one when M
/// divides it (tie avoidance), capped at |V|.
int neighbourhood_size(std::size_t v_count, int num_classes);

struct NeighbourWeight {
  std::int32_t index;  // position in the validation set
  double weight;       // mu_N in (0,1]
};

/// Gaussian neighbourhood memberships mu_N(x_V) = C * exp(-beta*||x-x_V||^2)
/// for validation objects strictly nearer than the K-th neighbour distance;
/// objects at exactly that distance are excluded.
std::vector<NeighbourWeight> neighbourhood_memberships(const FeatureVector& x,
                                                       const ValidationSet& validation, int k,
                                                       double beta = 1.0, double c = 1.0);

/// Local soft confusion matrix: rows are true classes, columns are decisions.
/// eps(j,i) is a ratio of fuzzy cardinalities (product t-norm, sigma-count);
/// rows whose class has no neighbourhood mass are flagged and left zero.
struct LocalConfusion {
  int num_classes = 0;
  std::vector<double> eps;        // row-major M x M
  std::vector<char> row_flagged;  // true when the row denominator was 0

  double at(int true_class, int decision) const {
    return eps[static_cast<std::size_t>(true_class) * num_classes + decision];
  }
};

LocalConfusion soft_confusion_matrix(const ValidationSet& validation,
                                     const std::vector<NeighbourWeight>& neighbourhood,
                                     int num_classes);

struct ScmOptions {
  int folds = 3;
  std::uint64_t fold_seed = 7;
  double beta = 1.0;  // Gaussian neighbourhood width
  double c = 1.0;     // neighbourhood normalizing coefficient (cancels in eps)
  int num_threads = 1;
};

/// Correction wrapper around a base classifier: the RRC decision
/// probabilities of the base supports are pushed through the locally
/// estimated confusion matrix, Bayes-style.
class ScmClassifier {
 public:
  ScmClassifier(std::unique_ptr<BaseClassifier> base, ValidationSet validation,
                ScmOptions options = {}, bool degraded = false);

  SupportVector correct_supports(const FeatureVector& x) const;
  int predict(const FeatureVector& x) const;

  /// RRC decision probabilities of the current base classifier at x; the
  /// input to the correction and the memberships of an appended object.
  SupportVector decision_probabilities(const FeatureVector& x) const;
  /// Correction applied to precomputed decision probabilities.
  SupportVector correct_from_decision_probs(const FeatureVector& x,
                                            const SupportVector& decision_probs) const;

  /// Streaming append: decision memberships computed from the current base
  /// classifier's RRC.
  void append_validation(const LabeledInstance& inst);
  void append_validation(const LabeledInstance& inst, SupportVector memberships);
  /// Replay append: the object keeps the memberships it already carries.
  void append_validation(ValidationObject obj);

  void truncate_validation_to_newest(std::size_t count);
  /// Moves the validation objects out, leaving an empty validation set.
  std::vector<ValidationObject> take_validation();

  const ValidationSet& validation() const { return validation_; }
  const BaseClassifier& base() const { return *base_; }
  bool degraded() const { return degraded_; }
  const ScmOptions& options() const { return options_; }

 private:
  std::unique_ptr<BaseClassifier> base_;
  ValidationSet validation_;
  ScmOptions options_;
  bool degraded_ = false;
};

/// Trains the correction wrapper: a stratified k-fold pass computes held-out
/// decision memberships for every training point (so |V| = |L|), then the
/// final base classifier is fitted on the full set. Sets the degraded flag
/// and falls back to in-sample memberships when the set is too small to
/// split.
ScmClassifier train_scm(const Dataset& learning_set, const BaseFactory& factory,
                        const ScmOptions& options = {});

}  // namespace scmstream

#endif
