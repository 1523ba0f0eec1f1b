#include "scmstream/scm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "scmstream/rrc.hpp"

namespace scmstream {

void ValidationSet::reset(int dim) {
  objects_.clear();
  index_.reset(dim);
}

void ValidationSet::assign(std::vector<ValidationObject> objects, int dim) {
  objects_ = std::move(objects);
  std::vector<double> flat;
  flat.reserve(objects_.size() * dim);
  for (const auto& obj : objects_) flat.insert(flat.end(), obj.x.begin(), obj.x.end());
  index_.assign(flat, dim);
}

void ValidationSet::append(ValidationObject obj) {
  index_.insert(obj.x);
  objects_.push_back(std::move(obj));
}

void ValidationSet::truncate_to_newest(std::size_t count) {
  if (count >= objects_.size()) return;
  objects_.erase(objects_.begin(),
                 objects_.begin() + static_cast<std::ptrdiff_t>(objects_.size() - count));
  index_.truncate_to_newest(count);
}

std::vector<ValidationObject> ValidationSet::take_objects() {
  std::vector<ValidationObject> out = std::move(objects_);
  objects_.clear();
  index_.reset(index_.dim());
  return out;
}

int neighbourhood_size(std::size_t v_count, int num_classes) {
  if (v_count == 0) throw std::invalid_argument("neighbourhood of an empty validation set");
  int k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(v_count))));
  if (num_classes % k == 0) ++k;
  return std::min<int>(k, static_cast<int>(v_count));
}

std::vector<NeighbourWeight> neighbourhood_memberships(const FeatureVector& x,
                                                       const ValidationSet& validation, int k,
                                                       double beta, double c) {
  if (validation.empty()) throw std::invalid_argument("empty validation set");
  if (k < 1 || static_cast<std::size_t>(k) > validation.size()) {
    throw std::invalid_argument("neighbourhood size out of range");
  }
  const auto neighbours = validation.knn(x, k);
  // K_d = distance of the K-th neighbour in (distance, arrival) order;
  // members are the strictly nearer ones.
  const double kd2 = neighbours.back().dist2;
  std::vector<NeighbourWeight> out;
  out.reserve(neighbours.size());
  for (const auto& nb : neighbours) {
    if (nb.dist2 < kd2) {
      out.push_back(NeighbourWeight{nb.id, c * std::exp(-beta * nb.dist2)});
    }
  }
  return out;
}

LocalConfusion soft_confusion_matrix(const ValidationSet& validation,
                                     const std::vector<NeighbourWeight>& neighbourhood,
                                     int num_classes) {
  LocalConfusion out;
  out.num_classes = num_classes;
  out.eps.assign(static_cast<std::size_t>(num_classes) * num_classes, 0.0);
  out.row_flagged.assign(num_classes, 0);

  std::vector<double> row_mass(num_classes, 0.0);
  for (const auto& nw : neighbourhood) {
    const ValidationObject& obj = validation[nw.index];
    const int row = obj.label - 1;
    row_mass[row] += nw.weight;
    for (int i = 0; i < num_classes; ++i) {
      out.eps[static_cast<std::size_t>(row) * num_classes + i] +=
          obj.decision_memberships[i] * nw.weight;
    }
  }
  for (int j = 0; j < num_classes; ++j) {
    if (row_mass[j] > 0.0) {
      for (int i = 0; i < num_classes; ++i) {
        out.eps[static_cast<std::size_t>(j) * num_classes + i] /= row_mass[j];
      }
    } else {
      out.row_flagged[j] = 1;
      for (int i = 0; i < num_classes; ++i) {
        out.eps[static_cast<std::size_t>(j) * num_classes + i] = 0.0;
      }
    }
  }
  return out;
}

ScmClassifier::ScmClassifier(std::unique_ptr<BaseClassifier> base, ValidationSet validation,
                             ScmOptions options, bool degraded)
    : base_(std::move(base)),
      validation_(std::move(validation)),
      options_(options),
      degraded_(degraded) {
  if (!base_ || !base_->trained()) throw std::invalid_argument("scm needs a trained base");
}

SupportVector ScmClassifier::decision_probabilities(const FeatureVector& x) const {
  return rrc_probabilities(base_->supports(x));
}

SupportVector ScmClassifier::correct_supports(const FeatureVector& x) const {
  return correct_from_decision_probs(x, decision_probabilities(x));
}

SupportVector ScmClassifier::correct_from_decision_probs(
    const FeatureVector& x, const SupportVector& decision_probs) const {
  const int m = base_->num_classes();
  if (validation_.empty()) return decision_probs;

  const int k = neighbourhood_size(validation_.size(), m);
  const auto hood = neighbourhood_memberships(x, validation_, k, options_.beta, options_.c);
  const LocalConfusion conf = soft_confusion_matrix(validation_, hood, m);

  // P(j|x) = sum_i P(i|x) * eps(j,i)/colsum(i); a zero column contributes as
  // the identity (trust the base decision where there is no local evidence).
  std::vector<double> out(m, 0.0);
  for (int i = 0; i < m; ++i) {
    double col_sum = 0.0;
    for (int j = 0; j < m; ++j) col_sum += conf.at(j, i);
    if (col_sum > 0.0) {
      for (int j = 0; j < m; ++j) out[j] += decision_probs[i] * conf.at(j, i) / col_sum;
    } else {
      out[i] += decision_probs[i];
    }
  }
  double total = std::accumulate(out.begin(), out.end(), 0.0);
  if (total <= 0.0) return decision_probs;
  for (double& v : out) v /= total;
  return out;
}

int ScmClassifier::predict(const FeatureVector& x) const {
  return argmax_with_tie_break(correct_supports(x));
}

void ScmClassifier::append_validation(const LabeledInstance& inst) {
  append_validation(inst, decision_probabilities(inst.x));
}

void ScmClassifier::append_validation(const LabeledInstance& inst, SupportVector memberships) {
  ValidationObject obj;
  obj.x = inst.x;
  obj.label = inst.label;
  obj.t = inst.t;
  obj.decision_memberships = std::move(memberships);
  validation_.append(std::move(obj));
}

void ScmClassifier::append_validation(ValidationObject obj) {
  validation_.append(std::move(obj));
}

void ScmClassifier::truncate_validation_to_newest(std::size_t count) {
  validation_.truncate_to_newest(count);
}

std::vector<ValidationObject> ScmClassifier::take_validation() {
  return validation_.take_objects();
}

namespace {

// Stratified fold assignment: per class, shuffle member positions and deal
// them round-robin. Deterministic for a fixed seed.
std::vector<int> fold_assignment(const Dataset& data, int folds, std::uint64_t seed) {
  std::vector<int> assignment(data.size(), 0);
  std::mt19937_64 rng(seed);
  for (int cls = 1; cls <= data.M; ++cls) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.instances[i].label == cls) members.push_back(i);
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t pos = 0; pos < members.size(); ++pos) {
      assignment[members[pos]] = static_cast<int>(pos % folds);
    }
  }
  return assignment;
}

}  // namespace

ScmClassifier train_scm(const Dataset& learning_set, const BaseFactory& factory,
                        const ScmOptions& options) {
  if (learning_set.empty()) throw std::invalid_argument("training set is empty");
  const int d = learning_set.d;
  const int m = learning_set.M;

  std::vector<SupportVector> raw_supports(learning_set.size());
  bool degraded = false;

  if (learning_set.size() < static_cast<std::size_t>(options.folds)) {
    // too small to split: in-sample memberships from the full-set model
    degraded = true;
    auto base = factory(d, m);
    base->fit(learning_set);
    for (std::size_t i = 0; i < learning_set.size(); ++i) {
      raw_supports[i] = base->supports(learning_set.instances[i].x);
    }
  } else {
    const auto folds = fold_assignment(learning_set, options.folds, options.fold_seed);
    for (int k = 0; k < options.folds; ++k) {
      Dataset train_part;
      train_part.d = d;
      train_part.M = m;
      std::vector<std::size_t> held_out;
      for (std::size_t i = 0; i < learning_set.size(); ++i) {
        if (folds[i] == k) {
          held_out.push_back(i);
        } else {
          train_part.instances.push_back(learning_set.instances[i]);
        }
      }
      if (held_out.empty()) continue;
      auto fold_base = factory(d, m);
      fold_base->fit(train_part);
      for (std::size_t i : held_out) {
        raw_supports[i] = fold_base->supports(learning_set.instances[i].x);
      }
    }
  }

  std::vector<SupportVector> memberships;
  rrc_probabilities_batch(raw_supports, memberships, options.num_threads);

  std::vector<ValidationObject> objects(learning_set.size());
  for (std::size_t i = 0; i < learning_set.size(); ++i) {
    const auto& inst = learning_set.instances[i];
    objects[i] = ValidationObject{inst.x, inst.label, std::move(memberships[i]), inst.t};
  }
  ValidationSet validation(d);
  validation.assign(std::move(objects), d);

  auto final_base = factory(d, m);
  final_base->fit(learning_set);
  return ScmClassifier(std::move(final_base), std::move(validation), options, degraded);
}

}  // namespace scmstream
