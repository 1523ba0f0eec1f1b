#include "scmstream/wrapper.hpp"

#include <cassert>
#include <stdexcept>

namespace scmstream {

Strategy strategy_from_string(const std::string& tag) {
  if (tag == "B") return Strategy::B;
  if (tag == "nB") return Strategy::nB;
  if (tag == "S") return Strategy::S;
  if (tag == "nS") return Strategy::nS;
  throw ConfigError("unknown strategy tag: " + tag);
}

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::B: return "B";
    case Strategy::nB: return "nB";
    case Strategy::S: return "S";
    case Strategy::nS: return "nS";
  }
  return "?";
}

StreamClassifier::StreamClassifier(Strategy strategy, BaseFactory factory, int d, int M,
                                   StreamClassifierOptions options)
    : strategy_(strategy),
      factory_(std::move(factory)),
      d_(d),
      M_(M),
      options_(options),
      detector_(options.adwin_delta) {
  if (d <= 0 || M <= 0) throw std::invalid_argument("stream classifier needs d >= 1, M >= 1");
  if (options_.initial_chunk_size < 1) throw std::invalid_argument("initial chunk must be >= 1");
  chunk_label_counts_.assign(M_, 0);
}

int StreamClassifier::predict(const FeatureVector& x) const {
  if (!trained_) {
    // a priori probabilities from the incomplete initial chunk
    std::vector<double> priors(M_);
    const double denom = static_cast<double>(chunk_.size() + M_);
    for (int c = 0; c < M_; ++c) priors[c] = (chunk_label_counts_[c] + 1.0) / denom;
    return argmax_with_tie_break(priors);
  }
  if (scm_) return scm_->predict(x);
  return base_->predict(x);
}

ObserveResult StreamClassifier::observe(const LabeledInstance& inst) {
  if (static_cast<int>(inst.x.size()) != d_) {
    throw std::invalid_argument("instance dimensionality mismatch");
  }
  ObserveResult result;
  if (!trained_) {
    chunk_.push_back(inst);
    ++chunk_label_counts_[inst.label - 1];
    if (chunk_.size() >= options_.initial_chunk_size) {
      train_from_chunk();
      result.trained = true;
    }
    return result;
  }

  switch (strategy_) {
    case Strategy::S:
      result.drift = update_validation(inst);
      assert(scm_->validation().size() == detector_.window_size());
      break;
    case Strategy::nS: {
      const bool cut = monitor_and_buffer(inst, scm_->predict(inst.x));
      if (cut) {
        ScmOptions scm_opts = options_.scm;
        scm_ = train_scm(buffer_dataset(), factory_, scm_opts);
        result.drift = true;
      }
      assert(buffer_.size() == detector_.window_size());
      break;
    }
    case Strategy::B:
    case Strategy::nB: {
      const bool cut = monitor_and_buffer(inst, base_->predict(inst.x));
      if (cut) {
        base_ = factory_(d_, M_);
        base_->fit(buffer_dataset());
        result.drift = true;
      } else if (strategy_ == Strategy::B) {
        base_->update(inst);
      }
      assert(buffer_.size() == detector_.window_size());
      break;
    }
  }
  return result;
}

void StreamClassifier::train_from_chunk() {
  Dataset initial;
  initial.d = d_;
  initial.M = M_;
  initial.instances = std::move(chunk_);
  chunk_.clear();
  std::fill(chunk_label_counts_.begin(), chunk_label_counts_.end(), 0);

  if (strategy_ == Strategy::S || strategy_ == Strategy::nS) {
    scm_ = train_scm(initial, factory_, options_.scm);
    trained_ = true;
    if (strategy_ == Strategy::S) {
      // replay the cross-validation set through the ADWIN-controlled update;
      // cuts during replay are internal bookkeeping, not reported drift
      auto replay = scm_->take_validation();
      for (auto& obj : replay) replay_validation(std::move(obj));
      assert(scm_->validation().size() == detector_.window_size());
    }
  } else {
    base_ = factory_(d_, M_);
    base_->fit(initial);
    trained_ = true;
  }
}

// ADWIN-controlled validation update: predict, feed the correctness bit,
// truncate the surviving prefix on a cut, then append the new object. The
// appended object's memberships are the decision probabilities the
// prediction was derived from (same RRC of the same base supports).
bool StreamClassifier::update_validation(const LabeledInstance& inst) {
  if (!trained_ || !scm_) throw std::logic_error("validation update before training");
  SupportVector decision_probs = scm_->decision_probabilities(inst.x);
  const int predicted =
      argmax_with_tie_break(scm_->correct_from_decision_probs(inst.x, decision_probs));
  const bool cut = detector_.add_element(predicted == inst.label ? 1.0 : 0.0);
  if (cut) {
    // the detector window already counts the bit of the in-flight instance
    scm_->truncate_validation_to_newest(detector_.window_size() - 1);
  }
  scm_->append_validation(inst, std::move(decision_probs));
  return cut;
}

bool StreamClassifier::replay_validation(ValidationObject obj) {
  const int predicted = scm_->predict(obj.x);
  const bool cut = detector_.add_element(predicted == obj.label ? 1.0 : 0.0);
  if (cut) {
    scm_->truncate_validation_to_newest(detector_.window_size() - 1);
  }
  scm_->append_validation(std::move(obj));
  return cut;
}

// Shared by B/nB/nS: feed ADWIN with the correctness bit, keep the retrain
// buffer aligned with the detector window, append the instance.
bool StreamClassifier::monitor_and_buffer(const LabeledInstance& inst, int predicted) {
  const bool cut = detector_.add_element(predicted == inst.label ? 1.0 : 0.0);
  if (cut) {
    const std::size_t keep = detector_.window_size() - 1;
    buffer_.erase(buffer_.begin(),
                  buffer_.begin() + static_cast<std::ptrdiff_t>(buffer_.size() - keep));
  }
  buffer_.push_back(inst);
  return cut;
}

Dataset StreamClassifier::buffer_dataset() const {
  Dataset out;
  out.d = d_;
  out.M = M_;
  out.instances = buffer_;
  return out;
}

}  // namespace scmstream
