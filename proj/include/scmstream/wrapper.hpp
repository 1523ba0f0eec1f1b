#ifndef SCMSTREAM_WRAPPER_HPP
#define SCMSTREAM_WRAPPER_HPP

#include <memory>
#include <optional>
#include <string>

#include "scmstream/adwin.hpp"
#include "scmstream/base.hpp"
#include "scmstream/core.hpp"
#include "scmstream/scm.hpp"

namespace scmstream {

/// Streaming strategies, all ADWIN-driven:
///  B  - base classifier updated incrementally every step; refit from the
///       retained window on drift.
///  nB - no incremental updates; refit from the retained window on drift.
///  S  - SCM correction with online validation-set learning.
///  nS - SCM correction, validation set frozen between drifts; the whole
///       wrapper retrains from the retained window on drift.
enum class Strategy { B, nB, S, nS };

Strategy strategy_from_string(const std::string& tag);
std::string to_string(Strategy strategy);

struct ObserveResult {
  bool trained = false;
  bool drift = false;
};

struct StreamClassifierOptions {
  std::size_t initial_chunk_size = 200;
  double adwin_delta = AdwinDetector::kDefaultDelta;
  ScmOptions scm;
};

/// One-pass stream classifier. Until the initial chunk fills, predictions
/// fall back to Laplace-smoothed class priors of the partial chunk; the
/// chunk-filling observation trains the model and, for strategy S, replays
/// the cross-validation set through the ADWIN-controlled update so detector
/// and validation set stay aligned one-to-one.
class StreamClassifier {
 public:
  StreamClassifier(Strategy strategy, BaseFactory factory, int d, int M,
                   StreamClassifierOptions options = {});

  int predict(const FeatureVector& x) const;
  ObserveResult observe(const LabeledInstance& inst);

  Strategy strategy() const { return strategy_; }
  bool trained() const { return trained_; }
  std::size_t chunk_size() const { return chunk_.size(); }
  std::size_t buffer_size() const { return buffer_.size(); }
  std::size_t adwin_window() const { return detector_.window_size(); }
  std::size_t validation_size() const { return scm_ ? scm_->validation().size() : 0; }
  const ScmClassifier* scm() const { return scm_ ? &*scm_ : nullptr; }
  const BaseClassifier* base() const { return base_ ? base_.get() : nullptr; }

 private:
  void train_from_chunk();
  bool update_validation(const LabeledInstance& inst);
  bool replay_validation(ValidationObject obj);
  bool monitor_and_buffer(const LabeledInstance& inst, int predicted);
  Dataset buffer_dataset() const;

  Strategy strategy_;
  BaseFactory factory_;
  int d_;
  int M_;
  StreamClassifierOptions options_;

  std::vector<LabeledInstance> chunk_;
  std::vector<std::int64_t> chunk_label_counts_;
  bool trained_ = false;

  std::unique_ptr<BaseClassifier> base_;  // strategies B / nB
  std::optional<ScmClassifier> scm_;      // strategies S / nS
  AdwinDetector detector_;
  std::vector<LabeledInstance> buffer_;  // aligned retrain buffer (B / nB / nS)
};

}  // namespace scmstream

#endif
