#ifndef SCMSTREAM_RRC_HPP
#define SCMSTREAM_RRC_HPP

#include <vector>

#include "scmstream/core.hpp"

namespace scmstream {

// Randomized reference classifier: a surrogate whose per-class score for a
// query is a Beta random variable with mean equal to the base classifier's
// support. The class-assignment probabilities P(decision = i) are the win
// probabilities of those Beta variables.

struct BetaParams {
  double a;
  double b;
};

/// Supports below this value (or above 1 minus it) are clipped before the
/// Beta parameterization so every variable has a proper distribution.
constexpr double kSupportClip = 1e-9;

/// Total quadrature resolution over [0,1] (grid spacing 1/512).
constexpr int kQuadratureNodes = 513;

/// Per-class Beta parameters: a_i = M*g_i, b_i = M*(1-g_i) after clipping,
/// so E[Beta(a_i,b_i)] equals the (clipped) support and a_i + b_i = M.
std::vector<BetaParams> beta_params(const std::vector<double>& supports);

/// Win probabilities P(Delta_i > Delta_k for all k != i), renormalized to sum
/// exactly 1. Composite Simpson over the interior grid plus exact
/// incomplete-beta tail corrections on the two boundary cells; the tails
/// carry the mass of near-degenerate Betas that no fixed grid can sample.
std::vector<double> rrc_probabilities(const std::vector<double>& supports);

/// Serial reference for the batch kernel below; out[i] = rrc_probabilities(in[i]).
void rrc_probabilities_batch_serial(const std::vector<SupportVector>& in,
                                    std::vector<SupportVector>& out);

/// OpenMP batch kernel. Each slot is computed independently, so the result is
/// bit-identical to the serial reference for any thread count.
void rrc_probabilities_batch(const std::vector<SupportVector>& in,
                             std::vector<SupportVector>& out, int num_threads);

}  // namespace scmstream

#endif
