#pragma once

#include <cstdint>
#include <vector>

#include "guessvi/model.hpp"

namespace guessvi {

/// Chain of n probabilistic states. State i moves to i+1 with probability p
/// and falls back to state 0 otherwise; state n is the target (weight 1).
/// Every transient state has value 1 but plain VI needs roughly p^-n sweeps.
Model gen_slow_mc(std::size_t n, double p);

/// n decision/probabilistic pairs d_1 p_1 ... d_n p_n followed by a coin
/// state, a sink and the target. d_i either advances to p_i or gambles on
/// the coin; p_i advances to d_{i+1} (p_n to the target) or restarts at d_1,
/// each with probability 1/2. The coin reaches the target or the sink with
/// probability 1/2.
///
/// Layout: d_i = 2(i-1), p_i = 2(i-1)+1, coin = 2n, sink = 2n+1,
/// target = 2n+2.
Model gen_slow_mdp(std::size_t n);

/// Strategy of gen_slow_mdp(n) that always advances along the chain.
Strategy slow_mdp_advance_strategy(std::size_t n);

struct RandomModelParams {
  std::size_t n = 10;
  /// Maximum number of successors of a non-target state.
  std::size_t branch = 3;
  /// Candidate relative weights; a row's probabilities are drawn from this
  /// grid and normalized.
  std::vector<double> prob_grid{1.0, 2.0, 3.0, 4.0};
  std::uint64_t seed = 1;
  ModelKind kind = ModelKind::Mc;
  ObjectiveKind objective = ObjectiveKind::Reach;
  std::size_t num_targets = 2;
  /// Fraction of non-target states that are decision states (MDP only).
  double decision_fraction = 0.5;
};

/// Random model in which every state can reach the target set. Deterministic
/// in params.seed.
Model gen_random(const RandomModelParams& params);

}  // namespace guessvi
