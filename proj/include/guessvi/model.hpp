#pragma once

// Explicit-state Markov chains and MDPs with weighted-reachability or
// stochastic-shortest-path objectives.
//
// A model is a labelled graph: every state is either a decision state (the
// controller picks one successor) or a probabilistic state (the successor is
// drawn from a distribution whose support is exactly the successor list).
// Targets are absorbing and carry a weight. Models are immutable once built;
// every transformation returns a fresh model.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace guessvi {

using StateId = std::uint32_t;
inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();

enum class StateKind : std::uint8_t { Decision, Probabilistic };
enum class ModelKind : std::uint8_t { Mc, Mdp };
enum class ObjectiveKind : std::uint8_t { Reach, Ssp };
enum class Direction : std::uint8_t { Maximize, Minimize };

/// Tolerance on probability row sums.
inline constexpr double kRowSumTolerance = 1e-9;

struct Transition {
  StateId target;
  /// Meaningful for probabilistic states only; 0 on decision edges.
  double probability;
};

enum class ModelErrc {
  EmptySuccessors,
  RowSum,
  NonPositiveProbability,
  NonAbsorbingTarget,
  NonPositiveCost,
  BranchingDecisionInMc,
  NegativeWeight,
  BadState,
  DuplicateEdge,
  ProbabilityOnDecisionEdge,
  AlreadyTarget,
  InvalidStrategy,
};

const char* to_string(ModelErrc code);

class ModelError : public std::runtime_error {
 public:
  ModelError(ModelErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ModelErrc code() const noexcept { return code_; }

 private:
  ModelErrc code_;
};

/// Target set plus weights. For Reach, weights are defined on targets only
/// (non-target entries are 0 and never read); for SSP every state carries a
/// strictly positive cost and a target's cost is its terminal weight.
class Objective {
 public:
  Objective() = default;
  Objective(ObjectiveKind kind, std::vector<std::uint8_t> target_mask,
            std::vector<double> weights);

  ObjectiveKind kind() const noexcept { return kind_; }
  Direction direction() const noexcept {
    return kind_ == ObjectiveKind::Reach ? Direction::Maximize
                                         : Direction::Minimize;
  }
  bool is_target(StateId s) const { return target_mask_[s] != 0; }
  double weight(StateId s) const { return weights_[s]; }
  const std::vector<StateId>& targets() const noexcept { return targets_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const std::uint8_t> target_mask() const noexcept {
    return target_mask_;
  }

  // Reach: extremes over the targets (0 when there are none).
  // Ssp: extremes over all states; the SSP upper bound needs the largest
  // per-step cost, not just the largest terminal weight.
  double w_min() const noexcept { return w_min_; }
  double w_max() const noexcept { return w_max_; }

 private:
  friend class Model;
  void refresh();

  ObjectiveKind kind_ = ObjectiveKind::Reach;
  std::vector<std::uint8_t> target_mask_;
  std::vector<double> weights_;
  std::vector<StateId> targets_;
  double w_min_ = 0.0;
  double w_max_ = 0.0;
};

/// Positional strategy: choice[s] is the successor picked at decision state s
/// and kNoState elsewhere.
struct Strategy {
  std::vector<StateId> choice;
};

class Model {
 public:
  Model() = default;

  ModelKind kind() const noexcept { return kind_; }
  std::size_t num_states() const noexcept { return state_kind_.size(); }
  std::size_t num_transitions() const noexcept { return transitions_.size(); }
  StateKind state_kind(StateId s) const { return state_kind_[s]; }
  bool is_decision(StateId s) const {
    return state_kind_[s] == StateKind::Decision;
  }
  std::span<const Transition> successors(StateId s) const {
    return {transitions_.data() + row_offsets_[s],
            transitions_.data() + row_offsets_[s + 1]};
  }
  const Objective& objective() const noexcept { return objective_; }
  bool is_target(StateId s) const { return objective_.is_target(s); }
  double weight(StateId s) const { return objective_.weight(s); }
  std::size_t num_targets() const noexcept {
    return objective_.targets().size();
  }

  friend bool operator==(const Model& a, const Model& b);

 private:
  friend class ModelBuilder;
  friend Model reduce_many(const Model&, std::span<const StateId>, double);
  friend Model induced_mc(const Model&, const Strategy&);

  ModelKind kind_ = ModelKind::Mc;
  std::vector<StateKind> state_kind_;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<Transition> transitions_;
  Objective objective_;
};

/// Incremental construction. build() validates; build_unchecked() does not.
class ModelBuilder {
 public:
  ModelBuilder(ModelKind kind, ObjectiveKind objective, std::size_t num_states);

  ModelBuilder& set_kind(StateId s, StateKind kind);
  ModelBuilder& add_edge(StateId from, StateId to, double probability = 0.0);
  ModelBuilder& set_target(StateId s, double weight);
  ModelBuilder& set_cost(StateId s, double cost);

  std::size_t num_states() const noexcept { return kinds_.size(); }

  Model build() const;
  Model build_unchecked() const;

 private:
  void check_state(StateId s) const;

  ModelKind kind_;
  ObjectiveKind objective_;
  std::vector<StateKind> kinds_;
  std::vector<std::vector<Transition>> rows_;
  std::vector<std::uint8_t> target_mask_;
  std::vector<double> weights_;
};

/// Throws ModelError describing the first violated invariant.
void validate(const Model& model);

/// Smallest listed transition probability; 1 for a model without
/// probabilistic states.
double p_min(const Model& model);

/// M[s = gamma]: s becomes an absorbing target of weight gamma.
Model reduce(const Model& model, StateId s, double gamma);

/// Applies reduce() to every listed state with the same weight in one pass.
Model reduce_many(const Model& model, std::span<const StateId> states,
                  double gamma);

/// Chain obtained by fixing the decision at every decision state.
Model induced_mc(const Model& mdp, const Strategy& strategy);

/// The unique strategy of a chain (or the first-successor strategy of an MDP).
Strategy first_choice_strategy(const Model& model);

}  // namespace guessvi
