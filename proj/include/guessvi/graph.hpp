#pragma once

#include <cstdint>
#include <vector>

#include "guessvi/bounds.hpp"
#include "guessvi/model.hpp"

namespace guessvi {

/// Backward-BFS distance to the targets. States that cannot reach a target
/// share level 0 with the targets.
struct Levels {
  std::vector<std::uint32_t> level_of;
  /// Highest level index; levels run 0..k.
  std::size_t k = 0;
  /// Targets plus states that cannot reach them, ascending.
  std::vector<StateId> zero_class;
};

Levels compute_levels(const Model& model);

/// States with no path to a target in the model graph, ascending.
std::vector<StateId> qualitative_zero(const Model& model);

/// Reach-MDP states from which some strategy reaches a target of weight
/// `weight` with probability one. Targets of that weight are included.
std::vector<std::uint8_t> almost_sure_reach(const Model& model, double weight);

/// Maximal end components that contain at least one non-target state, each
/// sorted ascending; the list is ordered by smallest member.
std::vector<std::vector<StateId>> maximal_end_components(const Model& model);

struct CollapseResult {
  Model model;
  /// Original state -> state of the collapsed model with the same value.
  std::vector<StateId> image;
  /// Fresh targets appended to the collapsed model.
  StateId top = kNoState;
  StateId bottom = kNoState;
};

/// Rewrites a Reach model so the Bellman operator has a unique fixpoint.
/// Two fresh targets are appended: top (weight w_max) and bottom (weight 0).
/// States that cannot reach a positive-weight target fold into bottom,
/// states that reach a w_max target almost surely under some strategy fold
/// into top, and every remaining end component becomes one decision state
/// whose successors are the exits of the component. Original targets stay
/// where they are.
CollapseResult collapse_mecs(const Model& model);

/// Ordered partition S_0, ..., S_K.
struct MdpPartition {
  std::vector<std::uint32_t> class_of;
  /// Index of the last class; there are K + 1 classes.
  std::size_t K = 0;
};

/// S_0 holds the targets and the states that cannot reach them; a state
/// lands in S_k when its nearest successor class is S_{k-1}. Every
/// probabilistic state of S_k thus has a positive-probability edge into an
/// earlier class.
MdpPartition mdp_partition(const Model& model);

/// The stricter partition in which a decision state is only placed once all
/// of its successors are, at the highest successor level; probabilistic
/// states go one above their first placed successor. Throws ModelError
/// (BadState) naming a state that never gets placed.
MdpPartition universal_level_partition(const Model& model);

/// Reach: targets pinned to their weight, others (0, w_max).
/// Ssp: targets pinned, others (w_min, w_max (k+1) / p_min^k); the upper
/// value saturates at 1e300. Throws ModelError if an SSP state cannot reach
/// a target.
Bounds initial_vectors(const Model& model, const Levels& levels);

/// States to turn into targets, outermost cut first.
struct GuessSet {
  std::vector<StateId> states;
};

/// Repeatedly cuts the chain at its thinnest level between k/3 and 2k/3 until
/// at most sqrt(|S|) levels remain.
GuessSet mark_to_guess(const Model& mc);

}  // namespace guessvi
