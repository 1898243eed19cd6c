#pragma once

#include <optional>

#include "guessvi/bounds.hpp"
#include "guessvi/graph.hpp"
#include "guessvi/model.hpp"

namespace guessvi {

/// Reference values from direct linear solves in extended precision.
struct ExactSolution {
  ValueVector values;
  /// Set for MDP inputs: one strategy achieving `values` everywhere.
  std::optional<Strategy> strategy;
  /// Largest absolute residual of the solved linear system(s).
  double residual = 0.0;
};

/// Largest model the dense solver accepts.
inline constexpr std::size_t kOracleMaxStates = 10000;
/// Largest number of positional strategies exact_mdp_value enumerates.
inline constexpr std::uint64_t kOracleMaxStrategies = 1000000;

/// Solves the chain's linear system. Reach: states that cannot reach a
/// target get 0. Ssp: throws std::domain_error if some state cannot reach a
/// target. Decision states of an MDP input follow their first successor.
ExactSolution exact_mc_value(const Model& mc);

/// Best positional strategy by enumeration; ties keep the first strategy
/// in enumeration order. Throws std::length_error over the budget.
ExactSolution exact_mdp_value(const Model& mdp);

/// Levels of the chain induced by the oracle's optimal strategy.
Levels optimal_levels(const Model& mdp);

}  // namespace guessvi
