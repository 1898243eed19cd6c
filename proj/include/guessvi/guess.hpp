#pragma once

#include <cstdint>
#include <stdexcept>
#include <variant>

#include "guessvi/bounds.hpp"
#include "guessvi/graph.hpp"
#include "guessvi/model.hpp"
#include "guessvi/vi.hpp"

namespace guessvi {

class GuessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GuessConfig {
  double epsilon = 1e-3;
  /// Propagation rounds of pick_state.
  std::uint32_t k1 = 10;
  /// Sweep limit of one verification attempt.
  std::uint32_t k2 = 100;
  /// Smallest multiplicative slack used in place of p_min^|S|.
  double slack_floor = 1e-300;
  std::uint32_t max_depth = 64;
  /// Start every verification from the initial vectors of the reduced model
  /// instead of the (shifted) bounds of the caller.
  bool conservative_bounds = false;

  /// Throws std::invalid_argument when a field is out of range.
  void check() const;
};

/// Multiplicative slack standing in for p_min^|S|: max(p_min^|S|, floor),
/// computed in log space. When |S| * |log p_min| exceeds 700 the literal
/// value is meaningless in double precision and 1e-9 is used instead.
double guess_slack(const Model& model, double slack_floor);

enum class LemmaVerdict { Above, Below, Tight };

struct LemmaCheck {
  LemmaVerdict verdict;
  /// One Bellman update of the original model at s from f.
  double gamma_prime;
};

/// Compares one Bellman update at s against the guess. Tight when the two
/// differ by at most `tolerance`, otherwise Above or Below by sign. With f
/// a lower bound of the reduced model's value, Above certifies
/// val(s) > gamma; with an upper bound, Below certifies val(s) < gamma.
LemmaCheck verify_lemma_check(const Model& model, StateId s, double gamma,
                              const ValueVector& f, double tolerance = 0.0);

/// Shared accounting for one solve: updates spent and resource limits.
struct GuessContext {
  Limits limits;
  std::uint64_t updates = 0;
  std::uint64_t sweeps = 0;
  std::uint32_t deepest = 0;

  bool exhausted() const { return limits.exhausted(updates); }
};

// Chain algorithms ----------------------------------------------------------

/// Binary search on the value of each state of `guesses` in turn, solving
/// the reduced chains recursively; interval iteration once no guesses are
/// left. Throws GuessError when the recursion gets deeper than max_depth.
SolveReport solve_with_guessing_set(const Model& mc, double epsilon,
                                    const GuessSet& guesses,
                                    const GuessConfig& cfg = {},
                                    const Limits& limits = {});

/// mark_to_guess followed by solve_with_guessing_set.
SolveReport solve_mc(const Model& mc, double epsilon, const GuessConfig& cfg = {},
                     const Limits& limits = {});

// Practical algorithms ------------------------------------------------------

/// Width-weighted random-walk score; returns the non-target state with the
/// highest accumulated weight after k1 rounds (smallest index on ties).
/// When all weight has drained into targets, the widest non-target state.
/// Throws GuessError if every non-target interval is empty.
StateId pick_state(const Model& model, const Bounds& b, std::uint32_t k1);

struct BoundsFound {
  Bounds bounds;
  std::uint32_t iterations;
};
struct LowerCertified {
  ValueVector lower;
  std::uint32_t iterations;
};
struct UpperCertified {
  ValueVector upper;
  std::uint32_t iterations;
};
struct Inconclusive {
  Bounds bounds;
};
using VerifyOutcome = std::variant<BoundsFound, LowerCertified, UpperCertified, Inconclusive>;

/// Runs up to `iterations` clamped interval sweeps on model[s = gamma]
/// starting from b, which must bracket the reduced value. After each sweep:
/// gamma <= update(lower) at s gives LowerCertified, update(upper) <= gamma
/// gives UpperCertified, and a width of at most eps*slack/(2(1+slack))
/// gives BoundsFound widened by eps/(2(1+slack)), a bracket of the value of
/// `model` itself.
VerifyOutcome verify_guess(const Model& model, const Bounds& b, StateId s,
                           double gamma, double epsilon, std::uint32_t iterations,
                           double slack, GuessContext& ctx);

/// Guess-and-verify loop on an MDP (or chain) with a unique Bellman fixpoint.
/// b must bracket the value, typically the initial vectors.
SolveReport pick_verify(const Model& model, const Bounds& b, const GuessConfig& cfg,
                        const Limits& limits = {});

}  // namespace guessvi
