#pragma once

// Shared fixtures for the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "guessvi/bounds.hpp"
#include "guessvi/generators.hpp"
#include "guessvi/model.hpp"

namespace guessvi::testing {

/// Comparison slack for certified brackets against the extended-precision
/// oracle.
inline double bracket_tol(double v) { return 1e-12 * std::max(1.0, std::abs(v)); }

inline bool brackets(const Bounds& b, const ValueVector& exact) {
  for (std::size_t s = 0; s < exact.size(); ++s) {
    if (b.lower[s] > exact[s] + bracket_tol(exact[s])) return false;
    if (b.upper[s] < exact[s] - bracket_tol(exact[s])) return false;
  }
  return true;
}

/// Draws generator parameters from a seed: size in [n_lo, n_hi], branch in
/// [1, 4], 1 to 3 targets.
inline RandomModelParams random_params(std::uint64_t seed, std::size_t n_lo, std::size_t n_hi,
                                       ModelKind kind, ObjectiveKind objective) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 17);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
  };
  RandomModelParams p;
  p.n = pick(n_lo, n_hi);
  p.branch = pick(1, 4);
  p.num_targets = pick(1, std::min<std::size_t>(3, p.n - 1));
  p.seed = seed;
  p.kind = kind;
  p.objective = objective;
  return p;
}

inline Model chain(std::size_t k, double p) {
  // States 0..k-1 transient, k the target; i -> i+1 with p, i -> 0 otherwise.
  return gen_slow_mc(k, p);
}

}  // namespace guessvi::testing
