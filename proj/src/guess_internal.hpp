#pragma once

#include <algorithm>

#include "guessvi/guess.hpp"

namespace guessvi::detail {

inline std::size_t transient_count(const Model& m) { return m.num_states() - m.num_targets(); }

/// Limits for a nested solver given what the context has already spent.
inline Limits remaining(const GuessContext& ctx) {
  Limits l = ctx.limits;
  l.max_updates = ctx.limits.max_updates > ctx.updates ? ctx.limits.max_updates - ctx.updates : 0;
  return l;
}

/// One clamped Jacobi sweep of both sides. Returns whether anything moved.
inline bool clamped_sweep(const Model& m, Bounds& b, GuessContext& ctx) {
  ValueVector lo = bellman_sweep(m, b.lower);
  ValueVector hi = bellman_sweep(m, b.upper);
  bool moved = false;
  for (std::size_t s = 0; s < lo.size(); ++s) {
    lo[s] = std::max(lo[s], b.lower[s]);
    hi[s] = std::min(hi[s], b.upper[s]);
    moved |= lo[s] != b.lower[s] || hi[s] != b.upper[s];
  }
  b.lower = std::move(lo);
  b.upper = std::move(hi);
  ctx.updates += 2 * transient_count(m);
  ++ctx.sweeps;
  return moved;
}

/// `times` clamped sweeps of a single side.
inline void advance_side(const Model& m, ValueVector& v, bool is_upper, std::uint32_t times,
                         GuessContext& ctx) {
  for (std::uint32_t i = 0; i < times && !ctx.exhausted(); ++i) {
    ValueVector next = bellman_sweep(m, v);
    for (std::size_t s = 0; s < v.size(); ++s)
      v[s] = is_upper ? std::min(v[s], next[s]) : std::max(v[s], next[s]);
    ctx.updates += transient_count(m);
    ++ctx.sweeps;
  }
}

inline void intersect(Bounds& b, const ValueVector& lower, const ValueVector& upper) {
  for (std::size_t s = 0; s < b.lower.size(); ++s) {
    b.lower[s] = std::max(b.lower[s], lower[s]);
    b.upper[s] = std::min(b.upper[s], upper[s]);
  }
}

inline Bounds initial_bounds(const Model& m) { return initial_vectors(m, compute_levels(m)); }

}  // namespace guessvi::detail
