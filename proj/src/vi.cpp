#include "guessvi/vi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace guessvi {

double bellman_update_state(const Model& model, const ValueVector& v, StateId s) {
  if (model.is_target(s)) return v[s];
  auto succ = model.successors(s);
  if (!model.is_decision(s)) {
    double acc = 0.0;
    for (const Transition& t : succ) acc += t.probability * v[t.target];
    return model.objective().kind() == ObjectiveKind::Ssp ? model.weight(s) + acc : acc;
  }
  double best = v[succ[0].target];
  if (model.objective().kind() == ObjectiveKind::Reach) {
    for (const Transition& t : succ) best = std::max(best, v[t.target]);
    return best;
  }
  for (const Transition& t : succ) best = std::min(best, v[t.target]);
  return model.weight(s) + best;
}

ValueVector bellman_sweep(const Model& model, const ValueVector& v,
                          std::uint64_t* updates) {
  ValueVector next(v.size());
  std::uint64_t count = 0;
  for (StateId s = 0; s < model.num_states(); ++s) {
    if (model.is_target(s)) {
      next[s] = v[s];
    } else {
      next[s] = bellman_update_state(model, v, s);
      ++count;
    }
  }
  if (updates) *updates += count;
  return next;
}

bool Limits::exhausted(std::uint64_t updates) const {
  if (updates >= max_updates) return true;
  return deadline && std::chrono::steady_clock::now() >= *deadline;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SolveReport value_iteration(const Model& model, const ValueVector& start,
                            double epsilon, const Limits& limits) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  rep.algorithm = "vi";
  ValueVector v = start;
  const std::size_t n = model.num_states();
  const std::size_t transient = n - model.num_targets();
  for (;;) {
    if (transient == 0) {
      rep.converged = true;
      break;
    }
    if (limits.exhausted(rep.bellman_updates)) break;
    ValueVector next = bellman_sweep(model, v, &rep.bellman_updates);
    ++rep.sweeps;
    double delta = 0.0;
    for (std::size_t s = 0; s < n; ++s) delta = std::max(delta, std::abs(next[s] - v[s]));
    v = std::move(next);
    if (delta <= epsilon) {
      rep.converged = true;
      break;
    }
  }
  rep.bounds.lower = v;
  rep.bounds.upper = std::move(v);
  rep.wall_time_s = seconds_since(t0);
  return rep;
}

SolveReport interval_iteration(const Model& model, Bounds b, double epsilon,
                               const Limits& limits, const IntervalOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!well_ordered(b)) throw std::invalid_argument("interval_iteration: lower > upper");
  SolveReport rep;
  rep.algorithm = "ivi";
  rep.certified = true;
  const std::size_t n = model.num_states();
  const std::size_t transient = n - model.num_targets();

  for (;;) {
    if (width(b) <= epsilon) {
      rep.converged = true;
      break;
    }
    if (transient == 0 || limits.exhausted(rep.bellman_updates)) break;

    bool changed = false;
    if (options.gauss_seidel) {
      for (StateId s = 0; s < n; ++s) {
        if (model.is_target(s)) continue;
        double lo = std::max(b.lower[s], bellman_update_state(model, b.lower, s));
        double hi = std::min(b.upper[s], bellman_update_state(model, b.upper, s));
        changed |= lo != b.lower[s] || hi != b.upper[s];
        b.lower[s] = lo;
        b.upper[s] = hi;
      }
    } else {
      ValueVector lo = bellman_sweep(model, b.lower);
      ValueVector hi = bellman_sweep(model, b.upper);
      for (std::size_t s = 0; s < n; ++s) {
        lo[s] = std::max(lo[s], b.lower[s]);
        hi[s] = std::min(hi[s], b.upper[s]);
        changed |= lo[s] != b.lower[s] || hi[s] != b.upper[s];
      }
      b.lower = std::move(lo);
      b.upper = std::move(hi);
    }
    rep.bellman_updates += 2 * transient;
    ++rep.sweeps;
    if (options.observer) options.observer(rep.sweeps, b);
    if (!changed && options.stop_on_stall) break;
  }
  rep.bounds = std::move(b);
  rep.wall_time_s = seconds_since(t0);
  return rep;
}

}  // namespace guessvi
