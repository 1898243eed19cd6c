#include "guessvi/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "guessvi/detail/reverse_graph.hpp"

namespace guessvi {

Levels compute_levels(const Model& model) {
  const std::size_t n = model.num_states();
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  detail::ReverseGraph rev(model);
  std::vector<std::uint32_t> dist(n, kUnset);
  std::deque<StateId> queue;
  for (StateId t : model.objective().targets()) {
    dist[t] = 0;
    queue.push_back(t);
  }
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (StateId p : rev.predecessors(s)) {
      if (dist[p] != kUnset) continue;
      dist[p] = dist[s] + 1;
      queue.push_back(p);
    }
  }

  Levels lv;
  lv.level_of.resize(n);
  for (StateId s = 0; s < n; ++s) {
    if (dist[s] == kUnset || dist[s] == 0) {
      lv.level_of[s] = 0;
      lv.zero_class.push_back(s);
    } else {
      lv.level_of[s] = dist[s];
      lv.k = std::max<std::size_t>(lv.k, dist[s]);
    }
  }
  return lv;
}

std::vector<StateId> qualitative_zero(const Model& model) {
  Levels lv = compute_levels(model);
  std::vector<StateId> out;
  for (StateId s : lv.zero_class)
    if (!model.is_target(s)) out.push_back(s);
  return out;
}

MdpPartition mdp_partition(const Model& model) {
  Levels lv = compute_levels(model);
  return {std::move(lv.level_of), lv.k};
}

MdpPartition universal_level_partition(const Model& model) {
  const std::size_t n = model.num_states();
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  detail::ReverseGraph rev(model);
  std::vector<std::uint32_t> cls(n, kUnset);
  std::vector<std::size_t> pending(n, 0);
  for (StateId s = 0; s < n; ++s) pending[s] = model.successors(s).size();

  // Buckets by class; a decision state can join the bucket being processed.
  std::vector<std::vector<StateId>> buckets(1);
  for (StateId s : compute_levels(model).zero_class) {
    cls[s] = 0;
    buckets[0].push_back(s);
  }
  for (std::size_t c = 0; c < buckets.size(); ++c) {
    for (std::size_t i = 0; i < buckets[c].size(); ++i) {
      StateId s = buckets[c][i];
      for (StateId p : rev.predecessors(s)) {
        if (cls[p] != kUnset) continue;
        if (model.is_decision(p)) {
          if (--pending[p] != 0) continue;
          std::uint32_t top = 0;
          for (const Transition& t : model.successors(p)) top = std::max(top, cls[t.target]);
          cls[p] = top;
        } else {
          cls[p] = static_cast<std::uint32_t>(c + 1);
        }
        if (buckets.size() <= cls[p]) buckets.resize(cls[p] + 1);
        buckets[cls[p]].push_back(p);
      }
    }
  }

  MdpPartition part;
  part.class_of = std::move(cls);
  for (StateId s = 0; s < n; ++s) {
    if (part.class_of[s] == kUnset)
      throw ModelError(ModelErrc::BadState,
                       "state " + std::to_string(s) + " receives no class");
    part.K = std::max<std::size_t>(part.K, part.class_of[s]);
  }
  return part;
}

Bounds initial_vectors(const Model& model, const Levels& levels) {
  const std::size_t n = model.num_states();
  const Objective& obj = model.objective();
  Bounds b;
  b.lower.assign(n, 0.0);
  b.upper.assign(n, 0.0);
  double lo = 0.0;
  double hi = obj.w_max();
  if (obj.kind() == ObjectiveKind::Ssp) {
    for (StateId s : levels.zero_class)
      if (!model.is_target(s))
        throw ModelError(ModelErrc::BadState,
                         "state " + std::to_string(s) + " cannot reach a target");
    const double k = static_cast<double>(levels.k);
    lo = obj.w_min();
    double log_hi = std::log(obj.w_max()) + std::log(k + 1.0) - k * std::log(p_min(model));
    hi = log_hi >= std::log(1e300) ? 1e300 : std::exp(log_hi);
  }
  for (StateId s = 0; s < n; ++s) {
    if (model.is_target(s)) {
      b.lower[s] = b.upper[s] = obj.weight(s);
    } else {
      b.lower[s] = lo;
      b.upper[s] = hi;
    }
  }
  return b;
}

GuessSet mark_to_guess(const Model& mc) {
  GuessSet out;
  const double root = std::sqrt(static_cast<double>(mc.num_states()));
  Model current = mc;
  for (;;) {
    Levels lv = compute_levels(current);
    const std::size_t k = lv.k;
    if (static_cast<double>(k) <= root) break;

    std::vector<std::size_t> count(k + 1, 0);
    for (StateId s = 0; s < current.num_states(); ++s)
      if (lv.level_of[s] != 0) ++count[lv.level_of[s]];
    const std::size_t first = (k + 2) / 3;
    const std::size_t last = 2 * k / 3;
    std::size_t pick = first;
    for (std::size_t i = first; i <= last; ++i)
      if (count[i] < count[pick]) pick = i;

    std::vector<StateId> cut;
    for (StateId s = 0; s < current.num_states(); ++s)
      if (lv.level_of[s] == pick) cut.push_back(s);
    out.states.insert(out.states.end(), cut.begin(), cut.end());
    current = reduce_many(current, cut, 0.0);
  }
  return out;
}

double width(const Bounds& b) {
  double w = 0.0;
  for (std::size_t s = 0; s < b.lower.size(); ++s) w = std::max(w, b.upper[s] - b.lower[s]);
  return w;
}

ValueVector midpoint(const Bounds& b) {
  ValueVector m(b.lower.size());
  for (std::size_t s = 0; s < m.size(); ++s) m[s] = b.lower[s] + (b.upper[s] - b.lower[s]) / 2;
  return m;
}

bool well_ordered(const Bounds& b) {
  for (std::size_t s = 0; s < b.lower.size(); ++s)
    if (!(b.lower[s] <= b.upper[s])) return false;
  return true;
}

}  // namespace guessvi
