#include <algorithm>
#include <deque>
#include <stdexcept>

#include "guessvi/detail/reverse_graph.hpp"
#include "guessvi/graph.hpp"

namespace guessvi {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Iterative Tarjan over the sub-graph induced by `alive`. Returns the SCC
// index of every alive state (kNone elsewhere).
std::vector<std::uint32_t> scc_ids(const Model& model,
                                   const std::vector<std::uint8_t>& alive) {
  const std::size_t n = model.num_states();
  std::vector<std::uint32_t> index(n, kNone), low(n, 0), comp(n, kNone);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<StateId> stack;
  std::vector<std::pair<StateId, std::size_t>> frames;
  std::uint32_t next_index = 0;
  std::uint32_t next_comp = 0;

  for (StateId root = 0; root < n; ++root) {
    if (!alive[root] || index[root] != kNone) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      auto& [s, pos] = frames.back();
      auto succ = model.successors(s);
      if (pos < succ.size()) {
        StateId t = succ[pos++].target;
        if (!alive[t]) continue;
        if (index[t] == kNone) {
          index[t] = low[t] = next_index++;
          stack.push_back(t);
          on_stack[t] = 1;
          frames.emplace_back(t, 0);
        } else if (on_stack[t]) {
          low[s] = std::min(low[s], index[t]);
        }
        continue;
      }
      StateId done = s;
      frames.pop_back();
      if (!frames.empty()) {
        StateId parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        StateId x;
        do {
          x = stack.back();
          stack.pop_back();
          on_stack[x] = 0;
          comp[x] = next_comp;
        } while (x != done);
        ++next_comp;
      }
    }
  }
  return comp;
}

}  // namespace

std::vector<std::uint8_t> almost_sure_reach(const Model& model, double weight) {
  const std::size_t n = model.num_states();
  detail::ReverseGraph rev(model);
  std::vector<std::uint8_t> outer(n, 1);
  for (;;) {
    // Probabilistic states may only be used if they cannot leave `outer`.
    std::vector<std::uint8_t> closed(n, 1);
    for (StateId s = 0; s < n; ++s) {
      if (model.is_decision(s)) continue;
      for (const Transition& t : model.successors(s))
        if (!outer[t.target]) closed[s] = 0;
    }
    std::vector<std::uint8_t> inner(n, 0);
    std::deque<StateId> queue;
    for (StateId t : model.objective().targets()) {
      if (outer[t] && model.weight(t) == weight) {
        inner[t] = 1;
        queue.push_back(t);
      }
    }
    while (!queue.empty()) {
      StateId s = queue.front();
      queue.pop_front();
      for (StateId p : rev.predecessors(s)) {
        if (inner[p] || !outer[p] || model.is_target(p)) continue;
        if (!model.is_decision(p) && !closed[p]) continue;
        inner[p] = 1;
        queue.push_back(p);
      }
    }
    if (inner == outer) return inner;
    outer = std::move(inner);
  }
}

std::vector<std::vector<StateId>> maximal_end_components(const Model& model) {
  const std::size_t n = model.num_states();
  std::vector<std::uint8_t> alive(n, 0);
  for (StateId s = 0; s < n; ++s) alive[s] = model.is_target(s) ? 0 : 1;

  std::vector<std::uint32_t> comp;
  for (;;) {
    comp = scc_ids(model, alive);
    bool removed = false;
    for (StateId s = 0; s < n; ++s) {
      if (!alive[s]) continue;
      bool keep;
      if (model.is_decision(s)) {
        keep = false;
        for (const Transition& t : model.successors(s))
          if (alive[t.target] && comp[t.target] == comp[s]) keep = true;
      } else {
        keep = true;
        for (const Transition& t : model.successors(s))
          if (!alive[t.target] || comp[t.target] != comp[s]) keep = false;
      }
      if (!keep) {
        alive[s] = 0;
        removed = true;
      }
    }
    if (!removed) break;
  }

  std::vector<std::vector<StateId>> out;
  std::vector<std::uint32_t> slot(n, kNone);
  for (StateId s = 0; s < n; ++s) {
    if (!alive[s]) continue;
    if (slot[comp[s]] == kNone) {
      slot[comp[s]] = static_cast<std::uint32_t>(out.size());
      out.emplace_back();
    }
    out[slot[comp[s]]].push_back(s);
  }
  return out;
}

CollapseResult collapse_mecs(const Model& model) {
  if (model.objective().kind() != ObjectiveKind::Reach)
    throw std::invalid_argument("collapse_mecs: reachability objective required");
  const std::size_t n = model.num_states();
  const double w_max = model.objective().w_max();

  // Classes: 0 untouched, 1 folds into bottom, 2 folds into top.
  std::vector<std::uint8_t> fold(n, 0);
  {
    detail::ReverseGraph rev(model);
    std::vector<std::uint8_t> reach(n, 0);
    std::deque<StateId> queue;
    for (StateId t : model.objective().targets()) {
      if (model.weight(t) > 0.0) {
        reach[t] = 1;
        queue.push_back(t);
      }
    }
    while (!queue.empty()) {
      StateId s = queue.front();
      queue.pop_front();
      for (StateId p : rev.predecessors(s))
        if (!reach[p]) {
          reach[p] = 1;
          queue.push_back(p);
        }
    }
    for (StateId s = 0; s < n; ++s)
      if (!model.is_target(s) && !reach[s]) fold[s] = 1;
  }
  if (w_max > 0.0) {
    std::vector<std::uint8_t> sure = almost_sure_reach(model, w_max);
    for (StateId s = 0; s < n; ++s)
      if (!model.is_target(s) && sure[s]) fold[s] = 2;
  }

  std::vector<std::uint32_t> mec_of(n, kNone);
  auto mecs = maximal_end_components(model);
  for (std::uint32_t i = 0; i < mecs.size(); ++i)
    for (StateId s : mecs[i])
      if (fold[s] == 0) mec_of[s] = i;

  // Number the surviving states; a component takes the slot of its first member.
  CollapseResult res;
  res.image.assign(n, kNoState);
  std::vector<StateId> rep_of_mec(mecs.size(), kNoState);
  std::vector<StateId> origin;  // new state -> original representative
  for (StateId s = 0; s < n; ++s) {
    if (fold[s] != 0) continue;
    if (mec_of[s] != kNone) {
      StateId& rep = rep_of_mec[mec_of[s]];
      if (rep == kNoState) {
        rep = static_cast<StateId>(origin.size());
        origin.push_back(s);
      }
      res.image[s] = rep;
    } else {
      res.image[s] = static_cast<StateId>(origin.size());
      origin.push_back(s);
    }
  }
  res.top = static_cast<StateId>(origin.size());
  res.bottom = res.top + 1;
  for (StateId s = 0; s < n; ++s) {
    if (fold[s] == 1) res.image[s] = res.bottom;
    if (fold[s] == 2) res.image[s] = res.top;
  }

  ModelBuilder b(model.kind(), ObjectiveKind::Reach, origin.size() + 2);
  for (StateId ns = 0; ns < origin.size(); ++ns) {
    StateId s = origin[ns];
    if (model.is_target(s)) {
      b.add_edge(ns, ns);
      b.set_target(ns, model.weight(s));
      continue;
    }
    std::vector<StateId> seen;
    if (mec_of[s] != kNone) {
      for (StateId m : mecs[mec_of[s]]) {
        if (!model.is_decision(m)) continue;
        for (const Transition& t : model.successors(m)) {
          if (mec_of[t.target] == mec_of[s]) continue;
          StateId img = res.image[t.target];
          if (std::find(seen.begin(), seen.end(), img) == seen.end()) {
            seen.push_back(img);
            b.add_edge(ns, img);
          }
        }
      }
      continue;
    }
    if (model.is_decision(s)) {
      for (const Transition& t : model.successors(s)) {
        StateId img = res.image[t.target];
        if (std::find(seen.begin(), seen.end(), img) == seen.end()) {
          seen.push_back(img);
          b.add_edge(ns, img);
        }
      }
    } else {
      b.set_kind(ns, StateKind::Probabilistic);
      std::vector<double> mass;
      for (const Transition& t : model.successors(s)) {
        StateId img = res.image[t.target];
        auto it = std::find(seen.begin(), seen.end(), img);
        if (it == seen.end()) {
          seen.push_back(img);
          mass.push_back(t.probability);
        } else {
          mass[static_cast<std::size_t>(it - seen.begin())] += t.probability;
        }
      }
      for (std::size_t i = 0; i < seen.size(); ++i) b.add_edge(ns, seen[i], mass[i]);
    }
  }
  b.add_edge(res.top, res.top);
  b.set_target(res.top, w_max);
  b.add_edge(res.bottom, res.bottom);
  b.set_target(res.bottom, 0.0);
  res.model = b.build();
  return res;
}

}  // namespace guessvi
