#include "guessvi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "guessvi/detail/reverse_graph.hpp"

namespace guessvi {

namespace {

using Real = long double;

// States that can reach `goal` (goal included).
std::vector<std::uint8_t> backward_closure(const Model& m, const detail::ReverseGraph& rev,
                                           const std::vector<std::uint8_t>& goal) {
  std::vector<std::uint8_t> seen = goal;
  std::deque<StateId> queue;
  for (StateId s = 0; s < m.num_states(); ++s)
    if (goal[s]) queue.push_back(s);
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (StateId p : rev.predecessors(s))
      if (!seen[p]) {
        seen[p] = 1;
        queue.push_back(p);
      }
  }
  return seen;
}

// Values of the chain in which every decision state follows choice[s].
// Reach: states unable to reach a target are 0. Ssp: states that miss the
// targets with positive probability are +inf.
ExactSolution solve_chain(const Model& m, const std::vector<StateId>& choice) {
  const std::size_t n = m.num_states();
  const bool ssp = m.objective().kind() == ObjectiveKind::Ssp;
  auto successors = [&](StateId s) -> std::span<const Transition> {
    auto succ = m.successors(s);
    if (!m.is_decision(s) || m.is_target(s)) return succ;
    for (std::size_t i = 0; i < succ.size(); ++i)
      if (succ[i].target == choice[s]) return succ.subspan(i, 1);
    throw ModelError(ModelErrc::InvalidStrategy, "oracle: bad choice at " + std::to_string(s));
  };

  ModelBuilder chain(ModelKind::Mc, m.objective().kind(), n);
  for (StateId s = 0; s < n; ++s) {
    chain.set_kind(s, m.state_kind(s));
    for (const Transition& t : successors(s)) chain.add_edge(s, t.target, t.probability);
  }
  Model mc = chain.build_unchecked();
  detail::ReverseGraph rev(mc);

  std::vector<std::uint8_t> target_mask(n, 0);
  for (StateId t : m.objective().targets()) target_mask[t] = 1;
  std::vector<std::uint8_t> reaches = backward_closure(mc, rev, target_mask);

  ExactSolution sol;
  sol.values.assign(n, 0.0);
  std::vector<std::uint8_t> unknown(n, 0);
  if (ssp) {
    std::vector<std::uint8_t> lost(n, 0);
    for (StateId s = 0; s < n; ++s) lost[s] = reaches[s] ? 0 : 1;
    std::vector<std::uint8_t> doomed = backward_closure(mc, rev, lost);
    for (StateId s = 0; s < n; ++s) {
      if (doomed[s]) sol.values[s] = std::numeric_limits<double>::infinity();
      else if (!target_mask[s]) unknown[s] = 1;
    }
  } else {
    for (StateId s = 0; s < n; ++s)
      if (reaches[s] && !target_mask[s]) unknown[s] = 1;
  }
  for (StateId t : m.objective().targets()) sol.values[t] = m.weight(t);

  std::vector<std::size_t> slot(n, n);
  std::vector<StateId> var;
  for (StateId s = 0; s < n; ++s)
    if (unknown[s]) {
      slot[s] = var.size();
      var.push_back(s);
    }
  const std::size_t k = var.size();
  if (k == 0) return sol;
  if (k > kOracleMaxStates) throw std::length_error("oracle: model too large");

  // Row i: v_i - sum_j q_ij v_j = rhs_i.
  std::vector<Real> a(k * (k + 1), 0.0L);
  auto at = [&](std::size_t i, std::size_t j) -> Real& { return a[i * (k + 1) + j]; };
  for (std::size_t i = 0; i < k; ++i) {
    StateId s = var[i];
    at(i, i) += 1.0L;
    Real rhs = ssp ? static_cast<Real>(m.weight(s)) : 0.0L;
    for (const Transition& t : successors(s)) {
      Real p = m.is_decision(s) ? 1.0L : static_cast<Real>(t.probability);
      if (unknown[t.target]) at(i, slot[t.target]) -= p;
      else rhs += p * static_cast<Real>(sol.values[t.target]);
    }
    at(i, k) = rhs;
  }
  const std::vector<Real> original = a;

  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (std::fabs(at(r, c)) > std::fabs(at(piv, c))) piv = r;
    if (std::fabs(at(piv, c)) < 1e-300L) throw std::domain_error("oracle: singular system");
    if (piv != c)
      for (std::size_t j = c; j <= k; ++j) std::swap(at(c, j), at(piv, j));
    for (std::size_t r = c + 1; r < k; ++r) {
      Real f = at(r, c) / at(c, c);
      if (f == 0.0L) continue;
      for (std::size_t j = c; j <= k; ++j) at(r, j) -= f * at(c, j);
    }
  }
  std::vector<Real> x(k);
  for (std::size_t i = k; i-- > 0;) {
    Real acc = at(i, k);
    for (std::size_t j = i + 1; j < k; ++j) acc -= at(i, j) * x[j];
    x[i] = acc / at(i, i);
  }

  Real worst = 0.0L;
  for (std::size_t i = 0; i < k; ++i) {
    Real r = -original[i * (k + 1) + k];
    for (std::size_t j = 0; j < k; ++j) r += original[i * (k + 1) + j] * x[j];
    worst = std::max(worst, std::fabs(r));
  }
  sol.residual = static_cast<double>(worst);
  for (std::size_t i = 0; i < k; ++i) sol.values[var[i]] = static_cast<double>(x[i]);
  return sol;
}

}  // namespace

ExactSolution exact_mc_value(const Model& mc) {
  std::vector<StateId> choice = first_choice_strategy(mc).choice;
  ExactSolution sol = solve_chain(mc, choice);
  for (double v : sol.values)
    if (std::isinf(v)) throw std::domain_error("oracle: some state does not reach the targets");
  return sol;
}

ExactSolution exact_mdp_value(const Model& mdp) {
  const std::size_t n = mdp.num_states();
  const bool maximize = mdp.objective().direction() == Direction::Maximize;
  std::vector<StateId> free_states;
  std::uint64_t total = 1;
  for (StateId s = 0; s < n; ++s) {
    if (!mdp.is_decision(s) || mdp.is_target(s) || mdp.successors(s).size() < 2) continue;
    free_states.push_back(s);
    total *= mdp.successors(s).size();
    if (total > kOracleMaxStrategies) throw std::length_error("oracle: too many strategies");
  }

  // Calls visit(choice) for every positional strategy until it returns true.
  auto enumerate = [&](auto&& visit) {
    Strategy current = first_choice_strategy(mdp);
    std::vector<std::size_t> digit(free_states.size(), 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      if (visit(current.choice)) return;
      for (std::size_t i = 0; i < free_states.size(); ++i) {
        StateId s = free_states[i];
        if (++digit[i] < mdp.successors(s).size()) {
          current.choice[s] = mdp.successors(s)[digit[i]].target;
          break;
        }
        digit[i] = 0;
        current.choice[s] = mdp.successors(s)[0].target;
      }
    }
  };

  ValueVector best;
  double residual = 0.0;
  enumerate([&](const std::vector<StateId>& choice) {
    ExactSolution sol = solve_chain(mdp, choice);
    residual = std::max(residual, sol.residual);
    if (best.empty()) {
      best = std::move(sol.values);
    } else {
      for (std::size_t s = 0; s < n; ++s)
        best[s] = maximize ? std::max(best[s], sol.values[s]) : std::min(best[s], sol.values[s]);
    }
    return false;
  });
  for (double v : best)
    if (std::isinf(v)) throw std::domain_error("oracle: some state does not reach the targets");

  // Among strategies optimal everywhere, the one whose induced chain has the
  // smallest level sum; the closest one if rounding separates them all.
  std::vector<StateId> pick;
  double pick_gap = std::numeric_limits<double>::infinity();
  std::uint64_t pick_rank = std::numeric_limits<std::uint64_t>::max();
  enumerate([&](const std::vector<StateId>& choice) {
    ExactSolution sol = solve_chain(mdp, choice);
    double gap = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      double d = std::abs(sol.values[s] - best[s]);
      if (std::isnan(d)) d = std::numeric_limits<double>::infinity();
      gap = std::max(gap, d / std::max(1.0, std::abs(best[s])));
    }
    if (gap <= 1e-12) {
      Levels lv = compute_levels(induced_mc(mdp, Strategy{choice}));
      std::uint64_t rank = 0;
      for (std::uint32_t l : lv.level_of) rank += l;
      if (pick_gap > 1e-12 || rank < pick_rank) {
        pick_gap = gap;
        pick_rank = rank;
        pick = choice;
      }
    } else if (gap < pick_gap) {
      pick_gap = gap;
      pick = choice;
    }
    return false;
  });

  ExactSolution out;
  out.values = std::move(best);
  out.strategy = Strategy{std::move(pick)};
  out.residual = residual;
  return out;
}

Levels optimal_levels(const Model& mdp) {
  if (mdp.kind() == ModelKind::Mc) return compute_levels(mdp);
  ExactSolution sol = exact_mdp_value(mdp);
  return compute_levels(induced_mc(mdp, *sol.strategy));
}

}  // namespace guessvi
