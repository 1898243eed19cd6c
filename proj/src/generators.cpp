#include "guessvi/generators.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "guessvi/graph.hpp"

namespace guessvi {

Model gen_slow_mc(std::size_t n, double p) {
  if (n < 2 || !(p > 0.0 && p < 1.0))
    throw std::invalid_argument("gen_slow_mc: need n >= 2 and 0 < p < 1");
  const auto target = static_cast<StateId>(n);
  ModelBuilder b(ModelKind::Mc, ObjectiveKind::Reach, n + 1);
  for (StateId i = 0; i < n; ++i) {
    b.set_kind(i, StateKind::Probabilistic);
    b.add_edge(i, i + 1, p);
    b.add_edge(i, 0, 1.0 - p);
  }
  b.add_edge(target, target);
  b.set_target(target, 1.0);
  return b.build();
}

Model gen_slow_mdp(std::size_t n) {
  if (n < 2) throw std::invalid_argument("gen_slow_mdp: need n >= 2");
  const auto coin = static_cast<StateId>(2 * n);
  const StateId sink = coin + 1;
  const StateId target = coin + 2;
  ModelBuilder b(ModelKind::Mdp, ObjectiveKind::Reach, 2 * n + 3);
  for (StateId i = 0; i < n; ++i) {
    StateId d = 2 * i;
    StateId pr = d + 1;
    b.add_edge(d, pr);
    b.add_edge(d, coin);
    b.set_kind(pr, StateKind::Probabilistic);
    b.add_edge(pr, i + 1 < n ? pr + 1 : target, 0.5);
    b.add_edge(pr, 0, 0.5);
  }
  b.set_kind(coin, StateKind::Probabilistic);
  b.add_edge(coin, sink, 0.5);
  b.add_edge(coin, target, 0.5);
  b.add_edge(sink, sink);
  b.add_edge(target, target);
  b.set_target(target, 1.0);
  return b.build();
}

Strategy slow_mdp_advance_strategy(std::size_t n) {
  Strategy st;
  st.choice.assign(2 * n + 3, kNoState);
  for (StateId i = 0; i < n; ++i) st.choice[2 * i] = 2 * i + 1;
  st.choice[2 * n + 1] = static_cast<StateId>(2 * n + 1);
  st.choice[2 * n + 2] = static_cast<StateId>(2 * n + 2);
  return st;
}

namespace {

// Uniform integer in [0, bound) by rejection; independent of the standard
// library's distribution implementation so outputs are portable.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

bool chance(std::mt19937_64& rng, double fraction) {
  return static_cast<double>(below(rng, 1u << 20)) <
         fraction * static_cast<double>(1u << 20);
}

Model sample(const RandomModelParams& params, std::mt19937_64& rng) {
  const std::size_t n = params.n;
  const std::size_t num_targets = std::clamp<std::size_t>(params.num_targets, 1, n - 1);
  const bool mdp = params.kind == ModelKind::Mdp;

  std::vector<StateId> order(n);
  std::iota(order.begin(), order.end(), StateId{0});
  for (std::size_t i = n - 1; i > 0; --i)
    std::swap(order[i], order[below(rng, i + 1)]);

  ModelBuilder b(params.kind, params.objective, n);
  for (std::size_t r = 0; r < num_targets; ++r) {
    StateId t = order[r];
    b.add_edge(t, t);
    double w = params.objective == ObjectiveKind::Reach
                   ? static_cast<double>(1 + below(rng, 4)) / 4.0
                   : static_cast<double>(1 + below(rng, 4)) / 2.0;
    b.set_target(t, w);
  }

  const double decision_fraction = mdp ? params.decision_fraction : 0.1;
  for (std::size_t r = num_targets; r < n; ++r) {
    StateId s = order[r];
    if (params.objective == ObjectiveKind::Ssp)
      b.set_cost(s, static_cast<double>(1 + below(rng, 4)) / 2.0);

    // One successor earlier in the order guarantees a path to the targets.
    std::vector<StateId> succ{order[below(rng, r)]};
    const bool decision = chance(rng, decision_fraction);
    std::size_t width = 1;
    if (!(decision && !mdp)) width = 1 + below(rng, std::max<std::size_t>(params.branch, 1));
    for (std::size_t tries = 0; succ.size() < width && tries < 4 * width; ++tries) {
      StateId c = static_cast<StateId>(below(rng, n));
      if (std::find(succ.begin(), succ.end(), c) == succ.end()) succ.push_back(c);
    }
    // Keep the guaranteed edge but not always in front.
    std::swap(succ[0], succ[below(rng, succ.size())]);

    if (decision) {
      for (StateId c : succ) b.add_edge(s, c);
    } else {
      b.set_kind(s, StateKind::Probabilistic);
      std::vector<double> w(succ.size());
      double total = 0.0;
      for (double& x : w) {
        x = params.prob_grid[below(rng, params.prob_grid.size())];
        total += x;
      }
      for (std::size_t i = 0; i < succ.size(); ++i) b.add_edge(s, succ[i], w[i] / total);
    }
  }
  return b.build();
}

}  // namespace

Model gen_random(const RandomModelParams& params) {
  if (params.n < 2 || params.branch < 1 || params.prob_grid.empty())
    throw std::invalid_argument("gen_random: need n >= 2, branch >= 1 and a probability grid");
  for (double g : params.prob_grid)
    if (!(g > 0.0)) throw std::invalid_argument("gen_random: grid entries must be positive");
  std::mt19937_64 rng(params.seed);
  for (;;) {
    Model m = sample(params, rng);
    if (qualitative_zero(m).empty()) return m;
  }
}

}  // namespace guessvi
