#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "guessvi/generators.hpp"
#include "guessvi/graph.hpp"
#include "guessvi/oracle.hpp"
#include "support.hpp"

using namespace guessvi;

namespace {

// t <- a <- b plus an isolated sink u.
Model small_line() {
  ModelBuilder b(ModelKind::Mc, ObjectiveKind::Reach, 4);
  b.add_edge(0, 0).set_target(0, 1.0);
  b.add_edge(1, 0);
  b.add_edge(2, 1);
  b.add_edge(3, 3);
  return b.build();
}

// Deterministic line of n transient states into target 0; state i -> i-1.
Model pure_chain(std::size_t n) {
  ModelBuilder b(ModelKind::Mc, ObjectiveKind::Reach, n + 1);
  b.add_edge(0, 0).set_target(0, 1.0);
  for (StateId i = 1; i <= n; ++i) b.add_edge(i, i - 1);
  return b.build();
}

}  // namespace

TEST_CASE("levels of a short line") {
  Levels lv = compute_levels(small_line());
  CHECK(lv.level_of == std::vector<std::uint32_t>{0, 1, 2, 0});
  CHECK(lv.k == 2);
  CHECK(lv.zero_class == std::vector<StateId>{0, 3});
  CHECK(qualitative_zero(small_line()) == std::vector<StateId>{3});
}

TEST_CASE("slow chain has n levels") {
  for (std::size_t n : {2, 5, 12, 40}) CHECK(compute_levels(gen_slow_mc(n, 0.5)).k == n);
}

TEST_CASE("level soundness on random models") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto kind = seed % 2 ? ModelKind::Mc : ModelKind::Mdp;
    Model m = gen_random(testing::random_params(seed, 3, 40, kind, ObjectiveKind::Reach));
    Levels lv = compute_levels(m);
    for (StateId s = 0; s < m.num_states(); ++s) {
      if (lv.level_of[s] == 0) continue;
      std::uint32_t lowest = UINT32_MAX;
      for (const Transition& t : m.successors(s)) lowest = std::min(lowest, lv.level_of[t.target]);
      CHECK(lowest + 1 == lv.level_of[s]);
    }
  }
}

TEST_CASE("qualitative_zero of generated models is empty") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed)
    CHECK(qualitative_zero(gen_random(
              testing::random_params(seed, 2, 30, ModelKind::Mdp, ObjectiveKind::Ssp)))
              .empty());
}

TEST_CASE("collapse of a self-loop state keeps its exit") {
  ModelBuilder b(ModelKind::Mdp, ObjectiveKind::Reach, 3);
  b.add_edge(0, 0).add_edge(0, 1);
  b.set_kind(1, StateKind::Probabilistic).add_edge(1, 2, 0.5).add_edge(1, 0, 0.5);
  b.add_edge(2, 2).set_target(2, 0.5);
  Model m = b.build();
  auto mecs = maximal_end_components(m);
  REQUIRE(mecs.size() == 1);
  CHECK(mecs[0] == std::vector<StateId>{0});
  CollapseResult c = collapse_mecs(m);
  const StateId a = c.image[0];
  REQUIRE(c.model.successors(a).size() == 1);
  CHECK(c.model.successors(a)[0].target == c.image[1]);
  CHECK(maximal_end_components(c.model).empty());
}

TEST_CASE("collapse merges a two-state cycle with one exit") {
  // a <-> b both decision states; a may also leave to a coin that hits a
  // target of weight 1 or a target of weight 0.
  ModelBuilder b(ModelKind::Mdp, ObjectiveKind::Reach, 5);
  b.add_edge(0, 1).add_edge(0, 2);
  b.add_edge(1, 0);
  b.set_kind(2, StateKind::Probabilistic).add_edge(2, 3, 0.5).add_edge(2, 4, 0.5);
  b.add_edge(3, 3).set_target(3, 1.0);
  b.add_edge(4, 4).set_target(4, 0.0);
  Model m = b.build();
  CollapseResult c = collapse_mecs(m);
  CHECK(c.image[0] == c.image[1]);
  CHECK(maximal_end_components(c.model).empty());
  ExactSolution before = exact_mdp_value(m);
  ExactSolution after = exact_mdp_value(c.model);
  CHECK(before.values[0] == doctest::Approx(0.5));
  for (StateId s = 0; s < m.num_states(); ++s)
    CHECK(std::abs(before.values[s] - after.values[c.image[s]]) <= 1e-12);
}

TEST_CASE("collapse of a MEC-free model only adds the two fresh targets") {
  ModelBuilder b(ModelKind::Mdp, ObjectiveKind::Reach, 4);
  b.add_edge(0, 1).add_edge(0, 3);
  b.set_kind(1, StateKind::Probabilistic).add_edge(1, 2, 0.25).add_edge(1, 3, 0.75);
  b.add_edge(2, 2).set_target(2, 2.0);
  b.add_edge(3, 3).set_target(3, 1.0);
  Model m = b.build();
  CollapseResult c = collapse_mecs(m);
  CHECK(c.model.num_states() == m.num_states() + 2);
  CHECK(c.model.weight(c.top) == 2.0);
  CHECK(c.model.weight(c.bottom) == 0.0);
}

TEST_CASE("collapse folds value classes into the fresh targets") {
  Model m = gen_slow_mdp(4);
  CollapseResult c = collapse_mecs(m);
  const StateId sink = 9;
  CHECK(c.image[sink] == c.bottom);
  for (StateId s = 0; s < 8; ++s) CHECK(c.image[s] == c.top);
  CHECK(c.image[8] != c.top);
}

TEST_CASE("collapse preserves values on random Reach MDPs") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    Model m = gen_random(testing::random_params(seed, 3, 12, ModelKind::Mdp, ObjectiveKind::Reach));
    CollapseResult c = collapse_mecs(m);
    CHECK(maximal_end_components(c.model).empty());
    ExactSolution before = exact_mdp_value(m);
    ExactSolution after = exact_mdp_value(c.model);
    for (StateId s = 0; s < m.num_states(); ++s)
      CHECK(std::abs(before.values[s] - after.values[c.image[s]]) <= 1e-12);
  }
}

TEST_CASE("mdp_partition of the slow MDP has four classes") {
  for (std::size_t n : {2, 3, 6, 10}) {
    Model m = gen_slow_mdp(n);
    MdpPartition p = mdp_partition(m);
    CHECK(p.K == 3);
    const StateId coin = 2 * n, sink = coin + 1, target = coin + 2;
    CHECK(p.class_of[target] == 0);
    CHECK(p.class_of[sink] == 0);
    CHECK(p.class_of[coin] == 1);
    CHECK(p.class_of[2 * n - 1] == 1);
    for (StateId i = 0; i < n; ++i) CHECK(p.class_of[2 * i] == 2);
    for (StateId i = 0; i + 1 < n; ++i) CHECK(p.class_of[2 * i + 1] == 3);
  }
}

TEST_CASE("universal partition of the slow MDP grows with the chain") {
  for (std::size_t n : {2, 3, 6, 10}) CHECK(universal_level_partition(gen_slow_mdp(n)).K == n);
}

TEST_CASE("partitions on chains coincide with levels") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Model m = gen_random(testing::random_params(seed, 2, 30, ModelKind::Mc, ObjectiveKind::Reach));
    Levels lv = compute_levels(m);
    MdpPartition p = mdp_partition(m);
    CHECK(p.class_of == lv.level_of);
    CHECK(p.K == lv.k);
  }
}

TEST_CASE("single probabilistic state into a target gives two classes") {
  ModelBuilder b(ModelKind::Mdp, ObjectiveKind::Reach, 2);
  b.set_kind(0, StateKind::Probabilistic).add_edge(0, 1, 1.0);
  b.add_edge(1, 1).set_target(1, 1.0);
  CHECK(mdp_partition(b.build()).K == 1);
}

TEST_CASE("initial vectors") {
  SUBCASE("reach") {
    Model m = gen_slow_mc(3, 0.5);
    Bounds b = initial_vectors(m, compute_levels(m));
    CHECK(b.lower == ValueVector{0, 0, 0, 1});
    CHECK(b.upper == ValueVector{1, 1, 1, 1});
  }
  SUBCASE("reach target weight") {
    ModelBuilder mb(ModelKind::Mc, ObjectiveKind::Reach, 2);
    mb.add_edge(0, 1);
    mb.add_edge(1, 1).set_target(1, 0.4);
    Model m = mb.build();
    Bounds b = initial_vectors(m, compute_levels(m));
    CHECK(b.lower[1] == 0.4);
    CHECK(b.upper[1] == 0.4);
  }
  SUBCASE("ssp chain with two levels") {
    ModelBuilder mb(ModelKind::Mc, ObjectiveKind::Ssp, 3);
    mb.set_kind(0, StateKind::Probabilistic).add_edge(0, 1, 0.5).add_edge(0, 0, 0.5).set_cost(0, 1.0);
    mb.set_kind(1, StateKind::Probabilistic).add_edge(1, 2, 0.5).add_edge(1, 0, 0.5).set_cost(1, 1.0);
    mb.add_edge(2, 2).set_target(2, 1.0);
    Model m = mb.build();
    Bounds b = initial_vectors(m, compute_levels(m));
    CHECK(b.lower[0] == 1.0);
    CHECK(b.upper[0] == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(b.upper[1] == doctest::Approx(12.0).epsilon(1e-12));
  }
  SUBCASE("ssp with an unreachable target is rejected") {
    ModelBuilder mb(ModelKind::Mc, ObjectiveKind::Ssp, 3);
    mb.add_edge(0, 0).set_cost(0, 1.0);
    mb.add_edge(1, 2).set_cost(1, 1.0);
    mb.add_edge(2, 2).set_target(2, 1.0);
    Model m = mb.build();
    CHECK_THROWS_AS(initial_vectors(m, compute_levels(m)), ModelError);
  }
}

TEST_CASE("initial vectors bracket the exact value") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto obj = seed % 2 ? ObjectiveKind::Reach : ObjectiveKind::Ssp;
    auto kind = seed % 3 ? ModelKind::Mc : ModelKind::Mdp;
    Model m = gen_random(testing::random_params(seed, 2, 10, kind, obj));
    if (obj == ObjectiveKind::Reach) m = collapse_mecs(m).model;
    Bounds b = initial_vectors(m, compute_levels(m));
    ExactSolution ex = kind == ModelKind::Mc ? exact_mc_value(m) : exact_mdp_value(m);
    CHECK(well_ordered(b));
    CHECK(testing::brackets(b, ex.values));
  }
}

TEST_CASE("mark_to_guess base case") {
  // Nine states, three levels: 3 <= sqrt(9).
  ModelBuilder b(ModelKind::Mc, ObjectiveKind::Reach, 9);
  b.add_edge(0, 0).set_target(0, 1.0);
  for (StateId s = 1; s < 9; ++s) b.add_edge(s, s <= 3 ? 0 : s - 3);
  Model m = b.build();
  CHECK(compute_levels(m).k == 3);
  CHECK(mark_to_guess(m).states.empty());
}

TEST_CASE("mark_to_guess cuts a pure chain at the lowest eligible level") {
  Model m = pure_chain(16);
  Levels lv = compute_levels(m);
  REQUIRE(lv.k == 16);
  GuessSet g = mark_to_guess(m);
  REQUIRE_FALSE(g.states.empty());
  CHECK(lv.level_of[g.states[0]] == 6);
  std::set<StateId> unique(g.states.begin(), g.states.end());
  CHECK(unique.size() == g.states.size());
  for (StateId s : g.states) CHECK_FALSE(m.is_target(s));
  Model guessed = reduce_many(m, g.states, 0.0);
  CHECK(static_cast<double>(compute_levels(guessed).k) <= std::sqrt(17.0));
}

TEST_CASE("mark_to_guess on the long slow chain") {
  Model m = gen_slow_mc(400, 0.5);
  GuessSet g = mark_to_guess(m);
  CHECK(g.states.size() <= 180);
  CHECK(compute_levels(reduce_many(m, g.states, 0.0)).k <= 20);
}

TEST_CASE("mark_to_guess bounds hold on random chains") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Model m = gen_random(testing::random_params(seed, 2, 200, ModelKind::Mc, ObjectiveKind::Reach));
    GuessSet g = mark_to_guess(m);
    const double root = std::sqrt(static_cast<double>(m.num_states()));
    CHECK(static_cast<double>(g.states.size()) <= 9 * root);
    CHECK(static_cast<double>(compute_levels(reduce_many(m, g.states, 0.0)).k) <= root);
  }
}
