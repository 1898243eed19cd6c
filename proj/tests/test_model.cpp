#include <doctest.h>

#include <cmath>

#include "guessvi/generators.hpp"
#include "guessvi/graph.hpp"
#include "guessvi/model.hpp"
#include "support.hpp"

using namespace guessvi;

namespace {

ModelErrc build_error(const ModelBuilder& b) {
  try {
    b.build();
  } catch (const ModelError& e) {
    return e.code();
  }
  FAIL("model was accepted");
  return ModelErrc::BadState;
}

ModelBuilder two_state_mc() {
  ModelBuilder b(ModelKind::Mc, ObjectiveKind::Reach, 2);
  b.set_kind(0, StateKind::Probabilistic).add_edge(0, 1, 0.5).add_edge(0, 0, 0.5);
  b.add_edge(1, 1).set_target(1, 1.0);
  return b;
}

}  // namespace

TEST_CASE("builder accepts a well-formed chain") {
  Model m = two_state_mc().build();
  CHECK(m.num_states() == 2);
  CHECK(m.num_transitions() == 3);
  CHECK(m.is_target(1));
  CHECK_FALSE(m.is_target(0));
  CHECK(m.objective().w_max() == 1.0);
  CHECK(p_min(m) == 0.5);
}

TEST_CASE("validation rejects broken models") {
  SUBCASE("empty successors") {
    ModelBuilder b(ModelKind::Mc, ObjectiveKind::Reach, 2);
    b.add_edge(1, 1).set_target(1, 1.0);
    CHECK(build_error(b) == ModelErrc::EmptySuccessors);
  }
  SUBCASE("row sum") {
    ModelBuilder b(ModelKind::Mc, ObjectiveKind::Reach, 2);
    b.set_kind(0, StateKind::Probabilistic).add_edge(0, 1, 0.5).add_edge(0, 0, 0.4);
    b.add_edge(1, 1).set_target(1, 1.0);
    CHECK(build_error(b) == ModelErrc::RowSum);
  }
  SUBCASE("row sum within tolerance is fine") {
    ModelBuilder b(ModelKind::Mc, ObjectiveKind::Reach, 2);
    b.set_kind(0, StateKind::Probabilistic).add_edge(0, 1, 0.5).add_edge(0, 0, 0.5 + 1e-10);
    b.add_edge(1, 1).set_target(1, 1.0);
    CHECK_NOTHROW(b.build());
  }
  SUBCASE("zero probability") {
    ModelBuilder b(ModelKind::Mc, ObjectiveKind::Reach, 2);
    b.set_kind(0, StateKind::Probabilistic).add_edge(0, 1, 1.0).add_edge(0, 0, 0.0);
    b.add_edge(1, 1).set_target(1, 1.0);
    CHECK(build_error(b) == ModelErrc::NonPositiveProbability);
  }
  SUBCASE("non-absorbing target") {
    ModelBuilder b(ModelKind::Mc, ObjectiveKind::Reach, 2);
    b.add_edge(0, 1);
    b.add_edge(1, 0).set_target(1, 1.0);
    CHECK(build_error(b) == ModelErrc::NonAbsorbingTarget);
  }
  SUBCASE("branching decision state in a chain") {
    ModelBuilder b(ModelKind::Mc, ObjectiveKind::Reach, 3);
    b.add_edge(0, 1).add_edge(0, 2);
    b.add_edge(1, 1).set_target(1, 1.0);
    b.add_edge(2, 2).set_target(2, 0.0);
    CHECK(build_error(b) == ModelErrc::BranchingDecisionInMc);
  }
  SUBCASE("non-positive ssp cost") {
    ModelBuilder b(ModelKind::Mc, ObjectiveKind::Ssp, 2);
    b.add_edge(0, 1).set_cost(0, 0.0);
    b.add_edge(1, 1).set_target(1, 1.0);
    CHECK(build_error(b) == ModelErrc::NonPositiveCost);
  }
  SUBCASE("negative reach weight") {
    ModelBuilder b(ModelKind::Mc, ObjectiveKind::Reach, 2);
    b.add_edge(0, 1);
    b.add_edge(1, 1).set_target(1, -1.0);
    CHECK(build_error(b) == ModelErrc::NegativeWeight);
  }
  SUBCASE("out-of-range successor") {
    ModelBuilder b(ModelKind::Mc, ObjectiveKind::Reach, 2);
    CHECK_THROWS_AS(b.add_edge(0, 5), ModelError);
  }
  SUBCASE("duplicate edge") {
    ModelBuilder b(ModelKind::Mdp, ObjectiveKind::Reach, 2);
    b.add_edge(0, 1);
    CHECK_THROWS_AS(b.add_edge(0, 1), ModelError);
  }
}

TEST_CASE("error codes have readable names") {
  CHECK(std::string(to_string(ModelErrc::RowSum)) == "row sum");
  CHECK(std::string(to_string(ModelErrc::NonAbsorbingTarget)) == "non-absorbing target");
  CHECK(std::string(to_string(ModelErrc::ProbabilityOnDecisionEdge)) == "prob on decision edge");
}

TEST_CASE("p_min of the slow chain and of a pure decision model") {
  CHECK(p_min(gen_slow_mc(5, 0.3)) == doctest::Approx(0.3));
  CHECK(p_min(gen_slow_mc(5, 0.8)) == doctest::Approx(0.2));
  ModelBuilder b(ModelKind::Mdp, ObjectiveKind::Reach, 2);
  b.add_edge(0, 1).add_edge(0, 0);
  b.add_edge(1, 1).set_target(1, 1.0);
  CHECK(p_min(b.build()) == 1.0);
}

TEST_CASE("reduce turns a state into an absorbing target") {
  Model m = gen_slow_mc(4, 0.5);
  Model r = reduce(m, 2, 0.25);
  CHECK(r.is_target(2));
  CHECK(r.weight(2) == 0.25);
  REQUIRE(r.successors(2).size() == 1);
  CHECK(r.successors(2)[0].target == 2);
  CHECK(r.successors(2)[0].probability == 1.0);
  CHECK(r.num_targets() == m.num_targets() + 1);
  CHECK_NOTHROW(validate(r));
  // Untouched rows are copied verbatim.
  for (StateId s : {0u, 1u, 3u}) {
    auto a = m.successors(s), c = r.successors(s);
    REQUIRE(a.size() == c.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].target == c[i].target);
      CHECK(a[i].probability == c[i].probability);
    }
  }
  CHECK_THROWS_AS(reduce(m, 4, 0.5), ModelError);
  CHECK_THROWS_AS(reduce(m, 9, 0.5), ModelError);
}

TEST_CASE("reduce_many and w_max") {
  Model m = gen_slow_mc(6, 0.5);
  const StateId states[] = {1, 3};
  Model r = reduce_many(m, states, 3.0);
  CHECK(r.is_target(1));
  CHECK(r.is_target(3));
  CHECK(r.objective().w_max() == 3.0);
  CHECK(r.objective().w_min() == 1.0);
}

TEST_CASE("induced chain of the slow MDP") {
  const std::size_t n = 4;
  Model mdp = gen_slow_mdp(n);
  Strategy adv = slow_mdp_advance_strategy(n);
  Model mc = induced_mc(mdp, adv);
  CHECK(mc.kind() == ModelKind::Mc);
  CHECK_NOTHROW(validate(mc));
  for (StateId i = 0; i < n; ++i) {
    REQUIRE(mc.successors(2 * i).size() == 1);
    CHECK(mc.successors(2 * i)[0].target == 2 * i + 1);
  }
  Strategy bad = adv;
  bad.choice[0] = 5;
  CHECK_THROWS_AS(induced_mc(mdp, bad), ModelError);
}

TEST_CASE("first_choice_strategy picks the first successor of decision states") {
  Model mdp = gen_slow_mdp(3);
  Strategy s = first_choice_strategy(mdp);
  for (StateId q = 0; q < mdp.num_states(); ++q) {
    if (mdp.is_decision(q) && !mdp.is_target(q)) CHECK(s.choice[q] == mdp.successors(q)[0].target);
    if (!mdp.is_decision(q)) CHECK(s.choice[q] == kNoState);
  }
}

TEST_CASE("slow chain layout") {
  Model m = gen_slow_mc(12, 0.5);
  CHECK(m.num_states() == 13);
  CHECK(m.num_targets() == 1);
  CHECK(m.is_target(12));
  for (StateId i = 0; i < 12; ++i) {
    auto succ = m.successors(i);
    REQUIRE(succ.size() == 2);
    CHECK(succ[0].target == i + 1);
  }
  CHECK_THROWS_AS(gen_slow_mc(1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(gen_slow_mc(4, 1.0), std::invalid_argument);
}

TEST_CASE("slow MDP layout") {
  const std::size_t n = 5;
  Model m = gen_slow_mdp(n);
  CHECK(m.num_states() == 2 * n + 3);
  CHECK(m.is_target(2 * n + 2));
  CHECK(m.weight(2 * n + 2) == 1.0);
  CHECK(m.is_decision(0));
  CHECK_FALSE(m.is_decision(1));
  CHECK_FALSE(m.is_decision(2 * n));
}

TEST_CASE("random generator is deterministic and every state reaches a target") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    for (auto kind : {ModelKind::Mc, ModelKind::Mdp}) {
      for (auto obj : {ObjectiveKind::Reach, ObjectiveKind::Ssp}) {
        auto p = testing::random_params(seed, 3, 25, kind, obj);
        Model a = gen_random(p);
        Model b = gen_random(p);
        CHECK(a == b);
        CHECK(a.num_states() == p.n);
        CHECK(a.kind() == kind);
        CHECK(qualitative_zero(a).empty());
        CHECK_NOTHROW(validate(a));
      }
    }
  }
  RandomModelParams p;
  p.seed = 1;
  Model a = gen_random(p);
  p.seed = 2;
  CHECK_FALSE(a == gen_random(p));
}
