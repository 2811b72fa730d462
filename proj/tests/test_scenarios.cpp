#include "ciel/scenarios.hpp"

#include "ciel/errors.hpp"
#include "doctest.h"

using namespace ciel;

namespace {

PuzzleSpec spec_of(std::size_t n, std::size_t k, std::vector<std::size_t> x) {
  return PuzzleSpec{n, k, std::move(x)};
}

std::size_t count_c_nodes(const WorldFormula& f) {
  switch (f.kind()) {
    case WorldFormula::Kind::Falsum:
    case WorldFormula::Kind::Atom:
      return 0;
    case WorldFormula::Kind::Not:
      return count_c_nodes(f.operand());
    case WorldFormula::Kind::And:
      return count_c_nodes(f.left()) + count_c_nodes(f.right());
    case WorldFormula::Kind::Common:
      return 1 + count_c_nodes(f.body());
  }
  return 0;
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(spec_of(0, 2, {}).validate(), ModelError);
  CHECK_THROWS_AS(spec_of(1, 1, {0}).validate(), ModelError);
  CHECK_THROWS_AS(spec_of(1, 2, {2}).validate(), ModelError);
  CHECK_NOTHROW(spec_of(2, 2, {0, 1}).validate());
}

TEST_CASE("alpha_leq expands the subset disjunction") {
  PuzzleSpec s = spec_of(1, 2, {0});
  // x = 0: the all-clear sign pattern is the sole disjunct
  CHECK(alpha_leq(s, 1, 0) == parse_world("~p_1_1 & ~p_1_2"));
  // x = 1: H in { {}, {1}, {2} }
  CHECK(alpha_leq(s, 1, 1) ==
        parse_world("(~p_1_1 & ~p_1_2) | (p_1_1 & ~p_1_2) | (~p_1_1 & p_1_2)"));
}

TEST_CASE("alpha_leq with the full bound is satisfied everywhere") {
  PuzzleSpec s = spec_of(1, 2, {0});
  CielModel m = build_puzzle_model(s);
  CHECK(eval(m, alpha_leq(s, 1, 2)).all());
  // at most 0 holds exactly at the all-zero world
  CHECK(eval(m, alpha_leq(s, 1, 0)).count() == 1);
}

TEST_CASE("the formula families have the documented shapes") {
  PuzzleSpec s = spec_of(1, 2, {0});
  WorldFormula vis = visibility_axiom(s);
  REQUIRE(vis.kind() == WorldFormula::Kind::Common);
  CHECK(vis.index() == AgentFormula::top());
  CHECK(count_c_nodes(vis.body()) == 4);  // one per bit and sign

  CHECK(initial_knowledge(s) ==
        WorldFormula::common(AgentFormula::top(),
                             WorldFormula::negation(alpha_leq(s, 1, 0))));
  // all-zero counters: the invariant is the initial knowledge
  CHECK(invariant_formula(s) == initial_knowledge(s));

  PuzzleSpec s2 = spec_of(2, 2, {1, 0});
  CHECK(invariant_formula(s2) !=  initial_knowledge(s2));
  CHECK(uncertainty_announcement(s).kind() == WorldFormula::Kind::Common);
}

TEST_CASE("puzzle model sizes") {
  CielModel m12 = build_puzzle_model(spec_of(1, 2, {0}));
  CHECK(m12.world_count() == 4);
  CHECK(m12.agent_model().agent_count() == 2);
  // every class of every agent has exactly two worlds
  for (std::size_t a = 0; a < 2; ++a) {
    CHECK(m12.relation(a).size() == 8);  // 2 classes x 4 ordered pairs
  }

  CielModel m13 = build_puzzle_model(spec_of(1, 3, {0}));
  CHECK(m13.world_count() == 8);
  CHECK(m13.agent_model().agent_count() == 3);

  CielModel m22 = build_puzzle_model(spec_of(2, 2, {0, 0}));
  CHECK(m22.world_count() == 16);
  CHECK(m22.agent_model().agent_count() == 4);
}

TEST_CASE("puzzle models validate strictly") {
  CielModel m = build_puzzle_model(spec_of(1, 3, {0}));
  CHECK_NOTHROW(validate(m, ValidateMode::Strict));
}

TEST_CASE("agents satisfy the background theory") {
  PuzzleSpec s = spec_of(2, 3, {0, 0});
  CielModel m = build_puzzle_model(s);
  const FilteredAgentModel& am = m.agent_model();
  CHECK(am.agent_count() == 9);  // 3^2 invisibility types
  for (const AgentFormula& c : puzzle_theory(s).constraints)
    CHECK(am.denote(c).all());
}

TEST_CASE("a blind agent sees one less set bit in its row") {
  PuzzleSpec s = spec_of(1, 3, {0});
  CielModel m = build_puzzle_model(s);
  const FilteredAgentModel& am = m.agent_model();
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    std::size_t set_bits = 0;
    for (std::size_t i = 1; i <= 3; ++i)
      if (m.atom_extent(puzzle_world_atom(1, i)).test(w)) ++set_bits;
    for (std::size_t a = 0; a < am.agent_count(); ++a) {
      std::size_t blind_col = 0;
      for (std::size_t i = 1; i <= 3; ++i)
        if (am.agent(a).value(puzzle_agent_atom(1, i))) blind_col = i;
      REQUIRE(blind_col > 0);
      bool blind_bit_set =
          m.atom_extent(puzzle_world_atom(1, blind_col)).test(w);
      std::size_t visible = 0;
      for (std::size_t i = 1; i <= 3; ++i)
        if (i != blind_col && m.atom_extent(puzzle_world_atom(1, i)).test(w))
          ++visible;
      if (blind_bit_set) CHECK(visible == set_bits - 1);
    }
  }
}

TEST_CASE("round inference holds across the small grid") {
  for (std::size_t k : {std::size_t{2}, std::size_t{3}})
    for (std::size_t x = 0; x + 1 < k; ++x)
      CHECK(check_round_inference(spec_of(1, k, {x}), 1));
}

TEST_CASE("dropping the uncertainty premise breaks the inference") {
  CHECK_FALSE(check_round_inference(spec_of(1, 3, {0}), 1, false));
}

TEST_CASE("vacuously constrained rounds are handled") {
  // k = 2, x = 1: the only state world is the all-set row
  CHECK(check_round_inference(spec_of(1, 2, {1}), 1));
}

TEST_CASE("two-row instances") {
  CHECK(check_round_inference(spec_of(2, 2, {0, 0}), 1));
  CHECK(check_round_inference(spec_of(2, 2, {0, 0}), 2));
}
