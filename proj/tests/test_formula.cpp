#include <unordered_set>

#include "ciel/errors.hpp"
#include "ciel/formula.hpp"
#include "doctest.h"
#include "support/gen.hpp"

using namespace ciel;

TEST_CASE("parsing hits the grammar productions") {
  WorldFormula f = parse_world("C[doctor] smoking_bad");
  REQUIRE(f.kind() == WorldFormula::Kind::Common);
  CHECK(f.index() == AgentFormula::atom("doctor"));
  CHECK(f.body() == WorldFormula::atom("smoking_bad"));

  WorldFormula nested = parse_world("C[hasChildTeen] C[Teenager] ep");
  REQUIRE(nested.kind() == WorldFormula::Kind::Common);
  REQUIRE(nested.body().kind() == WorldFormula::Kind::Common);
  CHECK(nested.body().index() == AgentFormula::atom("Teenager"));
  CHECK(nested.body().body() == WorldFormula::atom("ep"));
}

TEST_CASE("sugar is expanded at parse time") {
  CHECK(parse_world("p -> q") ==
        WorldFormula::negation(WorldFormula::conjunction(
            WorldFormula::atom("p"),
            WorldFormula::negation(WorldFormula::atom("q")))));
  CHECK(parse_world("p | q") == WorldFormula::disjunction(
                                    WorldFormula::atom("p"), WorldFormula::atom("q")));
  CHECK(parse_world("true") == WorldFormula::top());
  // the dual modality is stored through C
  CHECK(parse_world("P[q] p") ==
        WorldFormula::negation(WorldFormula::common(
            AgentFormula::atom("q"),
            WorldFormula::negation(WorldFormula::atom("p")))));
}

TEST_CASE("precedence: unary and modalities bind tighter than connectives") {
  CHECK(parse_world("C[q] p & r") ==
        WorldFormula::conjunction(
            WorldFormula::common(AgentFormula::atom("q"), WorldFormula::atom("p")),
            WorldFormula::atom("r")));
  CHECK(parse_world("~C[q] p") ==
        WorldFormula::negation(
            WorldFormula::common(AgentFormula::atom("q"), WorldFormula::atom("p"))));
  CHECK(parse_world("p & q | r") ==
        WorldFormula::disjunction(
            WorldFormula::conjunction(WorldFormula::atom("p"), WorldFormula::atom("q")),
            WorldFormula::atom("r")));
  CHECK(parse_world("p -> q -> r") == parse_world("p -> (q -> r)"));
  // C used without brackets is a plain atom
  CHECK(parse_world("C & p") ==
        WorldFormula::conjunction(WorldFormula::atom("C"), WorldFormula::atom("p")));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_world("p &"), ParseError);
  CHECK_THROWS_AS(parse_world("p - q"), ParseError);     // unknown operator
  CHECK_THROWS_AS(parse_world("(p & q"), ParseError);    // unbalanced
  CHECK_THROWS_AS(parse_world("C[q p"), ParseError);     // unbalanced bracket
  CHECK_THROWS_AS(parse_world("p q"), ParseError);       // trailing input
  try {
    parse_world("p &\n& q");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 1);
  }
}

TEST_CASE("normalized negation") {
  WorldFormula p = WorldFormula::atom("p");
  CHECK(nneg(WorldFormula::negation(p)) == p);
  CHECK(nneg(p) == WorldFormula::negation(p));
  WorldFormula boxed = parse_world("C[q] p");
  CHECK(nneg(boxed) == WorldFormula::negation(boxed));
  // nneg . nneg is the identity away from double negations
  CHECK(nneg(nneg(p)) == p);
  CHECK(nneg(nneg(boxed)) == boxed);
}

TEST_CASE("subformulae") {
  WorldFormula f = parse_world("C[q & r] p");
  auto world = subformulae(f);
  CHECK(world.size() == 2);  // the formula and p
  auto agent = agent_subformulae(f);
  // q & r, q, r
  CHECK(agent.size() == 3);

  auto conj = subformulae(parse_world("p & ~p"));
  CHECK(conj.size() == 3);

  CHECK(subformulae(WorldFormula::falsum()).size() == 1);
}

TEST_CASE("closure of a C-free formula") {
  ClosureSet cs = closure(parse_world("p"), {});
  CHECK(cs.size() == 2);
  CHECK(cs.contains(parse_world("p")));
  CHECK(cs.contains(parse_world("~p")));
}

TEST_CASE("closure saturates the index over the agent closure") {
  // agent closure standing in for {A, ~A, a-hat-1, a-hat-2}
  std::vector<AgentFormula> clo = {parse_agent("A"), parse_agent("~A"),
                                   parse_agent("A & B"), parse_agent("A & ~B")};
  ClosureSet cs = closure(parse_world("C[A] p"), clo);
  for (const AgentFormula& psi : clo) {
    WorldFormula c = WorldFormula::common(psi, WorldFormula::atom("p"));
    CHECK(cs.contains(c));
    CHECK(cs.contains(WorldFormula::negation(c)));
  }
  CHECK(cs.contains(parse_world("p")));
  CHECK(cs.contains(parse_world("~p")));
  CHECK(cs.size() == 10);
}

TEST_CASE("closure is idempotent") {
  std::vector<AgentFormula> clo = {parse_agent("A"), parse_agent("~A")};
  ClosureSet cs = closure(parse_world("C[A] (p & q)"), clo);
  for (const WorldFormula& f : cs.world_formulas) {
    ClosureSet again = closure(f, clo);
    for (const WorldFormula& g : again.world_formulas) CHECK(cs.contains(g));
  }
}

TEST_CASE("closure cap is an error, not truncation") {
  std::vector<AgentFormula> clo = {parse_agent("A"), parse_agent("~A")};
  CHECK_THROWS_AS(closure(parse_world("C[A] (p & q & r)"), clo, 4),
                  ResourceLimitError);
}

TEST_CASE("parse of print is the identity on random core ASTs") {
  testgen::Rng rng(20240817);
  std::vector<std::string> wa{"p", "q", "r"};
  std::vector<std::string> aa{"A", "B"};
  for (int i = 0; i < 200; ++i) {
    WorldFormula f = testgen::random_world_formula(rng, wa, aa, 4, 2);
    CHECK(parse_world(f.to_string()) == f);
  }
  for (int i = 0; i < 100; ++i) {
    AgentFormula f = testgen::random_agent_formula(rng, aa, 4);
    CHECK(parse_agent(f.to_string()) == f);
  }
}

TEST_CASE("closure size bound") {
  testgen::Rng rng(7);
  std::vector<std::string> wa{"p", "q"};
  std::vector<std::string> aa{"A", "B"};
  for (int i = 0; i < 50; ++i) {
    WorldFormula f = testgen::random_world_formula(rng, wa, aa, 3, 1);
    std::vector<AgentFormula> clo;
    for (const AgentFormula& g : agent_subformulae(f)) clo.push_back(g);
    clo.push_back(parse_agent("A & B"));
    ClosureSet cs = closure(f, clo);
    CHECK(cs.size() <= 2 * subformulae(f).size() * (1 + clo.size()));
  }
}

namespace {

// Independent naive fixpoint recomputation of the closure rules.
std::unordered_set<WorldFormula> naive_closure(
    const WorldFormula& root, const std::vector<AgentFormula>& clo) {
  std::unordered_set<WorldFormula> out{root};
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<WorldFormula> snapshot(out.begin(), out.end());
    for (const WorldFormula& f : snapshot) {
      auto add = [&](const WorldFormula& g) {
        if (out.insert(g).second) changed = true;
      };
      add(nneg(f));
      for (const WorldFormula& sub : subformulae(f)) add(sub);
      if (f.kind() == WorldFormula::Kind::Common)
        for (const AgentFormula& psi : clo)
          add(WorldFormula::common(psi, f.body()));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("closure agrees with a naive fixpoint recomputation") {
  testgen::Rng rng(99);
  std::vector<std::string> wa{"p", "q"};
  std::vector<std::string> aa{"A"};
  for (int i = 0; i < 30; ++i) {
    WorldFormula f = testgen::random_world_formula(rng, wa, aa, 3, 1);
    std::vector<AgentFormula> clo;
    for (const AgentFormula& g : agent_subformulae(f)) clo.push_back(g);
    ClosureSet cs = closure(f, clo);
    std::unordered_set<WorldFormula> expected = naive_closure(f, clo);
    CHECK(cs.size() == expected.size());
    for (const WorldFormula& g : cs.world_formulas)
      CHECK(expected.count(g) == 1);
  }
}

TEST_CASE("the parser never crashes on garbage") {
  testgen::Rng rng(1729);
  const std::string alphabet = "pq CP[]()~&|<->_1 \n";
  for (int i = 0; i < 500; ++i) {
    std::string text;
    std::size_t len = testgen::pick(rng, 24);
    for (std::size_t k = 0; k < len; ++k)
      text += alphabet[testgen::pick(rng, alphabet.size())];
    try {
      WorldFormula f = parse_world(text);
      CHECK(parse_world(f.to_string()) == f);
    } catch (const ParseError&) {
      // rejected with a position, which is the other acceptable outcome
    }
  }
}

TEST_CASE("world and agent atoms live in separate namespaces") {
  WorldFormula f = parse_world("C[q] q");
  CHECK(f.index() == AgentFormula::atom("q"));
  CHECK(f.body() == WorldFormula::atom("q"));
  CHECK(f.index().hash() != f.body().hash());
}
