#include "ciel/mucalc.hpp"

#include "ciel/errors.hpp"
#include "doctest.h"
#include "support/gen.hpp"

using namespace ciel;

namespace {

Program edge{kEdgeProgram, false};
Program pi1{kPi1Program, false};
Program pi2{kPi2Program, false};

Bitset bits(std::initializer_list<bool> values) {
  Bitset b(values.size());
  std::size_t i = 0;
  for (bool v : values) {
    if (v) b.set(i);
    ++i;
  }
  return b;
}

}  // namespace

TEST_CASE("nu accepts positive and rejects negative occurrences of z") {
  MuFormula z = MuFormula::var();
  MuFormula p = MuFormula::atom("p");
  CHECK_NOTHROW(MuFormula::nu(z));
  CHECK_NOTHROW(MuFormula::nu(MuFormula::conjunction(p, MuFormula::box(edge, z))));
  CHECK_NOTHROW(MuFormula::nu(MuFormula::negation(MuFormula::negation(z))));
  CHECK_NOTHROW(MuFormula::nu(MuFormula::box(Program{kEdgeProgram, true}, z)));
  CHECK_NOTHROW(MuFormula::nu(MuFormula::diamond(edge, z)));  // two negations
  CHECK_NOTHROW(MuFormula::nu(MuFormula::implication(p, z)));

  CHECK_THROWS_AS(MuFormula::nu(MuFormula::negation(z)), ModelError);
  CHECK_THROWS_AS(
      MuFormula::nu(MuFormula::negation(MuFormula::conjunction(z, p))),
      ModelError);
  CHECK_THROWS_AS(MuFormula::nu(MuFormula::implication(z, p)), ModelError);
  CHECK_THROWS_AS(
      MuFormula::nu(MuFormula::diamond(edge, MuFormula::negation(z))),
      ModelError);
  // occurrences under a nested nu are bound there and do not count
  CHECK_NOTHROW(MuFormula::nu(
      MuFormula::conjunction(p, MuFormula::nu(MuFormula::var()))));
}

TEST_CASE("closedness") {
  CHECK(MuFormula::var().closed() == false);
  CHECK(MuFormula::nu(MuFormula::var()).closed());
  CHECK(MuFormula::atom("p").closed());
}

TEST_CASE("basic evaluation clauses") {
  MuModel m({"d0", "d1"}, {{kEdgeProgram, Relation{{0, 1}}}},
            {{"p", bits({true, false})}});
  Bitset u = bits({false, true});
  CHECK(mu_eval(m, MuFormula::var(), u) == u);
  CHECK(mu_eval(m, MuFormula::nu(MuFormula::var())) == Bitset(2, true));
  CHECK(mu_eval(m, MuFormula::falsum()) == Bitset(2));
  // [edge]p at d0 iff p at d1; d1 has no successors
  CHECK(mu_eval(m, MuFormula::box(edge, MuFormula::atom("p"))) ==
        bits({false, true}));
  CHECK(mu_eval(m, MuFormula::diamond(edge, MuFormula::atom("p"))) ==
        bits({false, false}));
  CHECK(mu_eval(m, MuFormula::diamond(
                       edge, MuFormula::negation(MuFormula::atom("p")))) ==
        bits({true, false}));
  // converse: [edge^-]p at d1 iff p at d0
  CHECK(mu_eval(m, MuFormula::box(Program{kEdgeProgram, true},
                                  MuFormula::atom("p"))) == bits({true, true}));
}

TEST_CASE("greatest fixpoint on a chain") {
  // d0 -> d1 -> d2; nu z. p & [edge]z asks for p along every path
  MuModel all({"d0", "d1", "d2"},
              {{kEdgeProgram, Relation{{0, 1}, {1, 2}}}},
              {{"p", bits({true, true, true})}});
  MuFormula inv = MuFormula::nu(MuFormula::conjunction(
      MuFormula::atom("p"), MuFormula::box(edge, MuFormula::var())));
  CHECK(mu_eval(all, inv) == bits({true, true, true}));

  MuModel broken({"d0", "d1", "d2"},
                 {{kEdgeProgram, Relation{{0, 1}, {1, 2}}}},
                 {{"p", bits({true, true, false})}});
  CHECK(mu_eval(broken, inv) == bits({false, false, false}));
}

TEST_CASE("nu iterates downward and converges within the domain size") {
  testgen::Rng rng(11);
  for (int i = 0; i < 30; ++i) {
    MuModel m = testgen::random_mu_model(rng, 7, {"p"});
    MuFormula body = MuFormula::conjunction(
        MuFormula::atom("p"), MuFormula::box(edge, MuFormula::var()));
    Bitset z(m.element_count(), true);
    std::size_t steps = 0;
    for (;;) {
      Bitset next = mu_eval(m, body, z);
      CHECK(next.is_subset_of(z));
      if (next == z) break;
      z = next;
      ++steps;
      REQUIRE(steps <= m.element_count());
    }
    CHECK(z == mu_eval(m, MuFormula::nu(body)));
  }
}

TEST_CASE("mu is the dual least fixpoint") {
  // mu z. p | <edge>z: the states that can reach p
  MuModel m({"d0", "d1", "d2", "d3"},
            {{kEdgeProgram, Relation{{0, 1}, {1, 2}}}},
            {{"p", bits({false, false, true, false})}});
  MuFormula reach = MuFormula::mu(MuFormula::disjunction(
      MuFormula::atom("p"), MuFormula::diamond(edge, MuFormula::var())));
  CHECK(mu_eval(m, reach) == bits({true, true, true, false}));
  CHECK(mu_eval(m, MuFormula::mu(MuFormula::var())) == Bitset(4));
}

TEST_CASE("t matches the encoding shape") {
  CHECK(translate_t(parse_world("p")) == MuFormula::atom("p"));
  CHECK(translate_t(parse_world("~p & q")) ==
        MuFormula::conjunction(MuFormula::negation(MuFormula::atom("p")),
                               MuFormula::atom("q")));
  // nu z. p /\ [edge](<pi1>q -> [pi2]z) /\ [pi2^-](<pi1>q -> [edge^-]z)
  MuFormula q = MuFormula::atom("q");
  MuFormula z = MuFormula::var();
  MuFormula forward = MuFormula::box(
      edge, MuFormula::implication(MuFormula::diamond(pi1, q),
                                   MuFormula::box(pi2, z)));
  MuFormula backward = MuFormula::box(
      Program{kPi2Program, true},
      MuFormula::implication(MuFormula::diamond(pi1, q),
                             MuFormula::box(Program{kEdgeProgram, true}, z)));
  MuFormula expected = MuFormula::nu(MuFormula::conjunction(
      MuFormula::conjunction(MuFormula::atom("p"), forward), backward));
  CHECK(translate_t(parse_world("C[q] p")) == expected);
  CHECK(translate_t(parse_world("C[q] p")).to_string() ==
        "nu z. p & [edge] (<pi1> q -> [pi2] z) & "
        "[pi2^-] (<pi1> q -> [edge^-] z)");
}

TEST_CASE("t rejects atoms that shadow the reserved programs") {
  CHECK_THROWS_AS(translate_t(parse_world("C[q] edge")), ModelError);
  CHECK_THROWS_AS(translate_t(parse_world("C[pi1] p")), ModelError);
}

TEST_CASE("t is size-linear") {
  testgen::Rng rng(12);
  std::vector<std::string> wa{"p", "q", "r"};
  std::vector<std::string> aa{"A", "B", "C"};
  for (int i = 0; i < 200; ++i) {
    WorldFormula f = testgen::random_world_formula(rng, wa, aa, 3);
    CHECK(translate_t(f).size() <= 10 * f.size());
  }
}

TEST_CASE("the encoded model has the expected layout") {
  testgen::Rng rng(13);
  CielModel m = testgen::random_ciel_model(rng, 4, 3, {"p"}, {"A"});
  MuModel mu = ciel_model_to_mu(m);
  std::size_t na = m.agent_model().agent_count();
  std::size_t nw = m.world_count();
  CHECK(mu.element_count() == na + nw + na * nw);

  // one world, one agent, reflexive relation: exactly one edge pair
  std::vector<Agent> one_agent{{"a", {{"A", true}}}};
  CielModel tiny({"w"}, FilteredAgentModel::from_agents(one_agent),
                 {{"p", Bitset(1, true)}}, {Relation{{0, 0}}});
  MuModel tiny_mu = ciel_model_to_mu(tiny);
  CHECK(tiny_mu.transitions().at(kEdgeProgram).size() == 1);
  CHECK(tiny_mu.transitions().at(kPi1Program).size() == 1);
  CHECK(tiny_mu.transitions().at(kPi2Program).size() == 1);
}

TEST_CASE("truth agreement: CIEL model into mu-calculus") {
  testgen::Rng rng(14);
  std::vector<std::string> wa{"p", "q"};
  std::vector<std::string> aa{"A", "B"};
  for (int i = 0; i < 60; ++i) {
    CielModel m = testgen::random_ciel_model(rng, 5, 3, wa, aa);
    WorldFormula f = testgen::random_world_formula(rng, wa, aa, 3);
    MuModel mu = ciel_model_to_mu(m);
    MuFormula tf = translate_t(f);
    Bitset mu_extent = mu_eval(mu, tf);
    for (std::size_t x = 0; x < m.world_count(); ++x) {
      std::size_t elem = mu.element_index("w:" + m.world_name(x));
      CHECK(check(m, x, f) == mu_extent.test(elem));
    }
  }
}

TEST_CASE("truth agreement: mu model into CIEL") {
  testgen::Rng rng(15);
  std::vector<std::string> wa{"p", "q"};
  std::vector<std::string> aa{"p", "q"};  // atoms double as agent atoms
  for (int i = 0; i < 40; ++i) {
    MuModel mu = testgen::random_mu_model(rng, 6, {"p", "q"});
    CielModel m = mu_model_to_ciel(mu);
    WorldFormula f = testgen::random_world_formula(rng, wa, aa, 2);
    MuFormula tf = translate_t(f);
    Bitset mu_extent = mu_eval(mu, tf);
    for (std::size_t x = 0; x < m.world_count(); ++x)
      CHECK(check(m, x, f) == mu_extent.test(x));
  }
}

TEST_CASE("an empty edge relation yields identity relations") {
  MuModel mu({"d0", "d1"}, {}, {{"p", bits({true, false})}});
  CielModel m = mu_model_to_ciel(mu);
  for (std::size_t a = 0; a < m.agent_model().agent_count(); ++a)
    CHECK(m.relation(a) == Relation{{0, 0}, {1, 1}});
}

TEST_CASE("round trip through the mu encoding keeps the original relations") {
  testgen::Rng rng(16);
  CielModel m = testgen::random_ciel_model(rng, 4, 2, {"p"}, {"A"});
  CielModel back = mu_model_to_ciel(ciel_model_to_mu(m));
  // the original worlds embed as "w:..."; their relations must survive
  for (std::size_t a = 0; a < m.agent_model().agent_count(); ++a) {
    std::size_t agent_elem = back.world_index("a:" + m.agent_model().agent(a).name);
    for (auto [x, y] : m.relation(a)) {
      std::size_t bx = back.world_index("w:" + m.world_name(x));
      std::size_t by = back.world_index("w:" + m.world_name(y));
      CHECK(back.relation(agent_elem).count({bx, by}) == 1);
    }
  }
}
