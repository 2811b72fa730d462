// Acceptance suite: runs every criterion at its stated tolerance and prints
// one verdict line per criterion. Exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <unordered_set>
#include <vector>

#include "ciel/decide.hpp"
#include "ciel/errors.hpp"
#include "ciel/formula.hpp"
#include "ciel/mucalc.hpp"
#include "ciel/proofs.hpp"
#include "ciel/scenarios.hpp"
#include "ciel/semantics.hpp"
#include "ciel/translate.hpp"
#include "support/gen.hpp"

using namespace ciel;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (detail.empty()) detail = why;
  }
};

DecideCaps wide_caps() {
  DecideCaps caps;
  caps.sigma = 512;
  caps.closure = 8192;
  return caps;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Witnesses produced along the way, re-verified by criterion 6.
struct WitnessRecord {
  WorldFormula formula;
  SatResult result;
};
std::vector<WitnessRecord> g_witnesses;

void record_witness(const WorldFormula& f, SatResult r) {
  if (r.satisfiable) g_witnesses.push_back({f, std::move(r)});
}

// ---------------------------------------------------------------------------
// Criterion 1: soundness of the six axiom schemata and two rules, by model
// checking 200 instantiations each on 50 random models, plus 20 small
// instantiations per schema reported valid by the decision procedure.

const std::vector<std::string> kWorldAtoms{"p", "q", "r"};
const std::vector<std::string> kAgentAtoms{"A", "B", "C"};

WorldFormula instantiate_axiom(int schema, testgen::Rng& rng) {
  AgentFormula psi = testgen::random_agent_formula(rng, kAgentAtoms, 2);
  AgentFormula chi = testgen::random_agent_formula(rng, kAgentAtoms, 2);
  WorldFormula phi = testgen::random_world_formula(rng, kWorldAtoms, kAgentAtoms, 3);
  WorldFormula gamma = testgen::random_world_formula(rng, kWorldAtoms, kAgentAtoms, 3);
  switch (schema) {
    case 0:  // (T)
      return WorldFormula::implication(WorldFormula::common(psi, phi), phi);
    case 1:  // (Bot)
      return WorldFormula::implication(
          phi, WorldFormula::common(AgentFormula::falsum(), phi));
    case 2:  // (K)
      return WorldFormula::implication(
          WorldFormula::common(psi, WorldFormula::implication(phi, gamma)),
          WorldFormula::implication(WorldFormula::common(psi, phi),
                                    WorldFormula::common(psi, gamma)));
    case 3: {  // (4)
      WorldFormula box = WorldFormula::common(psi, phi);
      return WorldFormula::implication(box, WorldFormula::common(psi, box));
    }
    case 4: {  // (5)
      WorldFormula nbox =
          WorldFormula::negation(WorldFormula::common(psi, phi));
      return WorldFormula::implication(nbox, WorldFormula::common(psi, nbox));
    }
    default: {  // (Ind)
      AgentFormula join = AgentFormula::disjunction(psi, chi);
      return WorldFormula::implication(
          WorldFormula::common(
              join, WorldFormula::implication(
                        phi, WorldFormula::conjunction(
                                 WorldFormula::common(psi, phi),
                                 WorldFormula::common(chi, phi)))),
          WorldFormula::implication(phi, WorldFormula::common(join, phi)));
    }
  }
}

// Deterministic pools of small instantiations for the validity half.
std::vector<AgentFormula> small_agent_pool() {
  AgentFormula a = AgentFormula::atom("A");
  return {a, AgentFormula::negation(a), AgentFormula::falsum(),
          AgentFormula::top()};
}

std::vector<WorldFormula> small_world_pool() {
  WorldFormula p = WorldFormula::atom("p");
  WorldFormula q = WorldFormula::atom("q");
  std::vector<WorldFormula> pool{p, q, WorldFormula::negation(p),
                                 WorldFormula::negation(q)};
  for (const WorldFormula& l : {p, q})
    for (const WorldFormula& r : {p, q, WorldFormula::negation(p)}) {
      pool.push_back(WorldFormula::conjunction(l, r));
      pool.push_back(WorldFormula::disjunction(l, r));
      pool.push_back(WorldFormula::implication(l, r));
    }
  pool.push_back(WorldFormula::top());
  pool.push_back(WorldFormula::falsum());
  return pool;
}

std::optional<std::size_t> closure_size_of(const WorldFormula& f,
                                           std::size_t cap) {
  try {
    FilteredAgentModel fam = FilteredAgentModel::filtered(agent_subformulae(f), {});
    return closure(f, fam.agent_closure(), cap).size();
  } catch (const ResourceLimitError&) {
    return std::nullopt;
  }
}

Verdict criterion1() {
  Verdict v;
  testgen::Rng rng(101);
  std::vector<CielModel> models;
  for (int i = 0; i < 50; ++i)
    models.push_back(
        testgen::random_ciel_model(rng, 8, 4, kWorldAtoms, kAgentAtoms));

  const char* names[] = {"T", "Bot", "K", "4", "5", "Ind"};
  for (int schema = 0; schema < 6; ++schema) {
    for (int i = 0; i < 200; ++i) {
      WorldFormula instance = instantiate_axiom(schema, rng);
      for (const CielModel& m : models)
        if (!eval(m, instance).all()) {
          v.fail(std::string("countermodel for axiom (") + names[schema] + ")");
          return v;
        }
    }
  }

  // rule (Nec): global truth of the premise forces global truth of the
  // conclusion, per model
  for (int i = 0; i < 200; ++i) {
    AgentFormula psi = testgen::random_agent_formula(rng, kAgentAtoms, 2);
    WorldFormula phi =
        testgen::random_world_formula(rng, kWorldAtoms, kAgentAtoms, 3);
    for (const CielModel& m : models)
      if (eval(m, phi).all() && !eval(m, WorldFormula::common(psi, phi)).all()) {
        v.fail("countermodel for rule (Nec)");
        return v;
      }
  }
  // rule (AM): a valid agent implication makes C antimonotone in the index
  for (int i = 0; i < 200; ++i) {
    AgentFormula psi = testgen::random_agent_formula(rng, kAgentAtoms, 2);
    AgentFormula gamma = AgentFormula::falsum();
    switch (i % 3) {
      case 0:
        gamma = AgentFormula::conjunction(
            psi, testgen::random_agent_formula(rng, kAgentAtoms, 2));
        break;
      case 1:
        break;  // falsum entails everything
      default:
        gamma = psi;
        break;
    }
    if (!entails(gamma, psi)) continue;
    WorldFormula phi =
        testgen::random_world_formula(rng, kWorldAtoms, kAgentAtoms, 3);
    for (const CielModel& m : models)
      if (!eval(m, WorldFormula::common(psi, phi))
               .is_subset_of(eval(m, WorldFormula::common(gamma, phi)))) {
        v.fail("countermodel for rule (AM)");
        return v;
      }
  }

  // validity of 20 small instantiations per schema, closure capped at 40
  DecideCaps caps;
  caps.sigma = 40;
  caps.closure = 8192;
  std::vector<AgentFormula> agents = small_agent_pool();
  std::vector<WorldFormula> worlds = small_world_pool();
  WorldFormula default_world = worlds[0];
  AgentFormula default_agent = agents[0];
  for (int schema = 0; schema < 6; ++schema) {
    // only (K) ranges over gamma; only (Ind) ranges over chi
    std::vector<WorldFormula> gammas =
        schema == 2 ? worlds : std::vector<WorldFormula>{default_world};
    std::vector<AgentFormula> chis =
        schema == 5 ? agents : std::vector<AgentFormula>{default_agent};
    std::unordered_set<WorldFormula> seen;
    int found = 0;
    for (const AgentFormula& psi : agents) {
      for (const AgentFormula& chi : chis) {
        for (const WorldFormula& phi : worlds) {
          for (const WorldFormula& gamma : gammas) {
            if (found >= 20) break;
            WorldFormula instance = [&] {
              switch (schema) {
                case 0:
                  return WorldFormula::implication(
                      WorldFormula::common(psi, phi), phi);
                case 1:
                  return WorldFormula::implication(
                      phi, WorldFormula::common(AgentFormula::falsum(), phi));
                case 2:
                  return WorldFormula::implication(
                      WorldFormula::common(psi,
                                           WorldFormula::implication(phi, gamma)),
                      WorldFormula::implication(WorldFormula::common(psi, phi),
                                                WorldFormula::common(psi, gamma)));
                case 3: {
                  WorldFormula box = WorldFormula::common(psi, phi);
                  return WorldFormula::implication(
                      box, WorldFormula::common(psi, box));
                }
                case 4: {
                  WorldFormula nbox =
                      WorldFormula::negation(WorldFormula::common(psi, phi));
                  return WorldFormula::implication(
                      nbox, WorldFormula::common(psi, nbox));
                }
                default: {
                  AgentFormula join = AgentFormula::disjunction(psi, chi);
                  return WorldFormula::implication(
                      WorldFormula::common(
                          join,
                          WorldFormula::implication(
                              phi, WorldFormula::conjunction(
                                       WorldFormula::common(psi, phi),
                                       WorldFormula::common(chi, phi)))),
                      WorldFormula::implication(
                          phi, WorldFormula::common(join, phi)));
                }
              }
            }();
            if (!seen.insert(instance).second) continue;
            if (!closure_size_of(nneg(instance), 40)) continue;
            ++found;
            if (!valid(instance, {}, caps)) {
              v.fail(std::string("axiom (") + names[schema] +
                     ") instantiation not reported valid: " +
                     instance.to_string());
              return v;
            }
          }
          if (found >= 20) break;
        }
        if (found >= 20) break;
      }
      if (found >= 20) break;
    }
    if (found < 20) {
      v.fail(std::string("only ") + std::to_string(found) +
             " small instantiations found for (" + names[schema] + ")");
      return v;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 2: reachability checking and greatest-fixpoint iteration agree.

Verdict criterion2() {
  Verdict v;
  testgen::Rng rng(202);
  for (int i = 0; i < 500; ++i) {
    CielModel m = testgen::random_ciel_model(rng, 8, 4, kWorldAtoms, kAgentAtoms);
    WorldFormula f = testgen::random_c_formula(rng, kWorldAtoms, kAgentAtoms, 3);
    if (check_gfp(m, f) != eval(m, f)) {
      v.fail("fixpoint and reachability disagree on " + f.to_string());
      return v;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 3: the GEL encoding preserves satisfiability on an exhaustive
// corpus, and truth pointwise on random model pairs.

void enumerate_gel(std::size_t max_size, std::size_t max_depth,
                   std::vector<GelFormula>& corpus) {
  std::vector<std::vector<std::pair<GelFormula, std::size_t>>> by_size(
      max_size + 1);
  by_size[1] = {{GelFormula::falsum(), 0},
                {GelFormula::atom("p"), 0},
                {GelFormula::atom("q"), 0}};
  std::vector<std::vector<std::string>> groups{{"a"}, {"b"}, {"a", "b"}};
  for (std::size_t size = 2; size <= max_size; ++size) {
    for (const auto& [f, depth] : by_size[size - 1]) {
      by_size[size].push_back({GelFormula::negation(f), depth});
      if (depth + 1 <= max_depth)
        for (const auto& g : groups)
          by_size[size].push_back({GelFormula::common(g, f), depth + 1});
    }
    for (std::size_t left = 1; left + 1 < size; ++left)
      for (const auto& [l, dl] : by_size[left])
        for (const auto& [r, dr] : by_size[size - 1 - left])
          by_size[size].push_back(
              {GelFormula::conjunction(l, r), std::max(dl, dr)});
  }
  std::unordered_set<GelFormula> seen;
  for (const auto& level : by_size)
    for (const auto& [f, depth] : level)
      if (seen.insert(f).second) corpus.push_back(f);
}

Verdict criterion3() {
  Verdict v;
  std::vector<GelFormula> corpus;
  enumerate_gel(5, 2, corpus);
  DecideCaps caps = wide_caps();
  std::size_t mismatches = 0;
  for (const GelFormula& f : corpus) {
    WorldFormula qf = gel_to_ciel(f);
    SatResult r = sat(qf, {}, caps);
    if (gel_sat(f) != r.satisfiable) {
      ++mismatches;
      if (mismatches == 1)
        v.fail("gel_sat and sat(q(.)) disagree on " + f.to_string());
    }
    record_witness(qf, std::move(r));
  }
  if (mismatches > 0) {
    v.fail("");
    v.detail += " (" + std::to_string(mismatches) + "/" +
                std::to_string(corpus.size()) + " mismatches)";
    return v;
  }
  v.detail = std::to_string(corpus.size()) + " formulas";

  testgen::Rng rng(303);
  for (int i = 0; i < 200; ++i) {
    GelModel g = testgen::random_gel_model(rng, 6, {"p", "q"}, {"a", "b"});
    GelFormula f = testgen::random_gel_formula(rng, {"p", "q"}, {"a", "b"}, 2);
    CielModel c = gel_model_to_ciel(g);
    WorldFormula qf = gel_to_ciel(f);
    for (std::size_t w = 0; w < g.world_count(); ++w)
      if (check_gel(g, w, f) != check(c, w, qf)) {
        v.fail("q fails to preserve truth at a world");
        return v;
      }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 4: the mu-calculus encoding preserves truth through both model
// constructions, and stays linear in size.

Verdict criterion4() {
  Verdict v;
  testgen::Rng rng(404);
  for (int i = 0; i < 200; ++i) {
    CielModel m = testgen::random_ciel_model(rng, 5, 3, {"p", "q"}, {"A", "B"});
    WorldFormula f =
        testgen::random_world_formula(rng, {"p", "q"}, {"A", "B"}, 3);
    if (translate_t(f).size() > 10 * f.size()) {
      v.fail("t exceeded the linear size bound on " + f.to_string());
      return v;
    }
    MuModel mu = ciel_model_to_mu(m);
    Bitset extent = mu_eval(mu, translate_t(f));
    for (std::size_t x = 0; x < m.world_count(); ++x)
      if (check(m, x, f) !=
          extent.test(mu.element_index("w:" + m.world_name(x)))) {
        v.fail("forward truth agreement fails on " + f.to_string());
        return v;
      }
  }
  for (int i = 0; i < 100; ++i) {
    MuModel mu = testgen::random_mu_model(rng, 6, {"p", "q"});
    WorldFormula f =
        testgen::random_world_formula(rng, {"p", "q"}, {"p", "q"}, 2);
    if (translate_t(f).size() > 10 * f.size()) {
      v.fail("t exceeded the linear size bound on " + f.to_string());
      return v;
    }
    CielModel m = mu_model_to_ciel(mu);
    Bitset extent = mu_eval(mu, translate_t(f));
    for (std::size_t x = 0; x < m.world_count(); ++x)
      if (check(m, x, f) != extent.test(x)) {
        v.fail("reverse truth agreement fails on " + f.to_string());
        return v;
      }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 5: the compactness-remark instances are satisfiable for every
// prefix length up to 2, with checkable witnesses.

Verdict criterion5() {
  Verdict v;
  DecideCaps caps = wide_caps();
  for (int m_len = 0; m_len <= 2; ++m_len) {
    WorldFormula f = parse_world("~C[A | B] p");
    std::vector<std::vector<std::string>> levels{{""}};
    for (int length = 1; length <= m_len; ++length) {
      std::vector<std::string> next;
      for (const std::string& p : levels.back())
        for (const char* d : {"C[A] ", "C[B] "}) next.push_back(p + d);
      levels.push_back(next);
    }
    for (const auto& level : levels)
      for (const std::string& prefix : level)
        f = WorldFormula::conjunction(f, parse_world(prefix + "p"));
    SatResult r = sat(f, {}, caps);
    if (!r.satisfiable) {
      v.fail("prefix length " + std::to_string(m_len) + " reported UNSAT");
      return v;
    }
    if (!check(*r.witness, r.start_world, f)) {
      v.fail("witness fails to check at prefix length " + std::to_string(m_len));
      return v;
    }
    record_witness(f, std::move(r));
  }
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 6: every Sat verdict recorded by the suites above stays within
// the bounded model property and re-verifies by model checking.

Verdict criterion6() {
  Verdict v;
  if (g_witnesses.empty()) {
    v.fail("no witnesses were recorded");
    return v;
  }
  for (const WitnessRecord& w : g_witnesses) {
    double bound = std::pow(2.0, static_cast<double>(w.result.stats.sigma_size));
    if (static_cast<double>(w.result.witness->world_count()) > bound) {
      v.fail("a witness exceeds 2^|closure| worlds");
      return v;
    }
    if (!check(*w.result.witness, w.result.start_world, w.formula)) {
      v.fail("a witness fails re-verification for " + w.formula.to_string());
      return v;
    }
  }
  v.detail = std::to_string(g_witnesses.size()) + " witnesses";
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 7: the muddy-children round inference on the 8-world instance.

Verdict criterion7() {
  Verdict v;
  if (!check_round_inference(PuzzleSpec{1, 3, {0}}, 1))
    v.fail("x = 0 inference fails");
  if (!check_round_inference(PuzzleSpec{1, 3, {1}}, 1))
    v.fail("x = 1 inference fails");
  if (check_round_inference(PuzzleSpec{1, 3, {0}}, 1, false))
    v.fail("negative control not detected");
  CielModel m = build_puzzle_model(PuzzleSpec{1, 3, {0}});
  if (m.world_count() != 8 || m.agent_model().agent_count() != 3)
    v.fail("unexpected model size");
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 8: proof objects. Generated induction derivations for n = 0..4,
// a corpus of hand-written derivations, and mutated copies that must be
// rejected at their corrupted line.

Verdict criterion8() {
  Verdict v;
  std::vector<AgentFormula> psis{parse_agent("A"), parse_agent("B"),
                                 parse_agent("A & B"), parse_agent("~A")};
  for (std::size_t n = 0; n <= 4; ++n) {
    std::vector<AgentFormula> prefix(psis.begin(), psis.begin() + n);
    Derivation d = gen_ind_n(prefix, parse_world("p & q"));
    CheckReport r = check_derivation(d);
    if (!r.accepted) {
      v.fail("gen_ind_n(" + std::to_string(n) + ") rejected at line " +
             std::to_string(r.fail_line) + ": " + r.message);
      return v;
    }
    if (d.lines.back().formula != ind_gen_formula(prefix, parse_world("p & q"))) {
      v.fail("gen_ind_n(" + std::to_string(n) + ") concludes the wrong formula");
      return v;
    }
  }

  const std::string dir = CIEL_TEST_DATA_DIR;
  const char* good[] = {"d01_t_bot.c5",        "d02_k_mono.c5",
                        "d03_commute_and.c5",  "d04_commute_conv.c5",
                        "d05_index_repl.c5",   "d06_am_applied.c5",
                        "d07_four_chain.c5",   "d08_five_iff.c5",
                        "d09_ind_import.c5",   "d10_bot_iff.c5"};
  for (const char* name : good) {
    Derivation d = parse_derivation(read_file(dir + "/derivations/" + name));
    CheckReport r = check_derivation(d);
    if (!r.accepted) {
      v.fail(std::string(name) + " rejected at line " +
             std::to_string(r.fail_line) + ": " + r.message);
      return v;
    }
  }

  struct Bad {
    const char* name;
    std::size_t line;
  };
  const Bad bad[] = {{"bad01_t_shape.c5", 1},      {"bad02_mp_swap.c5", 4},
                     {"bad03_nec_index.c5", 2},    {"bad04_am_side.c5", 1},
                     {"bad05_am_premise.c5", 3},   {"bad06_taut.c5", 3},
                     {"bad07_bot_index.c5", 2},    {"bad08_forward_ref.c5", 10},
                     {"bad09_k_swap.c5", 5},       {"bad10_ind_order.c5", 1}};
  for (const Bad& b : bad) {
    Derivation d =
        parse_derivation(read_file(dir + "/derivations/bad/" + b.name));
    CheckReport r = check_derivation(d);
    if (r.accepted) {
      v.fail(std::string(b.name) + " was accepted");
      return v;
    }
    if (r.fail_line != b.line) {
      v.fail(std::string(b.name) + " rejected at line " +
             std::to_string(r.fail_line) + ", expected " +
             std::to_string(b.line));
      return v;
    }
  }
  return v;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* title;
    Verdict (*run)();
  };
  const Entry entries[] = {
      {1, "C5 soundness: axioms and rules model-checked, small instances valid",
       criterion1},
      {2, "fixpoint characterization: check_gfp agrees with check", criterion2},
      {3, "GEL encoding q: satisfiability and pointwise truth preserved",
       criterion3},
      {4, "mu-calculus encoding t: truth agreement both ways, linear size",
       criterion4},
      {5, "compactness instances satisfiable with checkable witnesses",
       criterion5},
      {6, "bounded model property and witness re-verification", criterion6},
      {7, "muddy children round inference with negative control", criterion7},
      {8, "proof objects: generated, shipped and mutated derivations",
       criterion8},
  };

  int failures = 0;
  for (const Entry& e : entries) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = e.run();
    } catch (const std::exception& ex) {
      v.pass = false;
      v.detail = std::string("exception: ") + ex.what();
    }
    auto seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    std::cout << (v.pass ? "[PASS]" : "[FAIL]") << " criterion " << e.id
              << ": " << e.title;
    if (!v.detail.empty()) std::cout << " — " << v.detail;
    std::cout << "  [" << std::fixed << std::setprecision(1) << seconds
              << "s]\n";
    std::cout.unsetf(std::ios_base::fixed);
    if (!v.pass) ++failures;
  }
  std::cout << (8 - failures) << "/8 criteria passed\n";
  return failures == 0 ? 0 : 1;
}
