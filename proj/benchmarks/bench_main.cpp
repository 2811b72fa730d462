#include <benchmark/benchmark.h>

#include <random>

#include "ciel/decide.hpp"
#include "ciel/formula.hpp"
#include "ciel/mucalc.hpp"
#include "ciel/proofs.hpp"
#include "ciel/scenarios.hpp"
#include "ciel/semantics.hpp"
#include "ciel/translate.hpp"

namespace {

using namespace ciel;

const char* kCompactness1 = "~C[A | B] p & p & C[A] p & C[B] p";

DecideCaps wide_caps() {
  DecideCaps caps;
  caps.sigma = 512;
  caps.closure = 8192;
  return caps;
}

CielModel bench_model(std::size_t worlds, std::size_t agents) {
  std::mt19937_64 rng(42);
  std::vector<std::string> names;
  std::vector<Agent> agent_list;
  for (std::size_t a = 0; a < agents; ++a) {
    Agent agent;
    agent.name = "a" + std::to_string(a);
    agent.valuation["A"] = a % 2 == 0;
    agent.valuation["B"] = a % 3 == 0;
    agent_list.push_back(std::move(agent));
  }
  std::vector<std::string> world_names;
  for (std::size_t w = 0; w < worlds; ++w)
    world_names.push_back("w" + std::to_string(w));
  std::map<std::string, Bitset> valuation;
  Bitset p(worlds);
  for (std::size_t w = 0; w < worlds; ++w)
    if (rng() & 1) p.set(w);
  valuation["p"] = std::move(p);
  std::vector<Relation> indist;
  for (std::size_t a = 0; a < agents; ++a) {
    std::size_t classes = 1 + rng() % worlds;
    std::vector<std::size_t> cls(worlds);
    for (std::size_t w = 0; w < worlds; ++w) cls[w] = rng() % classes;
    Relation rel;
    for (std::size_t x = 0; x < worlds; ++x)
      for (std::size_t y = 0; y < worlds; ++y)
        if (cls[x] == cls[y]) rel.insert({x, y});
    indist.push_back(std::move(rel));
  }
  return CielModel(std::move(world_names),
                   FilteredAgentModel::from_agents(std::move(agent_list)),
                   std::move(valuation), std::move(indist));
}

void BM_parse(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(parse_world(kCompactness1));
}
BENCHMARK(BM_parse);

void BM_closure(benchmark::State& state) {
  WorldFormula rho = parse_world(kCompactness1);
  FilteredAgentModel fam =
      FilteredAgentModel::filtered(agent_subformulae(rho), {});
  std::vector<AgentFormula> clo = fam.agent_closure();
  for (auto _ : state) benchmark::DoNotOptimize(closure(rho, clo, 8192));
}
BENCHMARK(BM_closure);

void BM_model_check(benchmark::State& state) {
  CielModel m = bench_model(static_cast<std::size_t>(state.range(0)), 4);
  WorldFormula f = parse_world("C[A] (p | C[B] ~p) & ~C[A | B] p");
  for (auto _ : state) benchmark::DoNotOptimize(eval(m, f));
}
BENCHMARK(BM_model_check)->Arg(16)->Arg(64)->Arg(256);

void BM_enumerate_types(benchmark::State& state) {
  WorldFormula rho = parse_world(kCompactness1);
  FilteredAgentModel fam =
      FilteredAgentModel::filtered(agent_subformulae(rho), {});
  ClosureSet sigma = closure(rho, fam.agent_closure(), 8192);
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_types(sigma, fam, 1 << 20));
}
BENCHMARK(BM_enumerate_types);

void BM_sat_compactness(benchmark::State& state) {
  WorldFormula rho = parse_world(kCompactness1);
  DecideCaps caps = wide_caps();
  for (auto _ : state) benchmark::DoNotOptimize(sat(rho, {}, caps));
}
BENCHMARK(BM_sat_compactness);

void BM_gel_oracle(benchmark::State& state) {
  GelFormula f = parse_gel("~C[a, b] p & C[a] p & C[b] p & C[a] C[b] p");
  for (auto _ : state) benchmark::DoNotOptimize(gel_sat(f));
}
BENCHMARK(BM_gel_oracle);

void BM_mu_eval(benchmark::State& state) {
  CielModel m = bench_model(static_cast<std::size_t>(state.range(0)), 3);
  MuModel mu = ciel_model_to_mu(m);
  MuFormula f = translate_t(parse_world("C[A] C[B] p"));
  for (auto _ : state) benchmark::DoNotOptimize(mu_eval(mu, f));
}
BENCHMARK(BM_mu_eval)->Arg(8)->Arg(32);

void BM_muddy_inference(benchmark::State& state) {
  PuzzleSpec spec{1, 3, {0}};
  for (auto _ : state)
    benchmark::DoNotOptimize(check_round_inference(spec, 1));
}
BENCHMARK(BM_muddy_inference);

void BM_gen_ind(benchmark::State& state) {
  std::vector<AgentFormula> psis;
  for (int i = 0; i < state.range(0); ++i)
    psis.push_back(AgentFormula::atom("A" + std::to_string(i)));
  WorldFormula phi = parse_world("p");
  for (auto _ : state) {
    Derivation d = gen_ind_n(psis, phi);
    benchmark::DoNotOptimize(check_derivation(d));
  }
}
BENCHMARK(BM_gen_ind)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
