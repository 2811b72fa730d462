#include "ciel/scenarios.hpp"

#include <algorithm>
#include <map>

#include "ciel/errors.hpp"

namespace ciel {

namespace {

std::size_t count_subset_bits(std::size_t mask) {
  std::size_t n = 0;
  while (mask) {
    mask &= mask - 1;
    ++n;
  }
  return n;
}

}  // namespace

void PuzzleSpec::validate() const {
  if (rows < 1) throw ModelError("puzzle needs at least one row");
  if (cols < 2)
    throw ModelError("puzzle needs at least two columns "
                     "(every bit must be seen by some agent)");
  if (rounds.size() != rows)
    throw ModelError("puzzle needs one round counter per row");
  for (std::size_t x : rounds)
    if (x >= cols) throw ModelError("round counters must stay below the column count");
}

std::string puzzle_world_atom(std::size_t row, std::size_t col) {
  return "p_" + std::to_string(row) + "_" + std::to_string(col);
}

std::string puzzle_agent_atom(std::size_t row, std::size_t col) {
  return "h_" + std::to_string(row) + "_" + std::to_string(col);
}

WorldFormula alpha_leq(const PuzzleSpec& spec, std::size_t row, std::size_t x) {
  spec.validate();
  if (row < 1 || row > spec.rows) throw ModelError("row out of range");
  if (x > spec.cols) throw ModelError("alpha_leq bound exceeds the column count");
  std::size_t k = spec.cols;
  std::vector<WorldFormula> disjuncts;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    if (count_subset_bits(mask) > x) continue;
    // Sign pattern of row `row` with exactly the columns of `mask` set.
    std::vector<WorldFormula> signs;
    for (std::size_t col = 1; col <= k; ++col) {
      WorldFormula p = WorldFormula::atom(puzzle_world_atom(row, col));
      signs.push_back((mask >> (col - 1)) & 1u ? p : WorldFormula::negation(p));
    }
    WorldFormula conj = signs[0];
    for (std::size_t i = 1; i < signs.size(); ++i)
      conj = WorldFormula::conjunction(conj, signs[i]);
    disjuncts.push_back(std::move(conj));
  }
  WorldFormula out = disjuncts[0];
  for (std::size_t i = 1; i < disjuncts.size(); ++i)
    out = WorldFormula::disjunction(out, disjuncts[i]);
  return out;
}

namespace {

WorldFormula conjoin(const std::vector<WorldFormula>& parts) {
  WorldFormula out = parts.at(0);
  for (std::size_t i = 1; i < parts.size(); ++i)
    out = WorldFormula::conjunction(out, parts[i]);
  return out;
}

}  // namespace

WorldFormula visibility_axiom(const PuzzleSpec& spec) {
  spec.validate();
  std::vector<WorldFormula> parts;
  for (std::size_t j = 1; j <= spec.rows; ++j)
    for (std::size_t i = 1; i <= spec.cols; ++i) {
      WorldFormula p = WorldFormula::atom(puzzle_world_atom(j, i));
      AgentFormula sees =
          AgentFormula::negation(AgentFormula::atom(puzzle_agent_atom(j, i)));
      parts.push_back(
          WorldFormula::implication(p, WorldFormula::common(sees, p)));
      parts.push_back(WorldFormula::implication(
          WorldFormula::negation(p),
          WorldFormula::common(sees, WorldFormula::negation(p))));
    }
  return WorldFormula::common(AgentFormula::top(), conjoin(parts));
}

WorldFormula initial_knowledge(const PuzzleSpec& spec) {
  spec.validate();
  std::vector<WorldFormula> parts;
  for (std::size_t j = 1; j <= spec.rows; ++j)
    parts.push_back(WorldFormula::negation(alpha_leq(spec, j, 0)));
  return WorldFormula::common(AgentFormula::top(), conjoin(parts));
}

WorldFormula uncertainty_row(const PuzzleSpec& spec, std::size_t row) {
  spec.validate();
  if (row < 1 || row > spec.rows) throw ModelError("row out of range");
  std::vector<WorldFormula> parts;
  for (std::size_t i = 1; i <= spec.cols; ++i) {
    WorldFormula p = WorldFormula::atom(puzzle_world_atom(row, i));
    AgentFormula blind = AgentFormula::atom(puzzle_agent_atom(row, i));
    parts.push_back(
        WorldFormula::negation(WorldFormula::common(blind, p)));
    parts.push_back(WorldFormula::negation(
        WorldFormula::common(blind, WorldFormula::negation(p))));
  }
  return WorldFormula::common(AgentFormula::top(), conjoin(parts));
}

WorldFormula uncertainty_announcement(const PuzzleSpec& spec) {
  spec.validate();
  std::vector<WorldFormula> parts;
  for (std::size_t j = 1; j <= spec.rows; ++j)
    for (std::size_t i = 1; i <= spec.cols; ++i) {
      WorldFormula p = WorldFormula::atom(puzzle_world_atom(j, i));
      AgentFormula blind = AgentFormula::atom(puzzle_agent_atom(j, i));
      parts.push_back(WorldFormula::negation(WorldFormula::common(blind, p)));
      parts.push_back(WorldFormula::negation(
          WorldFormula::common(blind, WorldFormula::negation(p))));
    }
  return WorldFormula::common(AgentFormula::top(), conjoin(parts));
}

WorldFormula invariant_formula(const PuzzleSpec& spec) {
  spec.validate();
  std::vector<WorldFormula> parts;
  for (std::size_t j = 1; j <= spec.rows; ++j)
    parts.push_back(WorldFormula::negation(alpha_leq(spec, j, spec.rounds[j - 1])));
  return WorldFormula::common(AgentFormula::top(), conjoin(parts));
}

AgentTheory puzzle_theory(const PuzzleSpec& spec) {
  spec.validate();
  AgentTheory theory;
  for (std::size_t j = 1; j <= spec.rows; ++j) {
    AgentFormula at_least = AgentFormula::atom(puzzle_agent_atom(j, 1));
    for (std::size_t i = 2; i <= spec.cols; ++i)
      at_least = AgentFormula::disjunction(
          at_least, AgentFormula::atom(puzzle_agent_atom(j, i)));
    theory.constraints.push_back(at_least);
    for (std::size_t i = 1; i <= spec.cols; ++i)
      for (std::size_t i2 = i + 1; i2 <= spec.cols; ++i2)
        theory.constraints.push_back(AgentFormula::negation(
            AgentFormula::conjunction(AgentFormula::atom(puzzle_agent_atom(j, i)),
                                      AgentFormula::atom(puzzle_agent_atom(j, i2)))));
  }
  return theory;
}

namespace {

// Bit of position (row j, column i) in a world mask, 1-based.
std::size_t bit_of(const PuzzleSpec& spec, std::size_t j, std::size_t i) {
  return (j - 1) * spec.cols + (i - 1);
}

std::string world_name(const PuzzleSpec& spec, std::size_t mask) {
  std::string name = "w";
  for (std::size_t j = 1; j <= spec.rows; ++j) {
    if (j > 1) name += '_';
    for (std::size_t i = 1; i <= spec.cols; ++i)
      name += (mask >> bit_of(spec, j, i)) & 1u ? '1' : '0';
  }
  return name;
}

// Invisibility types enumerated as mixed-radix digits, one column per row.
std::vector<std::vector<std::size_t>> invisibility_types(const PuzzleSpec& spec) {
  std::vector<std::vector<std::size_t>> types;
  std::vector<std::size_t> current(spec.rows, 1);
  for (;;) {
    types.push_back(current);
    std::size_t j = 0;
    while (j < spec.rows && current[j] == spec.cols) {
      current[j] = 1;
      ++j;
    }
    if (j == spec.rows) break;
    ++current[j];
  }
  return types;
}

std::string agent_name(const std::vector<std::size_t>& type) {
  std::string name = "blind";
  for (std::size_t col : type) name += "_" + std::to_string(col);
  return name;
}

}  // namespace

CielModel build_puzzle_model(const PuzzleSpec& spec, std::size_t world_cap,
                             std::size_t agent_cap) {
  spec.validate();
  std::size_t bits = spec.rows * spec.cols;
  if (bits >= 63 || (std::size_t{1} << bits) > world_cap)
    throw ResourceLimitError("puzzle world cap exceeded: 2^" +
                             std::to_string(bits) + " matrices");
  std::size_t world_count = std::size_t{1} << bits;

  std::vector<std::vector<std::size_t>> types = invisibility_types(spec);
  if (types.size() > agent_cap)
    throw ResourceLimitError("puzzle agent cap exceeded: " +
                             std::to_string(types.size()) + " invisibility types");

  std::vector<std::string> worlds;
  worlds.reserve(world_count);
  for (std::size_t mask = 0; mask < world_count; ++mask)
    worlds.push_back(world_name(spec, mask));

  std::vector<Agent> agents;
  for (const auto& type : types) {
    Agent a;
    a.name = agent_name(type);
    for (std::size_t j = 1; j <= spec.rows; ++j)
      for (std::size_t i = 1; i <= spec.cols; ++i)
        a.valuation[puzzle_agent_atom(j, i)] = (type[j - 1] == i);
    agents.push_back(std::move(a));
  }

  std::map<std::string, Bitset> valuation;
  for (std::size_t j = 1; j <= spec.rows; ++j)
    for (std::size_t i = 1; i <= spec.cols; ++i) {
      Bitset extent(world_count);
      for (std::size_t mask = 0; mask < world_count; ++mask)
        if ((mask >> bit_of(spec, j, i)) & 1u) extent.set(mask);
      valuation[puzzle_world_atom(j, i)] = std::move(extent);
    }

  // An agent relates two matrices iff they agree outside its hidden
  // positions, so its classes are indexed by the visible projection.
  std::vector<Relation> indist;
  for (const auto& type : types) {
    std::size_t hidden = 0;
    for (std::size_t j = 1; j <= spec.rows; ++j)
      hidden |= std::size_t{1} << bit_of(spec, j, type[j - 1]);
    std::map<std::size_t, std::vector<std::size_t>> classes;
    for (std::size_t mask = 0; mask < world_count; ++mask)
      classes[mask & ~hidden].push_back(mask);
    Relation rel;
    for (const auto& [key, members] : classes)
      for (std::size_t x : members)
        for (std::size_t y : members) rel.insert({x, y});
    indist.push_back(std::move(rel));
  }

  return CielModel(std::move(worlds),
                   FilteredAgentModel::from_agents(std::move(agents),
                                                   puzzle_theory(spec)),
                   std::move(valuation), std::move(indist));
}

namespace {

// Submodel on the kept worlds (relations and valuation restricted).
CielModel restrict_model(const CielModel& m, const Bitset& keep) {
  std::vector<std::size_t> old_of_new;
  std::vector<std::size_t> new_of_old(m.world_count(), 0);
  std::vector<std::string> worlds;
  for (std::size_t x = 0; x < m.world_count(); ++x)
    if (keep.test(x)) {
      new_of_old[x] = old_of_new.size();
      old_of_new.push_back(x);
      worlds.push_back(m.world_name(x));
    }
  std::map<std::string, Bitset> valuation;
  for (const auto& [atom, extent] : m.world_valuation()) {
    Bitset e(worlds.size());
    for (std::size_t i = 0; i < old_of_new.size(); ++i)
      if (extent.test(old_of_new[i])) e.set(i);
    valuation[atom] = std::move(e);
  }
  std::vector<Relation> indist;
  for (std::size_t a = 0; a < m.agent_model().agent_count(); ++a) {
    Relation rel;
    for (auto [x, y] : m.relation(a))
      if (keep.test(x) && keep.test(y))
        rel.insert({new_of_old[x], new_of_old[y]});
    indist.push_back(std::move(rel));
  }
  return CielModel(std::move(worlds), m.agent_model(), std::move(valuation),
                   std::move(indist));
}

}  // namespace

bool check_round_inference(const PuzzleSpec& spec, std::size_t row,
                           bool include_uncertainty) {
  spec.validate();
  if (row < 1 || row > spec.rows) throw ModelError("row out of range");
  std::size_t x = spec.rounds[row - 1];
  if (x + 1 > spec.cols)
    throw ModelError("no further round is possible for this row");

  CielModel full = build_puzzle_model(spec);

  // Current knowledge state: every row j' has more than rounds[j'] set bits.
  Bitset keep(full.world_count());
  for (std::size_t w = 0; w < full.world_count(); ++w) {
    bool ok = true;
    for (std::size_t j = 1; j <= spec.rows && ok; ++j) {
      std::size_t set_bits = 0;
      for (std::size_t i = 1; i <= spec.cols; ++i)
        if (full.atom_extent(puzzle_world_atom(j, i)).test(w)) ++set_bits;
      ok = set_bits > spec.rounds[j - 1];
    }
    if (ok) keep.set(w);
  }
  CielModel state = restrict_model(full, keep);
  if (state.world_count() == 0) return true;  // nothing satisfies the state

  Bitset premises = eval(state, visibility_axiom(spec));
  premises &= eval(state, WorldFormula::common(
                              AgentFormula::top(),
                              WorldFormula::negation(alpha_leq(spec, row, x))));
  if (include_uncertainty) premises &= eval(state, uncertainty_row(spec, row));

  Bitset conclusion =
      eval(state, WorldFormula::common(
                      AgentFormula::top(),
                      WorldFormula::negation(alpha_leq(spec, row, x + 1))));
  return premises.is_subset_of(conclusion);
}

}  // namespace ciel
