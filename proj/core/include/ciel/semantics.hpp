#ifndef CIEL_SEMANTICS_HPP
#define CIEL_SEMANTICS_HPP

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ciel/agentlogic.hpp"
#include "ciel/bitset.hpp"
#include "ciel/formula.hpp"
#include "ciel/gel_formula.hpp"

namespace ciel {

using Relation = std::set<std::pair<std::size_t, std::size_t>>;

// Explicit finite CIEL model. Relations are kept as the pair sets they were
// built or loaded with; `validate` checks (strict) or completes (normalize)
// them to equivalence relations. World atoms missing from the valuation are
// false everywhere.
class CielModel {
 public:
  CielModel(std::vector<std::string> worlds, FilteredAgentModel agent_model,
            std::map<std::string, Bitset> world_valuation,
            std::vector<Relation> indist);

  std::size_t world_count() const { return worlds_.size(); }
  const std::vector<std::string>& worlds() const { return worlds_; }
  const std::string& world_name(std::size_t i) const { return worlds_[i]; }
  std::size_t world_index(const std::string& name) const;  // throws ModelError

  const FilteredAgentModel& agent_model() const { return agent_model_; }
  const std::map<std::string, Bitset>& world_valuation() const {
    return world_valuation_;
  }
  Bitset atom_extent(const std::string& atom) const;

  const Relation& relation(std::size_t agent) const { return indist_[agent]; }
  const std::vector<std::vector<std::size_t>>& adjacency(std::size_t agent) const {
    return adjacency_[agent];
  }

 private:
  std::vector<std::string> worlds_;
  FilteredAgentModel agent_model_;
  std::map<std::string, Bitset> world_valuation_;
  std::vector<Relation> indist_;
  // Undirected adjacency per agent, derived from indist_.
  std::vector<std::vector<std::vector<std::size_t>>> adjacency_;
};

// The equivalence class of `world` under the reflexive-transitive closure of
// the union of the relations of the given agents, by breadth-first search.
Bitset group_reach(const CielModel& m, const Bitset& agents,
                   const std::string& world);
Bitset group_reach(const CielModel& m, const Bitset& agents, std::size_t world);

// Extension of f in m; evaluation is memoized per subformula.
Bitset eval(const CielModel& m, const WorldFormula& f);
bool check(const CielModel& m, const std::string& world, const WorldFormula& f);
bool check(const CielModel& m, std::size_t world, const WorldFormula& f);

// Evaluates a C-formula by greatest-fixpoint iteration from the full world
// set instead of by reachability (subformulas recursively the same way).
// Requires f.kind() == Common.
Bitset check_gfp(const CielModel& m, const WorldFormula& f);

enum class ValidateMode { Strict, Normalize };

// Strict: rejects any relation that is not an equivalence, naming the agent
// and the offending pair. Normalize: replaces each relation by its
// reflexive-symmetric-transitive closure.
CielModel validate(const CielModel& m, ValidateMode mode);

// JSON model files; see README for the schema.
CielModel load_model(const std::string& json_text);
std::string save_model(const CielModel& m);

// DOT rendering of the union of all indistinguishability relations.
std::string to_dot(const CielModel& m);

// ---------------------------------------------------------------------------
// Group epistemic logic models: named agents, groups enumerated explicitly.

class GelModel {
 public:
  GelModel(std::vector<std::string> worlds, std::vector<std::string> agent_names,
           std::map<std::string, Bitset> world_valuation,
           std::vector<Relation> indist);

  std::size_t world_count() const { return worlds_.size(); }
  const std::vector<std::string>& worlds() const { return worlds_; }
  std::size_t world_index(const std::string& name) const;
  const std::vector<std::string>& agent_names() const { return agent_names_; }
  std::size_t agent_index(const std::string& name) const;
  const std::map<std::string, Bitset>& world_valuation() const {
    return world_valuation_;
  }
  Bitset atom_extent(const std::string& atom) const;
  const Relation& relation(std::size_t agent) const { return indist_[agent]; }
  const std::vector<std::vector<std::size_t>>& adjacency(std::size_t agent) const {
    return adjacency_[agent];
  }

 private:
  std::vector<std::string> worlds_;
  std::vector<std::string> agent_names_;
  std::map<std::string, Bitset> world_valuation_;
  std::vector<Relation> indist_;
  std::vector<std::vector<std::vector<std::size_t>>> adjacency_;
};

Bitset eval_gel(const GelModel& m, const GelFormula& f);
bool check_gel(const GelModel& m, const std::string& world, const GelFormula& f);
bool check_gel(const GelModel& m, std::size_t world, const GelFormula& f);

// ---------------------------------------------------------------------------
// Pseudo-models: an equivalence relation per agent subset, used by the
// satisfiability decision procedure. C[psi] is interpreted directly over the
// stored relation of the denotation of psi, with no closure step.

struct PseudoModel {
  std::vector<std::string> worlds;
  FilteredAgentModel agent_model;
  std::map<std::string, Bitset> world_valuation;
  // Partition of worlds (class id per world) per realized agent subset.
  std::map<Bitset, std::vector<std::size_t>> indist_by_set;
};

Bitset eval_pseudo(const PseudoModel& m, const WorldFormula& f);
bool check_pseudo(const PseudoModel& m, std::size_t world, const WorldFormula& f);

}  // namespace ciel

#endif  // CIEL_SEMANTICS_HPP
