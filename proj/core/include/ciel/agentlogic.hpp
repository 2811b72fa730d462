#ifndef CIEL_AGENTLOGIC_HPP
#define CIEL_AGENTLOGIC_HPP

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ciel/bitset.hpp"
#include "ciel/formula.hpp"

namespace ciel {

inline constexpr std::size_t kDefaultValuationCap = std::size_t{1} << 20;

// Background theory: a finite set of agent formulas every agent must satisfy.
struct AgentTheory {
  std::vector<AgentFormula> constraints;

  bool empty() const { return constraints.empty(); }
};

// Theory file format: one agent formula per line, '#' starts a comment.
AgentTheory parse_theory(std::string_view text);

// An agent is a truth valuation of the relevant agent atoms. Atoms outside
// the map evaluate to false.
struct Agent {
  std::string name;
  std::map<std::string, bool> valuation;

  bool value(const std::string& atom) const {
    auto it = valuation.find(atom);
    return it != valuation.end() && it->second;
  }
};

bool eval_agent(const AgentFormula& f, const Agent& a);

// Finite agent model. Models built by `filtered` satisfy the filtered model
// property: any two agents are distinguished by a sigma formula, every
// theory-satisfiable subset of sigma is realized, and each agent has a
// characteristic formula denoting exactly itself. Models built from an
// explicit agent list (files, puzzle generators, model transforms) carry no
// sigma and provide denotations only.
//
// The shipped agent logic is classical propositional logic plus a background
// theory. A richer agent logic would have to supply the same seam: this
// factory, denote, characteristic, agent_closure, and the entails/sat_agent
// oracles below.
class FilteredAgentModel {
 public:
  FilteredAgentModel() = default;  // empty model; fill via the factories

  // Agents are the theory-satisfying valuations over the atoms of
  // sigma + theory, quotiented by "satisfies the same subset of sigma",
  // keeping the lexicographically least valuation of each class.
  static FilteredAgentModel filtered(std::vector<AgentFormula> sigma,
                                     AgentTheory theory,
                                     std::size_t valuation_cap = kDefaultValuationCap);

  static FilteredAgentModel from_agents(std::vector<Agent> agents,
                                        AgentTheory theory = {});

  const std::vector<Agent>& agents() const { return agents_; }
  const AgentTheory& theory() const { return theory_; }
  const std::vector<AgentFormula>& sigma() const { return sigma_; }

  std::size_t agent_count() const { return agents_.size(); }
  const Agent& agent(std::size_t i) const { return agents_[i]; }

  // Set of agents satisfying f, as indices into agents().
  Bitset denote(const AgentFormula& f) const;

  // Conjunction over sigma of the members agent i satisfies and the negations
  // of those it falsifies; denotes exactly {i}.
  AgentFormula characteristic(std::size_t i) const;

  // sigma together with all characteristic formulas, deduplicated.
  std::vector<AgentFormula> agent_closure() const;

 private:
  std::vector<Agent> agents_;
  std::vector<AgentFormula> sigma_;
  AgentTheory theory_;
};

// Semantic consequence over theory-satisfying valuations of the atoms of
// gamma, psi and the theory, decided by exhaustive valuation search.
bool entails(const AgentFormula& gamma, const AgentFormula& psi,
             const AgentTheory& theory = {},
             std::size_t valuation_cap = kDefaultValuationCap);

bool sat_agent(const std::vector<AgentFormula>& formulas,
               const AgentTheory& theory = {},
               std::size_t valuation_cap = kDefaultValuationCap);

}  // namespace ciel

#endif  // CIEL_AGENTLOGIC_HPP
