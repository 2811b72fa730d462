#ifndef CIEL_TRANSLATE_HPP
#define CIEL_TRANSLATE_HPP

#include <string>
#include <vector>

#include "ciel/gel_formula.hpp"
#include "ciel/semantics.hpp"

namespace ciel {

// Satisfiability-preserving encoding of GEL into CIEL: every agent name a
// becomes a fresh agent atom p_<a>, and C over a group becomes C over the
// disjunction of the members' atoms. Linear in the input size.
WorldFormula gel_to_ciel(const GelFormula& f);

// Name of the agent atom standing for a GEL agent name.
std::string gel_agent_atom(const std::string& name);

// Model halves of the encoding: forward gives one CIEL agent per name with
// p_a denoting exactly {a}; backward reads the relation of name a off the
// denotation of p_a. Backward requires every requested p_a to be known to
// the agent model.
CielModel gel_model_to_ciel(const GelModel& m);
GelModel ciel_model_to_gel(const CielModel& m,
                           const std::vector<std::string>& names);

// Reverse formula encoding, defined when the agent logic is the shipped
// propositional one: C[psi] becomes C over the set of agents of m satisfying
// psi (as named groups). Indices with empty denotation are an error, since
// GEL groups must be nonempty. Worst-case exponential output size.
GelFormula ciel_to_gel(const WorldFormula& f, const FilteredAgentModel& m);

}  // namespace ciel

#endif  // CIEL_TRANSLATE_HPP
