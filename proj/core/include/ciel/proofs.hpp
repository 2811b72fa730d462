#ifndef CIEL_PROOFS_HPP
#define CIEL_PROOFS_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ciel/agentlogic.hpp"
#include "ciel/decide.hpp"
#include "ciel/formula.hpp"

namespace ciel {

// Justification of one derivation line. Axiom lines carry the schema's
// metavariable instantiation explicitly; the checker rebuilds the instance
// and compares it syntactically, so there is no unification search.
struct Justification {
  enum class Rule {
    Taut,  // propositional tautology in the Boolean skeleton
    T,     // C[psi]phi -> phi                       (psi, phi)
    Bot,   // phi -> C[false]phi                     (phi)
    K,     // C[psi](phi->gamma) -> (C[psi]phi -> C[psi]gamma)
    Four,  // C[psi]phi -> C[psi]C[psi]phi           (psi, phi)
    Five,  // ~C[psi]phi -> C[psi]~C[psi]phi         (psi, phi)
    Ind,   // C[psi|chi](phi -> (C[psi]phi & C[chi]phi)) -> (phi -> C[psi|chi]phi)
    MP,    // refs {i, j}: line j is (line i -> current)
    Nec,   // ref {i}: current is C[psi](line i)
    AM     // side condition gamma => psi; with ref {i}: from C[psi]X on line i
           // to C[gamma]X; without ref: the implication C[psi]X -> C[gamma]X
  };

  Rule rule;
  std::vector<std::size_t> refs;  // 1-based line numbers
  std::optional<AgentFormula> psi;
  std::optional<AgentFormula> chi;
  std::optional<AgentFormula> gamma_agent;
  std::optional<WorldFormula> phi;
  std::optional<WorldFormula> gamma_world;
};

struct DerivationLine {
  WorldFormula formula;
  Justification justification;
};

struct Derivation {
  std::vector<DerivationLine> lines;
};

struct CheckReport {
  bool accepted = false;
  std::size_t fail_line = 0;  // 1-based; 0 when accepted
  std::string message;
};

// Validates every line against its declared justification; reports the first
// failing line. The theory feeds the entailment side condition of AM.
CheckReport check_derivation(const Derivation& d, const AgentTheory& theory = {});

// Tautology check after abstracting maximal non-Boolean subformulas (atoms
// and C-formulas) as letters.
bool is_tautology(const WorldFormula& f,
                  std::size_t assignment_cap = std::size_t{1} << 20);

// The generalized induction formula over n disjuncts and a derivation of it:
// n = 0 goes through (Bot), n = 1 through (T), and each further disjunct
// through (Nec)/(K)/(AM)/(4) bookkeeping and one (Ind) instance.
WorldFormula ind_gen_formula(const std::vector<AgentFormula>& psis,
                             const WorldFormula& phi);
Derivation gen_ind_n(const std::vector<AgentFormula>& psis,
                     const WorldFormula& phi);

// Satisfiability of the conjunction, through the decision procedure.
bool consistent(const std::vector<WorldFormula>& gamma,
                const AgentTheory& theory = {}, const DecideCaps& caps = {});

// Line-oriented proof files: "<index>. <formula> ; <RULE> <args>" with
// numeric refs and key={formula} bindings; '#' starts a comment.
Derivation parse_derivation(std::string_view text);
std::string to_string(const Derivation& d);

}  // namespace ciel

#endif  // CIEL_PROOFS_HPP
