#ifndef CIEL_DECIDE_HPP
#define CIEL_DECIDE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ciel/agentlogic.hpp"
#include "ciel/bitset.hpp"
#include "ciel/formula.hpp"
#include "ciel/gel_formula.hpp"
#include "ciel/semantics.hpp"

namespace ciel {

struct DecideCaps {
  std::size_t sigma = 64;                       // closure size gate for enumeration
  std::size_t types = std::size_t{1} << 20;     // coherent type cap
  std::size_t closure = kDefaultClosureCap;     // formula closure cap
  std::size_t valuations = kDefaultValuationCap;
};

// Worlds of the canonical construction: maximal coherent subsets of the
// closure, stored as membership masks over its index order, with the
// per-agent equivalence edges kept as a partition (class id per type).
// Two types are related for agent a iff they contain the same boxed formulas
// C[psi]phi whose index denotes a.
struct TypeSpace {
  struct CEntry {
    std::size_t sigma_index;  // index of C[psi]phi in the closure
    std::size_t body_index;   // index of phi
    Bitset denotation;        // agents satisfying psi
  };

  std::vector<Bitset> types;
  std::vector<std::vector<std::uint32_t>> agent_class;  // [agent][type]
  std::vector<CEntry> c_entries;
  std::size_t agent_count = 0;

  std::size_t size() const { return types.size(); }
};

// All maximal coherent subsets of the closure, generated by branching search
// with unit propagation over the coherence constraints.
TypeSpace enumerate_types(const ClosureSet& sigma, const FilteredAgentModel& m,
                          std::size_t cap = DecideCaps{}.types);

enum class EliminationOrder { Batch, ForwardSequential, ReverseSequential };

// Greatest subset of the type space in which every obligation ~C[psi]phi is
// fulfilled by a refuting type reachable through surviving types via steps of
// agents denoted by psi. The fixpoint does not depend on the order.
TypeSpace eliminate(const TypeSpace& ts, const ClosureSet& sigma,
                    EliminationOrder order = EliminationOrder::Batch);

struct SatStats {
  std::size_t sigma_size = 0;
  std::size_t type_count = 0;
  std::size_t surviving = 0;
  std::size_t rounds = 0;
};

struct SatResult {
  bool satisfiable = false;
  std::optional<CielModel> witness;
  std::string start_world;
  SatStats stats;
};

// Satisfiability of rho over models of the theory. Sat results carry a
// witness model built from the surviving types; the witness is re-checked
// (membership = truth for every closure formula) before it is returned.
SatResult sat(const WorldFormula& rho, const AgentTheory& theory = {},
              const DecideCaps& caps = {});

bool valid(const WorldFormula& f, const AgentTheory& theory = {},
           const DecideCaps& caps = {});

// The canonical pseudo-model of the surviving types: one equivalence per
// realized index denotation, with no closure step in the semantics.
PseudoModel canonical_pseudo_model(const TypeSpace& ts, const ClosureSet& sigma,
                                   const FilteredAgentModel& m);

// Independent GEL satisfiability oracle: standard filtration type
// elimination over explicitly named groups. Shares no code with sat().
bool gel_sat(const GelFormula& f, const DecideCaps& caps = {});

}  // namespace ciel

#endif  // CIEL_DECIDE_HPP
