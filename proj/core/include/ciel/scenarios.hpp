#ifndef CIEL_SCENARIOS_HPP
#define CIEL_SCENARIOS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "ciel/agentlogic.hpp"
#include "ciel/formula.hpp"
#include "ciel/semantics.hpp"

namespace ciel {

// The n x k muddy-children variant: a matrix of bits, one agent per
// invisibility type (one hidden column per row), and a per-row counter of
// completed communication rounds.
struct PuzzleSpec {
  std::size_t rows = 1;                // n >= 1
  std::size_t cols = 2;                // k >= 2, so every bit is seen
  std::vector<std::size_t> rounds;     // x_j per row, each < cols

  void validate() const;  // throws ModelError on a malformed spec
};

// World atom p_<row>_<col> and agent atom h_<row>_<col> (1-based).
std::string puzzle_world_atom(std::size_t row, std::size_t col);
std::string puzzle_agent_atom(std::size_t row, std::size_t col);

// "At most x bits are set in row j": the disjunction over all column subsets
// H with |H| <= x of the full sign pattern of row j. Exponential in k.
WorldFormula alpha_leq(const PuzzleSpec& spec, std::size_t row, std::size_t x);

// The four formula families of the scenario.
WorldFormula visibility_axiom(const PuzzleSpec& spec);
WorldFormula initial_knowledge(const PuzzleSpec& spec);
WorldFormula uncertainty_announcement(const PuzzleSpec& spec);  // all rows
WorldFormula uncertainty_row(const PuzzleSpec& spec, std::size_t row);
WorldFormula invariant_formula(const PuzzleSpec& spec);

// Background theory: exactly one hidden column per row.
AgentTheory puzzle_theory(const PuzzleSpec& spec);

// The explicit puzzle model: all bit matrices as worlds, all invisibility
// types as agents, and agents relating matrices that agree outside their
// hidden positions. Every relation is an equivalence by construction.
CielModel build_puzzle_model(const PuzzleSpec& spec,
                             std::size_t world_cap = std::size_t{1} << 16,
                             std::size_t agent_cap = 4096);

// Per-round inference, checked as local consequence over the puzzle model
// restricted to the current knowledge state (every row j' has more than
// rounds[j'] set bits): wherever the visibility axiom, the accumulated
// knowledge for the queried row, and (optionally) the uncertainty
// announcement for that row hold, common knowledge of one more set bit in
// the row must hold. Dropping the uncertainty premise is the negative
// control and fails.
bool check_round_inference(const PuzzleSpec& spec, std::size_t row,
                           bool include_uncertainty = true);

}  // namespace ciel

#endif  // CIEL_SCENARIOS_HPP
