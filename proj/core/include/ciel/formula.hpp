#ifndef CIEL_FORMULA_HPP
#define CIEL_FORMULA_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ciel/errors.hpp"

namespace ciel {

// Propositional agent formula. Core constructors are Falsum, Atom, Not and
// And; everything else is sugar that the builders expand eagerly, so stored
// ASTs never contain Or / Implies / Iff / Top.
class AgentFormula {
 public:
  enum class Kind : unsigned char { Falsum, Atom, Not, And };

  static AgentFormula falsum();
  static AgentFormula atom(std::string name);
  static AgentFormula negation(AgentFormula f);
  static AgentFormula conjunction(AgentFormula l, AgentFormula r);

  // Sugar.
  static AgentFormula top();  // ~false
  static AgentFormula disjunction(AgentFormula l, AgentFormula r);
  static AgentFormula implication(AgentFormula l, AgentFormula r);
  static AgentFormula equivalence(AgentFormula l, AgentFormula r);

  Kind kind() const { return node_->kind; }
  const std::string& name() const;      // Atom
  AgentFormula operand() const;         // Not
  AgentFormula left() const;            // And
  AgentFormula right() const;           // And

  std::size_t size() const { return node_->size; }  // constructor count
  std::size_t hash() const { return node_->hash; }
  bool operator==(const AgentFormula& o) const;
  bool operator!=(const AgentFormula& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  struct Node {
    Kind kind;
    std::size_t hash;
    std::size_t size;
    std::string name;
    std::shared_ptr<const Node> a, b;
  };
  explicit AgentFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static AgentFormula make(Node n);
  std::shared_ptr<const Node> node_;
};

// CIEL world formula: the agent-formula constructors plus the indexed common
// knowledge operator C. The dual P[psi]phi is sugar for ~C[psi]~phi.
class WorldFormula {
 public:
  enum class Kind : unsigned char { Falsum, Atom, Not, And, Common };

  static WorldFormula falsum();
  static WorldFormula atom(std::string name);
  static WorldFormula negation(WorldFormula f);
  static WorldFormula conjunction(WorldFormula l, WorldFormula r);
  static WorldFormula common(AgentFormula index, WorldFormula body);

  // Sugar.
  static WorldFormula top();
  static WorldFormula disjunction(WorldFormula l, WorldFormula r);
  static WorldFormula implication(WorldFormula l, WorldFormula r);
  static WorldFormula equivalence(WorldFormula l, WorldFormula r);
  static WorldFormula possibly(AgentFormula index, WorldFormula body);

  Kind kind() const { return node_->kind; }
  const std::string& name() const;       // Atom
  WorldFormula operand() const;          // Not
  WorldFormula left() const;             // And
  WorldFormula right() const;            // And
  const AgentFormula& index() const;     // Common
  WorldFormula body() const;             // Common

  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }
  bool operator==(const WorldFormula& o) const;
  bool operator!=(const WorldFormula& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  struct Node {
    Kind kind;
    std::size_t hash;
    std::size_t size;
    std::string name;
    std::optional<AgentFormula> index;
    std::shared_ptr<const Node> a, b;
  };
  explicit WorldFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static WorldFormula make(Node n);
  std::shared_ptr<const Node> node_;
};

}  // namespace ciel

template <>
struct std::hash<ciel::AgentFormula> {
  std::size_t operator()(const ciel::AgentFormula& f) const { return f.hash(); }
};
template <>
struct std::hash<ciel::WorldFormula> {
  std::size_t operator()(const ciel::WorldFormula& f) const { return f.hash(); }
};

namespace ciel {

// Normalized negation: strips one outer negation if present, else negates.
WorldFormula nneg(const WorldFormula& f);
AgentFormula nneg(const AgentFormula& f);

// All world subformulae of f (f included), in first-visit order.
std::vector<WorldFormula> subformulae(const WorldFormula& f);

// All agent formulae indexing a C in f, closed under agent subformulae.
std::vector<AgentFormula> agent_subformulae(const WorldFormula& f);
std::vector<AgentFormula> agent_subformulae(const AgentFormula& f);

// Closure of a root formula: subformula-closed, closed under normalized
// negation, and index-saturated over the given agent closure.
struct ClosureSet {
  WorldFormula root;
  std::vector<WorldFormula> world_formulas;   // deterministic order
  std::vector<AgentFormula> agent_closure;
  std::unordered_map<WorldFormula, std::size_t> index;

  std::size_t size() const { return world_formulas.size(); }
  std::optional<std::size_t> index_of(const WorldFormula& f) const {
    auto it = index.find(f);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const WorldFormula& f) const { return index.count(f) > 0; }
};

inline constexpr std::size_t kDefaultClosureCap = 4096;

ClosureSet closure(const WorldFormula& root,
                   const std::vector<AgentFormula>& agent_closure,
                   std::size_t cap = kDefaultClosureCap);

// Text grammar: identifiers [a-zA-Z_][a-zA-Z0-9_]*, connectives
// ~ & | -> <-> true false, modalities C[psi] phi and P[psi] phi.
// Unary operators (and modalities) bind tighter than binary connectives;
// & binds tighter than |, then ->, then <->.
WorldFormula parse_world(std::string_view text);
AgentFormula parse_agent(std::string_view text);

}  // namespace ciel

#endif  // CIEL_FORMULA_HPP
