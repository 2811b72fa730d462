#ifndef CIEL_GEL_FORMULA_HPP
#define CIEL_GEL_FORMULA_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ciel/formula.hpp"

namespace ciel {

// Group epistemic logic formula: common knowledge over an explicitly
// enumerated, nonempty group of agent names. Same core-constructor discipline
// as the CIEL ASTs.
class GelFormula {
 public:
  enum class Kind : unsigned char { Falsum, Atom, Not, And, Common };

  static GelFormula falsum();
  static GelFormula atom(std::string name);
  static GelFormula negation(GelFormula f);
  static GelFormula conjunction(GelFormula l, GelFormula r);
  // Group is deduplicated and sorted; empty groups are rejected.
  static GelFormula common(std::vector<std::string> group, GelFormula body);

  static GelFormula top();
  static GelFormula disjunction(GelFormula l, GelFormula r);
  static GelFormula implication(GelFormula l, GelFormula r);

  Kind kind() const { return node_->kind; }
  const std::string& name() const;                // Atom
  GelFormula operand() const;                     // Not
  GelFormula left() const;                        // And
  GelFormula right() const;                       // And
  const std::vector<std::string>& group() const;  // Common
  GelFormula body() const;                        // Common

  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }
  bool operator==(const GelFormula& o) const;
  bool operator!=(const GelFormula& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  struct Node {
    Kind kind;
    std::size_t hash;
    std::size_t size;
    std::string name;
    std::vector<std::string> group;
    std::shared_ptr<const Node> a, b;
  };
  explicit GelFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static GelFormula make(Node n);
  std::shared_ptr<const Node> node_;
};

// Same connective spellings as the CIEL grammar; the modality takes a
// comma-separated group, as in "C[alice, bob] p".
GelFormula parse_gel(std::string_view text);

std::vector<GelFormula> gel_subformulae(const GelFormula& f);
GelFormula gel_nneg(const GelFormula& f);

}  // namespace ciel

template <>
struct std::hash<ciel::GelFormula> {
  std::size_t operator()(const ciel::GelFormula& f) const { return f.hash(); }
};

#endif  // CIEL_GEL_FORMULA_HPP
