#ifndef CIEL_MUCALC_HPP
#define CIEL_MUCALC_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ciel/bitset.hpp"
#include "ciel/semantics.hpp"

namespace ciel {

// Atomic program or its converse.
struct Program {
  std::string name;
  bool converse = false;

  bool operator==(const Program& o) const {
    return name == o.name && converse == o.converse;
  }
  std::string to_string() const { return converse ? name + "^-" : name; }
};

// Single-variable fragment of the full mu-calculus: one fixpoint variable z,
// greatest fixpoints, converse programs. nu construction rejects formulas in
// which z occurs free under an odd number of negations.
class MuFormula {
 public:
  enum class Kind : unsigned char { Falsum, Atom, Var, Not, And, Box, Nu };

  static MuFormula falsum();
  static MuFormula atom(std::string name);
  static MuFormula var();  // z
  static MuFormula negation(MuFormula f);
  static MuFormula conjunction(MuFormula l, MuFormula r);
  static MuFormula box(Program p, MuFormula f);
  static MuFormula nu(MuFormula f);  // throws ModelError on non-positive z

  // Sugar.
  static MuFormula top();
  static MuFormula disjunction(MuFormula l, MuFormula r);
  static MuFormula implication(MuFormula l, MuFormula r);
  static MuFormula diamond(Program p, MuFormula f);  // ~[p]~f
  static MuFormula mu(MuFormula f);                  // ~nu z. ~f[~z/z]

  Kind kind() const { return node_->kind; }
  const std::string& name() const;   // Atom
  MuFormula operand() const;         // Not, Nu
  MuFormula left() const;            // And
  MuFormula right() const;           // And
  const Program& program() const;    // Box
  MuFormula body() const;            // Box

  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }
  bool operator==(const MuFormula& o) const;
  bool operator!=(const MuFormula& o) const { return !(*this == o); }

  bool closed() const;  // no free z
  std::string to_string() const;

 private:
  struct Node {
    Kind kind;
    std::size_t hash;
    std::size_t size;
    std::string name;
    Program program;
    std::shared_ptr<const Node> a, b;
  };
  explicit MuFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static MuFormula make(Node n);
  std::shared_ptr<const Node> node_;
};

// Finite mu-calculus model. Converse relations are derived, never stored.
class MuModel {
 public:
  MuModel(std::vector<std::string> domain,
          std::map<std::string, Relation> transitions,
          std::map<std::string, Bitset> valuation);

  std::size_t element_count() const { return domain_.size(); }
  const std::vector<std::string>& domain() const { return domain_; }
  std::size_t element_index(const std::string& name) const;
  const std::map<std::string, Relation>& transitions() const {
    return transitions_;
  }
  const std::map<std::string, Bitset>& valuation() const { return valuation_; }
  Bitset atom_extent(const std::string& atom) const;

  // Successors of x under p (converse handled here).
  const std::vector<std::size_t>& successors(const Program& p,
                                             std::size_t x) const;

 private:
  std::vector<std::string> domain_;
  std::map<std::string, Relation> transitions_;
  std::map<std::string, Bitset> valuation_;
  std::map<std::string, std::vector<std::vector<std::size_t>>> succ_, pred_;
  std::vector<std::size_t> empty_;
};

// The extension of f in m, with U as the extension of free z. Greatest
// fixpoints are computed by downward iteration from the full domain.
Bitset mu_eval(const MuModel& m, const MuFormula& f, const Bitset& z_extent);
Bitset mu_eval(const MuModel& m, const MuFormula& f);

// Reserved program names of the CIEL encoding.
extern const char* const kEdgeProgram;  // edge
extern const char* const kPi1Program;   // pi1
extern const char* const kPi2Program;   // pi2

// Encoding of CIEL into the single-variable full mu-calculus: C[psi]phi
// becomes a greatest fixpoint over one forward and one backward
// indistinguishability step through edge/pi1/pi2. Linear in the input size;
// throws if an atom of f shadows a reserved program name.
MuFormula translate_t(const WorldFormula& f);

// The model halves of the encoding. Forward: domain is agents + worlds +
// (agent, world) pairs encoding the ternary relation. Backward: every domain
// element doubles as an agent, relations are read off edge/pi1/pi2 and
// normalized to equivalences.
MuModel ciel_model_to_mu(const CielModel& m);
CielModel mu_model_to_ciel(const MuModel& m);

}  // namespace ciel

template <>
struct std::hash<ciel::MuFormula> {
  std::size_t operator()(const ciel::MuFormula& f) const { return f.hash(); }
};

#endif  // CIEL_MUCALC_HPP
