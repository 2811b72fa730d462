#include "ciel/mucalc.hpp"

#include <cassert>

#include "ciel/errors.hpp"

namespace ciel {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

// Checks that every occurrence of z free w.r.t. a new outer binder sits under
// an even number of negations. Subtrees under a nested nu were checked when
// that nu was built.
bool z_positive(const MuFormula& f, bool positive) {
  switch (f.kind()) {
    case MuFormula::Kind::Falsum:
    case MuFormula::Kind::Atom:
      return true;
    case MuFormula::Kind::Var:
      return positive;
    case MuFormula::Kind::Not:
      return z_positive(f.operand(), !positive);
    case MuFormula::Kind::And:
      return z_positive(f.left(), positive) && z_positive(f.right(), positive);
    case MuFormula::Kind::Box:
      return z_positive(f.body(), positive);
    case MuFormula::Kind::Nu:
      return true;  // rebinds z
  }
  return true;
}

MuFormula subst_free_z(const MuFormula& f, const MuFormula& replacement) {
  switch (f.kind()) {
    case MuFormula::Kind::Falsum:
    case MuFormula::Kind::Atom:
    case MuFormula::Kind::Nu:
      return f;
    case MuFormula::Kind::Var:
      return replacement;
    case MuFormula::Kind::Not:
      return MuFormula::negation(subst_free_z(f.operand(), replacement));
    case MuFormula::Kind::And:
      return MuFormula::conjunction(subst_free_z(f.left(), replacement),
                                    subst_free_z(f.right(), replacement));
    case MuFormula::Kind::Box:
      return MuFormula::box(f.program(), subst_free_z(f.body(), replacement));
  }
  return f;
}

bool has_free_z(const MuFormula& f) {
  switch (f.kind()) {
    case MuFormula::Kind::Falsum:
    case MuFormula::Kind::Atom:
    case MuFormula::Kind::Nu:
      return false;
    case MuFormula::Kind::Var:
      return true;
    case MuFormula::Kind::Not:
      return has_free_z(f.operand());
    case MuFormula::Kind::And:
      return has_free_z(f.left()) || has_free_z(f.right());
    case MuFormula::Kind::Box:
      return has_free_z(f.body());
  }
  return false;
}

}  // namespace

MuFormula MuFormula::make(Node n) {
  return MuFormula(std::make_shared<const Node>(std::move(n)));
}

MuFormula MuFormula::falsum() {
  static const MuFormula f =
      make(Node{Kind::Falsum, mix(31, 0x5f), 1, {}, {}, nullptr, nullptr});
  return f;
}

MuFormula MuFormula::atom(std::string name) {
  assert(!name.empty());
  std::size_t h = mix(32, std::hash<std::string>{}(name));
  return make(Node{Kind::Atom, h, 1, std::move(name), {}, nullptr, nullptr});
}

MuFormula MuFormula::var() {
  static const MuFormula f =
      make(Node{Kind::Var, mix(33, 0x7a), 1, {}, {}, nullptr, nullptr});
  return f;
}

MuFormula MuFormula::negation(MuFormula f) {
  std::size_t h = mix(34, f.hash());
  return make(Node{Kind::Not, h, 1 + f.size(), {}, {}, f.node_, nullptr});
}

MuFormula MuFormula::conjunction(MuFormula l, MuFormula r) {
  std::size_t h = mix(mix(35, l.hash()), r.hash());
  return make(
      Node{Kind::And, h, 1 + l.size() + r.size(), {}, {}, l.node_, r.node_});
}

MuFormula MuFormula::box(Program p, MuFormula f) {
  std::size_t h = mix(mix(36, std::hash<std::string>{}(p.name)),
                      mix(p.converse ? 2 : 1, f.hash()));
  return make(Node{Kind::Box, h, 1 + f.size(), {}, std::move(p), f.node_,
                   nullptr});
}

MuFormula MuFormula::nu(MuFormula f) {
  if (!z_positive(f, true))
    throw ModelError("nu z binds a non-positive occurrence of z in " +
                     f.to_string());
  std::size_t h = mix(37, f.hash());
  return make(Node{Kind::Nu, h, 1 + f.size(), {}, {}, f.node_, nullptr});
}

MuFormula MuFormula::top() { return negation(falsum()); }
MuFormula MuFormula::disjunction(MuFormula l, MuFormula r) {
  return negation(conjunction(negation(l), negation(r)));
}
MuFormula MuFormula::implication(MuFormula l, MuFormula r) {
  return negation(conjunction(l, negation(r)));
}
MuFormula MuFormula::diamond(Program p, MuFormula f) {
  return negation(box(std::move(p), negation(std::move(f))));
}
MuFormula MuFormula::mu(MuFormula f) {
  return negation(nu(negation(subst_free_z(f, negation(var())))));
}

const std::string& MuFormula::name() const {
  assert(kind() == Kind::Atom);
  return node_->name;
}
MuFormula MuFormula::operand() const {
  assert(kind() == Kind::Not || kind() == Kind::Nu);
  return MuFormula(node_->a);
}
MuFormula MuFormula::left() const {
  assert(kind() == Kind::And);
  return MuFormula(node_->a);
}
MuFormula MuFormula::right() const {
  assert(kind() == Kind::And);
  return MuFormula(node_->b);
}
const Program& MuFormula::program() const {
  assert(kind() == Kind::Box);
  return node_->program;
}
MuFormula MuFormula::body() const {
  assert(kind() == Kind::Box);
  return MuFormula(node_->a);
}

bool MuFormula::operator==(const MuFormula& o) const {
  if (node_ == o.node_) return true;
  if (node_->hash != o.node_->hash || node_->kind != o.node_->kind) return false;
  switch (kind()) {
    case Kind::Falsum:
    case Kind::Var:
      return true;
    case Kind::Atom:
      return node_->name == o.node_->name;
    case Kind::Not:
    case Kind::Nu:
      return operand() == o.operand();
    case Kind::And:
      return left() == o.left() && right() == o.right();
    case Kind::Box:
      return program() == o.program() && body() == o.body();
  }
  return false;
}

bool MuFormula::closed() const { return !has_free_z(*this); }

namespace {

enum PrintLevel { kNuLevel = 0, kImplies = 1, kOr = 2, kAnd = 3, kUnary = 4 };

void print_mu(const MuFormula& f, std::string& out, int min_level) {
  // recover diamonds (~[p]~f), true, | and -> for readability
  if (f.kind() == MuFormula::Kind::Not) {
    MuFormula inner = f.operand();
    if (inner.kind() == MuFormula::Kind::Falsum) {
      out += "true";
      return;
    }
    if (inner.kind() == MuFormula::Kind::Box &&
        inner.body().kind() == MuFormula::Kind::Not) {
      out += '<' + inner.program().to_string() + "> ";
      print_mu(inner.body().operand(), out, kUnary);
      return;
    }
    if (inner.kind() == MuFormula::Kind::And &&
        inner.right().kind() == MuFormula::Kind::Not) {
      MuFormula x = inner.left();
      MuFormula y = inner.right().operand();
      // a negated left conjunct reads as a disjunction, unless it is a
      // diamond, which reads better as the antecedent of an implication
      bool left_is_diamond =
          x.kind() == MuFormula::Kind::Not &&
          x.operand().kind() == MuFormula::Kind::Box &&
          x.operand().body().kind() == MuFormula::Kind::Not;
      if (x.kind() == MuFormula::Kind::Not && !left_is_diamond) {
        bool paren = min_level > kOr;
        if (paren) out += '(';
        print_mu(x.operand(), out, kOr);
        out += " | ";
        print_mu(y, out, kOr + 1);
        if (paren) out += ')';
      } else {
        bool paren = min_level > kImplies;
        if (paren) out += '(';
        print_mu(x, out, kImplies + 1);
        out += " -> ";
        print_mu(y, out, kImplies);
        if (paren) out += ')';
      }
      return;
    }
  }
  switch (f.kind()) {
    case MuFormula::Kind::Falsum:
      out += "false";
      break;
    case MuFormula::Kind::Atom:
      out += f.name();
      break;
    case MuFormula::Kind::Var:
      out += 'z';
      break;
    case MuFormula::Kind::Not:
      out += '~';
      print_mu(f.operand(), out, kUnary);
      break;
    case MuFormula::Kind::And: {
      bool paren = min_level > kAnd;
      if (paren) out += '(';
      print_mu(f.left(), out, kAnd);
      out += " & ";
      print_mu(f.right(), out, kAnd + 1);
      if (paren) out += ')';
      break;
    }
    case MuFormula::Kind::Box:
      out += '[' + f.program().to_string() + "] ";
      print_mu(f.body(), out, kUnary);
      break;
    case MuFormula::Kind::Nu: {
      bool paren = min_level > kNuLevel;
      if (paren) out += '(';
      out += "nu z. ";
      print_mu(f.operand(), out, kNuLevel);
      if (paren) out += ')';
      break;
    }
  }
}

}  // namespace

std::string MuFormula::to_string() const {
  std::string out;
  print_mu(*this, out, kNuLevel);
  return out;
}

// ---------------------------------------------------------------------------
// Models and evaluation

MuModel::MuModel(std::vector<std::string> domain,
                 std::map<std::string, Relation> transitions,
                 std::map<std::string, Bitset> valuation)
    : domain_(std::move(domain)),
      transitions_(std::move(transitions)),
      valuation_(std::move(valuation)) {
  std::size_t n = domain_.size();
  for (const auto& [atom, extent] : valuation_)
    if (extent.size() != n)
      throw ModelError("mu-model valuation of '" + atom + "' has wrong size");
  for (const auto& [program, rel] : transitions_) {
    auto& succ = succ_[program];
    auto& pred = pred_[program];
    succ.assign(n, {});
    pred.assign(n, {});
    for (auto [x, y] : rel) {
      if (x >= n || y >= n)
        throw ModelError("mu-model transition out of range");
      succ[x].push_back(y);
      pred[y].push_back(x);
    }
  }
}

std::size_t MuModel::element_index(const std::string& name) const {
  for (std::size_t i = 0; i < domain_.size(); ++i)
    if (domain_[i] == name) return i;
  throw ModelError("unknown element '" + name + "'");
}

Bitset MuModel::atom_extent(const std::string& atom) const {
  auto it = valuation_.find(atom);
  if (it != valuation_.end()) return it->second;
  return Bitset(domain_.size());
}

const std::vector<std::size_t>& MuModel::successors(const Program& p,
                                                    std::size_t x) const {
  const auto& table = p.converse ? pred_ : succ_;
  auto it = table.find(p.name);
  if (it == table.end()) return empty_;
  return it->second[x];
}

Bitset mu_eval(const MuModel& m, const MuFormula& f, const Bitset& z_extent) {
  std::size_t n = m.element_count();
  switch (f.kind()) {
    case MuFormula::Kind::Falsum:
      return Bitset(n);
    case MuFormula::Kind::Atom:
      return m.atom_extent(f.name());
    case MuFormula::Kind::Var:
      return z_extent;
    case MuFormula::Kind::Not:
      return mu_eval(m, f.operand(), z_extent).complement();
    case MuFormula::Kind::And:
      return mu_eval(m, f.left(), z_extent) & mu_eval(m, f.right(), z_extent);
    case MuFormula::Kind::Box: {
      Bitset body = mu_eval(m, f.body(), z_extent);
      Bitset out(n);
      for (std::size_t x = 0; x < n; ++x) {
        bool all_in = true;
        for (std::size_t y : m.successors(f.program(), x))
          if (!body.test(y)) {
            all_in = false;
            break;
          }
        if (all_in) out.set(x);
      }
      return out;
    }
    case MuFormula::Kind::Nu: {
      // Downward Knaster-Tarski iteration; each iterate shrinks, so the loop
      // terminates within |domain| + 1 rounds.
      Bitset z(n, true);
      for (;;) {
        Bitset next = mu_eval(m, f.operand(), z);
        next &= z;
        if (next == z) return z;
        z = next;
      }
    }
  }
  return Bitset(n);
}

Bitset mu_eval(const MuModel& m, const MuFormula& f) {
  return mu_eval(m, f, Bitset(m.element_count()));
}

// ---------------------------------------------------------------------------
// The CIEL encoding

const char* const kEdgeProgram = "edge";
const char* const kPi1Program = "pi1";
const char* const kPi2Program = "pi2";

namespace {

bool reserved_program_name(const std::string& name) {
  return name == kEdgeProgram || name == kPi1Program || name == kPi2Program;
}

void check_agent_atoms(const AgentFormula& f) {
  switch (f.kind()) {
    case AgentFormula::Kind::Falsum:
      break;
    case AgentFormula::Kind::Atom:
      if (reserved_program_name(f.name()))
        throw ModelError("agent atom '" + f.name() +
                         "' shadows a reserved program name");
      break;
    case AgentFormula::Kind::Not:
      check_agent_atoms(f.operand());
      break;
    case AgentFormula::Kind::And:
      check_agent_atoms(f.left());
      check_agent_atoms(f.right());
      break;
  }
}

MuFormula embed_agent(const AgentFormula& f) {
  switch (f.kind()) {
    case AgentFormula::Kind::Falsum:
      return MuFormula::falsum();
    case AgentFormula::Kind::Atom:
      return MuFormula::atom(f.name());
    case AgentFormula::Kind::Not:
      return MuFormula::negation(embed_agent(f.operand()));
    case AgentFormula::Kind::And:
      return MuFormula::conjunction(embed_agent(f.left()),
                                    embed_agent(f.right()));
  }
  return MuFormula::falsum();
}

// psi ~> chi: all worlds reached by one forward indistinguishability step for
// an agent satisfying psi satisfy chi.
MuFormula forward_step(const MuFormula& psi, const MuFormula& chi) {
  return MuFormula::box(
      Program{kEdgeProgram, false},
      MuFormula::implication(MuFormula::diamond(Program{kPi1Program, false}, psi),
                             MuFormula::box(Program{kPi2Program, false}, chi)));
}

// chi <~ psi: the same one step backwards, through the converse programs.
MuFormula backward_step(const MuFormula& chi, const MuFormula& psi) {
  return MuFormula::box(
      Program{kPi2Program, true},
      MuFormula::implication(MuFormula::diamond(Program{kPi1Program, false}, psi),
                             MuFormula::box(Program{kEdgeProgram, true}, chi)));
}

}  // namespace

MuFormula translate_t(const WorldFormula& f) {
  switch (f.kind()) {
    case WorldFormula::Kind::Falsum:
      return MuFormula::falsum();
    case WorldFormula::Kind::Atom:
      if (reserved_program_name(f.name()))
        throw ModelError("world atom '" + f.name() +
                         "' shadows a reserved program name");
      return MuFormula::atom(f.name());
    case WorldFormula::Kind::Not:
      return MuFormula::negation(translate_t(f.operand()));
    case WorldFormula::Kind::And:
      return MuFormula::conjunction(translate_t(f.left()),
                                    translate_t(f.right()));
    case WorldFormula::Kind::Common: {
      check_agent_atoms(f.index());
      MuFormula psi = embed_agent(f.index());
      MuFormula body = translate_t(f.body());
      MuFormula z = MuFormula::var();
      return MuFormula::nu(MuFormula::conjunction(
          MuFormula::conjunction(body, forward_step(psi, z)),
          backward_step(z, psi)));
    }
  }
  return MuFormula::falsum();
}

MuModel ciel_model_to_mu(const CielModel& m) {
  const FilteredAgentModel& am = m.agent_model();
  std::size_t na = am.agent_count();
  std::size_t nw = m.world_count();

  // Domain layout: agents, then worlds, then (agent, world) pairs.
  std::vector<std::string> domain;
  domain.reserve(na + nw + na * nw);
  for (const Agent& a : am.agents()) domain.push_back("a:" + a.name);
  for (const std::string& w : m.worlds()) domain.push_back("w:" + w);
  for (const Agent& a : am.agents())
    for (const std::string& w : m.worlds())
      domain.push_back("e:" + a.name + ":" + w);
  auto agent_elem = [&](std::size_t a) { return a; };
  auto world_elem = [&](std::size_t x) { return na + x; };
  auto pair_elem = [&](std::size_t a, std::size_t x) {
    return na + nw + a * nw + x;
  };

  std::map<std::string, Relation> transitions;
  Relation& edge = transitions[kEdgeProgram];
  Relation& pi1 = transitions[kPi1Program];
  Relation& pi2 = transitions[kPi2Program];
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t x = 0; x < nw; ++x) {
      pi1.insert({pair_elem(a, x), agent_elem(a)});
      pi2.insert({pair_elem(a, x), world_elem(x)});
    }
  for (std::size_t a = 0; a < na; ++a)
    for (auto [x, y] : m.relation(a)) edge.insert({world_elem(x), pair_elem(a, y)});

  // Agent atoms live on the agent part, world atoms on the world part; a name
  // used in both roles gets the union, which is harmless since the parts are
  // disjoint.
  std::map<std::string, Bitset> valuation;
  auto extent_of = [&](const std::string& atom) -> Bitset& {
    auto it = valuation.find(atom);
    if (it == valuation.end())
      it = valuation.emplace(atom, Bitset(domain.size())).first;
    return it->second;
  };
  for (std::size_t a = 0; a < na; ++a)
    for (const auto& [atom, value] : am.agent(a).valuation) {
      if (reserved_program_name(atom))
        throw ModelError("agent atom '" + atom +
                         "' shadows a reserved program name");
      if (value) extent_of(atom).set(agent_elem(a));
    }
  for (const auto& [atom, extent] : m.world_valuation()) {
    if (reserved_program_name(atom))
      throw ModelError("world atom '" + atom +
                       "' shadows a reserved program name");
    Bitset& bits = extent_of(atom);
    extent.for_each([&](std::size_t x) { bits.set(world_elem(x)); });
  }

  return MuModel(std::move(domain), std::move(transitions),
                 std::move(valuation));
}

CielModel mu_model_to_ciel(const MuModel& m) {
  std::size_t n = m.element_count();

  // Every domain element doubles as an agent, valued by the model's atoms.
  std::vector<Agent> agents;
  for (std::size_t i = 0; i < n; ++i) {
    Agent a;
    a.name = m.domain()[i];
    for (const auto& [atom, extent] : m.valuation())
      a.valuation[atom] = extent.test(i);
    agents.push_back(std::move(a));
  }

  std::map<std::string, Bitset> world_valuation = m.valuation();

  Program edge{kEdgeProgram, false};
  Program pi1{kPi1Program, false};
  Program pi2{kPi2Program, false};
  std::vector<Relation> indist(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t e : m.successors(edge, x)) {
        bool names_agent = false;
        for (std::size_t p1 : m.successors(pi1, e))
          if (p1 == a) names_agent = true;
        if (!names_agent) continue;
        for (std::size_t y : m.successors(pi2, e)) {
          indist[a].insert({x, y});
          indist[a].insert({y, x});
        }
      }

  CielModel raw(m.domain(), FilteredAgentModel::from_agents(std::move(agents)),
                std::move(world_valuation), std::move(indist));
  return validate(raw, ValidateMode::Normalize);
}

}  // namespace ciel
