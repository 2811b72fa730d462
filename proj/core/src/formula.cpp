#include "ciel/formula.hpp"

#include <cassert>
#include <cctype>
#include <unordered_set>
#include <utility>

namespace ciel {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

std::size_t hash_string(const std::string& s) {
  return std::hash<std::string>{}(s);
}

}  // namespace

// ---------------------------------------------------------------------------
// AgentFormula

AgentFormula AgentFormula::make(Node n) {
  return AgentFormula(std::make_shared<const Node>(std::move(n)));
}

AgentFormula AgentFormula::falsum() {
  static const AgentFormula f = make(
      Node{Kind::Falsum, mix(1, 0x5f), 1, {}, nullptr, nullptr});
  return f;
}

AgentFormula AgentFormula::atom(std::string name) {
  assert(!name.empty());
  std::size_t h = mix(2, hash_string(name));
  return make(Node{Kind::Atom, h, 1, std::move(name), nullptr, nullptr});
}

AgentFormula AgentFormula::negation(AgentFormula f) {
  std::size_t h = mix(3, f.hash());
  return make(Node{Kind::Not, h, 1 + f.size(), {}, f.node_, nullptr});
}

AgentFormula AgentFormula::conjunction(AgentFormula l, AgentFormula r) {
  std::size_t h = mix(mix(4, l.hash()), r.hash());
  return make(Node{Kind::And, h, 1 + l.size() + r.size(), {}, l.node_, r.node_});
}

AgentFormula AgentFormula::top() { return negation(falsum()); }
AgentFormula AgentFormula::disjunction(AgentFormula l, AgentFormula r) {
  return negation(conjunction(negation(l), negation(r)));
}
AgentFormula AgentFormula::implication(AgentFormula l, AgentFormula r) {
  return negation(conjunction(l, negation(r)));
}
AgentFormula AgentFormula::equivalence(AgentFormula l, AgentFormula r) {
  return conjunction(implication(l, r), implication(r, l));
}

const std::string& AgentFormula::name() const {
  assert(kind() == Kind::Atom);
  return node_->name;
}
AgentFormula AgentFormula::operand() const {
  assert(kind() == Kind::Not);
  return AgentFormula(node_->a);
}
AgentFormula AgentFormula::left() const {
  assert(kind() == Kind::And);
  return AgentFormula(node_->a);
}
AgentFormula AgentFormula::right() const {
  assert(kind() == Kind::And);
  return AgentFormula(node_->b);
}

bool AgentFormula::operator==(const AgentFormula& o) const {
  if (node_ == o.node_) return true;
  if (node_->hash != o.node_->hash || node_->kind != o.node_->kind) return false;
  switch (kind()) {
    case Kind::Falsum: return true;
    case Kind::Atom: return node_->name == o.node_->name;
    case Kind::Not: return operand() == o.operand();
    case Kind::And: return left() == o.left() && right() == o.right();
  }
  return false;
}

// ---------------------------------------------------------------------------
// WorldFormula

WorldFormula WorldFormula::make(Node n) {
  return WorldFormula(std::make_shared<const Node>(std::move(n)));
}

WorldFormula WorldFormula::falsum() {
  static const WorldFormula f = make(
      Node{Kind::Falsum, mix(11, 0x5f), 1, {}, std::nullopt, nullptr, nullptr});
  return f;
}

WorldFormula WorldFormula::atom(std::string name) {
  assert(!name.empty());
  std::size_t h = mix(12, hash_string(name));
  return make(
      Node{Kind::Atom, h, 1, std::move(name), std::nullopt, nullptr, nullptr});
}

WorldFormula WorldFormula::negation(WorldFormula f) {
  std::size_t h = mix(13, f.hash());
  return make(
      Node{Kind::Not, h, 1 + f.size(), {}, std::nullopt, f.node_, nullptr});
}

WorldFormula WorldFormula::conjunction(WorldFormula l, WorldFormula r) {
  std::size_t h = mix(mix(14, l.hash()), r.hash());
  return make(Node{Kind::And, h, 1 + l.size() + r.size(), {}, std::nullopt,
                   l.node_, r.node_});
}

WorldFormula WorldFormula::common(AgentFormula index, WorldFormula body) {
  std::size_t h = mix(mix(15, index.hash()), body.hash());
  return make(Node{Kind::Common, h, 1 + index.size() + body.size(), {},
                   std::move(index), body.node_, nullptr});
}

WorldFormula WorldFormula::top() { return negation(falsum()); }
WorldFormula WorldFormula::disjunction(WorldFormula l, WorldFormula r) {
  return negation(conjunction(negation(l), negation(r)));
}
WorldFormula WorldFormula::implication(WorldFormula l, WorldFormula r) {
  return negation(conjunction(l, negation(r)));
}
WorldFormula WorldFormula::equivalence(WorldFormula l, WorldFormula r) {
  return conjunction(implication(l, r), implication(r, l));
}
WorldFormula WorldFormula::possibly(AgentFormula index, WorldFormula body) {
  return negation(common(std::move(index), negation(std::move(body))));
}

const std::string& WorldFormula::name() const {
  assert(kind() == Kind::Atom);
  return node_->name;
}
WorldFormula WorldFormula::operand() const {
  assert(kind() == Kind::Not);
  return WorldFormula(node_->a);
}
WorldFormula WorldFormula::left() const {
  assert(kind() == Kind::And);
  return WorldFormula(node_->a);
}
WorldFormula WorldFormula::right() const {
  assert(kind() == Kind::And);
  return WorldFormula(node_->b);
}
const AgentFormula& WorldFormula::index() const {
  assert(kind() == Kind::Common);
  return *node_->index;
}
WorldFormula WorldFormula::body() const {
  assert(kind() == Kind::Common);
  return WorldFormula(node_->a);
}

bool WorldFormula::operator==(const WorldFormula& o) const {
  if (node_ == o.node_) return true;
  if (node_->hash != o.node_->hash || node_->kind != o.node_->kind) return false;
  switch (kind()) {
    case Kind::Falsum: return true;
    case Kind::Atom: return node_->name == o.node_->name;
    case Kind::Not: return operand() == o.operand();
    case Kind::And: return left() == o.left() && right() == o.right();
    case Kind::Common: return index() == o.index() && body() == o.body();
  }
  return false;
}

// ---------------------------------------------------------------------------
// Printing. The printer recovers the sugar the parser expanded (true, |, ->),
// which keeps parse-of-print the identity while staying readable. Binding
// strength: unary and modalities, then &, then |, then ->.

namespace {

enum PrintLevel { kImplies = 0, kOr = 1, kAnd = 2, kUnary = 3 };

// ~(X & ~Y) is X -> Y, and X' | Y when X = ~X'.
template <typename F>
struct SugarParts {
  bool is_or = false;
  F left;
  F right;
};

template <typename F>
std::optional<SugarParts<F>> match_sugar(const F& f) {
  if (f.kind() != F::Kind::Not) return std::nullopt;
  F inner = f.operand();
  if (inner.kind() != F::Kind::And || inner.right().kind() != F::Kind::Not)
    return std::nullopt;
  F x = inner.left();
  F y = inner.right().operand();
  if (x.kind() == F::Kind::Not)
    return SugarParts<F>{true, x.operand(), y};
  return SugarParts<F>{false, x, y};
}

void print_agent(const AgentFormula& f, std::string& out, int min_level);

void print_world(const WorldFormula& f, std::string& out, int min_level);

template <typename F, typename Printer>
bool print_common_shapes(const F& f, std::string& out, int min_level,
                         Printer&& print) {
  if (f.kind() == F::Kind::Not && f.operand().kind() == F::Kind::Falsum) {
    out += "true";
    return true;
  }
  if (auto sugar = match_sugar(f)) {
    if (sugar->is_or) {
      bool paren = min_level > kOr;
      if (paren) out += '(';
      print(sugar->left, out, kOr);
      out += " | ";
      print(sugar->right, out, kOr + 1);
      if (paren) out += ')';
    } else {
      bool paren = min_level > kImplies;
      if (paren) out += '(';
      print(sugar->left, out, kImplies + 1);
      out += " -> ";
      print(sugar->right, out, kImplies);  // right-associative
      if (paren) out += ')';
    }
    return true;
  }
  return false;
}

void print_agent(const AgentFormula& f, std::string& out, int min_level) {
  if (print_common_shapes(f, out, min_level,
                          [](const AgentFormula& g, std::string& o, int l) {
                            print_agent(g, o, l);
                          }))
    return;
  switch (f.kind()) {
    case AgentFormula::Kind::Falsum:
      out += "false";
      break;
    case AgentFormula::Kind::Atom:
      out += f.name();
      break;
    case AgentFormula::Kind::Not:
      out += '~';
      print_agent(f.operand(), out, kUnary);
      break;
    case AgentFormula::Kind::And: {
      bool paren = min_level > kAnd;
      if (paren) out += '(';
      print_agent(f.left(), out, kAnd);
      out += " & ";
      print_agent(f.right(), out, kAnd + 1);
      if (paren) out += ')';
      break;
    }
  }
}

void print_world(const WorldFormula& f, std::string& out, int min_level) {
  if (print_common_shapes(f, out, min_level,
                          [](const WorldFormula& g, std::string& o, int l) {
                            print_world(g, o, l);
                          }))
    return;
  switch (f.kind()) {
    case WorldFormula::Kind::Falsum:
      out += "false";
      break;
    case WorldFormula::Kind::Atom:
      out += f.name();
      break;
    case WorldFormula::Kind::Not:
      out += '~';
      print_world(f.operand(), out, kUnary);
      break;
    case WorldFormula::Kind::And: {
      bool paren = min_level > kAnd;
      if (paren) out += '(';
      print_world(f.left(), out, kAnd);
      out += " & ";
      print_world(f.right(), out, kAnd + 1);
      if (paren) out += ')';
      break;
    }
    case WorldFormula::Kind::Common:
      out += "C[";
      print_agent(f.index(), out, kImplies);
      out += "] ";
      print_world(f.body(), out, kUnary);
      break;
  }
}

}  // namespace

std::string AgentFormula::to_string() const {
  std::string out;
  print_agent(*this, out, kImplies);
  return out;
}

std::string WorldFormula::to_string() const {
  std::string out;
  print_world(*this, out, kImplies);
  return out;
}

// ---------------------------------------------------------------------------
// Normalized negation

WorldFormula nneg(const WorldFormula& f) {
  if (f.kind() == WorldFormula::Kind::Not) return f.operand();
  return WorldFormula::negation(f);
}

AgentFormula nneg(const AgentFormula& f) {
  if (f.kind() == AgentFormula::Kind::Not) return f.operand();
  return AgentFormula::negation(f);
}

// ---------------------------------------------------------------------------
// Subformulae

namespace {

void collect_world(const WorldFormula& f, std::vector<WorldFormula>& out,
                   std::unordered_set<WorldFormula>& seen) {
  if (!seen.insert(f).second) return;
  out.push_back(f);
  switch (f.kind()) {
    case WorldFormula::Kind::Falsum:
    case WorldFormula::Kind::Atom:
      break;
    case WorldFormula::Kind::Not:
      collect_world(f.operand(), out, seen);
      break;
    case WorldFormula::Kind::And:
      collect_world(f.left(), out, seen);
      collect_world(f.right(), out, seen);
      break;
    case WorldFormula::Kind::Common:
      collect_world(f.body(), out, seen);
      break;
  }
}

void collect_agent(const AgentFormula& f, std::vector<AgentFormula>& out,
                   std::unordered_set<AgentFormula>& seen) {
  if (!seen.insert(f).second) return;
  out.push_back(f);
  switch (f.kind()) {
    case AgentFormula::Kind::Falsum:
    case AgentFormula::Kind::Atom:
      break;
    case AgentFormula::Kind::Not:
      collect_agent(f.operand(), out, seen);
      break;
    case AgentFormula::Kind::And:
      collect_agent(f.left(), out, seen);
      collect_agent(f.right(), out, seen);
      break;
  }
}

void collect_indices(const WorldFormula& f, std::vector<AgentFormula>& out,
                     std::unordered_set<AgentFormula>& seen) {
  switch (f.kind()) {
    case WorldFormula::Kind::Falsum:
    case WorldFormula::Kind::Atom:
      break;
    case WorldFormula::Kind::Not:
      collect_indices(f.operand(), out, seen);
      break;
    case WorldFormula::Kind::And:
      collect_indices(f.left(), out, seen);
      collect_indices(f.right(), out, seen);
      break;
    case WorldFormula::Kind::Common:
      collect_agent(f.index(), out, seen);
      collect_indices(f.body(), out, seen);
      break;
  }
}

}  // namespace

std::vector<WorldFormula> subformulae(const WorldFormula& f) {
  std::vector<WorldFormula> out;
  std::unordered_set<WorldFormula> seen;
  collect_world(f, out, seen);
  return out;
}

std::vector<AgentFormula> agent_subformulae(const WorldFormula& f) {
  std::vector<AgentFormula> out;
  std::unordered_set<AgentFormula> seen;
  collect_indices(f, out, seen);
  return out;
}

std::vector<AgentFormula> agent_subformulae(const AgentFormula& f) {
  std::vector<AgentFormula> out;
  std::unordered_set<AgentFormula> seen;
  collect_agent(f, out, seen);
  return out;
}

// ---------------------------------------------------------------------------
// Closure

ClosureSet closure(const WorldFormula& root,
                   const std::vector<AgentFormula>& agent_closure,
                   std::size_t cap) {
  ClosureSet cs{root, {}, agent_closure, {}};

  auto add = [&](const WorldFormula& f) -> bool {
    if (cs.index.count(f)) return false;
    if (cs.world_formulas.size() >= cap)
      throw ResourceLimitError(
          "closure cap exceeded (" + std::to_string(cap) + " formulas)");
    cs.index.emplace(f, cs.world_formulas.size());
    cs.world_formulas.push_back(f);
    return true;
  };

  add(root);
  // Work through the vector as a queue; every rule only appends.
  for (std::size_t i = 0; i < cs.world_formulas.size(); ++i) {
    WorldFormula f = cs.world_formulas[i];
    add(nneg(f));
    switch (f.kind()) {
      case WorldFormula::Kind::Falsum:
      case WorldFormula::Kind::Atom:
        break;
      case WorldFormula::Kind::Not:
        add(f.operand());
        break;
      case WorldFormula::Kind::And:
        add(f.left());
        add(f.right());
        break;
      case WorldFormula::Kind::Common:
        add(f.body());
        for (const AgentFormula& psi : agent_closure)
          add(WorldFormula::common(psi, f.body()));
        break;
    }
  }
  return cs;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok {
  End, Ident, True, False, Not, And, Or, Implies, Iff,
  LParen, RParen, LBracket, RBracket, Comma
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_ = {Tok::End, "", line_, col_};
      return;
    }
    char c = src_[pos_];
    auto single = [&](Tok k) {
      tok_ = {k, std::string(1, c), line_, col_};
      ++pos_;
      ++col_;
    };
    switch (c) {
      case '~': single(Tok::Not); return;
      case '&': single(Tok::And); return;
      case '|': single(Tok::Or); return;
      case '(': single(Tok::LParen); return;
      case ')': single(Tok::RParen); return;
      case '[': single(Tok::LBracket); return;
      case ']': single(Tok::RBracket); return;
      case ',': single(Tok::Comma); return;
      case '-':
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
          tok_ = {Tok::Implies, "->", line_, col_};
          pos_ += 2;
          col_ += 2;
          return;
        }
        throw ParseError("unknown operator '-'", line_, col_);
      case '<':
        if (src_.substr(pos_, 3) == "<->") {
          tok_ = {Tok::Iff, "<->", line_, col_};
          pos_ += 3;
          col_ += 3;
          return;
        }
        throw ParseError("unknown operator '<'", line_, col_);
      default:
        break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        ++pos_;
        ++col_;
      }
      std::string word(src_.substr(start, pos_ - start));
      if (word == "true")
        tok_ = {Tok::True, word, tok_.line, tok_.col};
      else if (word == "false")
        tok_ = {Tok::False, word, tok_.line, tok_.col};
      else
        tok_ = {Tok::Ident, word, tok_.line, tok_.col};
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_,
                     col_);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1, col_ = 1;
  Token tok_{Tok::End, "", 1, 1};
};

// Recursive-descent parser shared by the world and agent grammars; the agent
// grammar simply has no modalities.
class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  WorldFormula parse_world_formula() {
    WorldFormula f = world_iff();
    expect_end();
    return f;
  }

  AgentFormula parse_agent_formula() {
    AgentFormula f = agent_iff();
    expect_end();
    return f;
  }

 private:
  void expect_end() {
    const Token& t = lex_.peek();
    if (t.kind != Tok::End)
      throw ParseError("unexpected trailing input '" + t.text + "'", t.line,
                       t.col);
  }

  [[noreturn]] void fail(const std::string& msg) {
    const Token& t = lex_.peek();
    throw ParseError(msg, t.line, t.col);
  }

  void expect(Tok k, const char* what) {
    if (lex_.peek().kind != k) fail(std::string("expected ") + what);
    lex_.take();
  }

  // --- world grammar ---

  WorldFormula world_iff() {
    WorldFormula l = world_implies();
    if (lex_.peek().kind == Tok::Iff) {
      lex_.take();
      return WorldFormula::equivalence(l, world_iff());
    }
    return l;
  }
  WorldFormula world_implies() {
    WorldFormula l = world_or();
    if (lex_.peek().kind == Tok::Implies) {
      lex_.take();
      return WorldFormula::implication(l, world_implies());
    }
    return l;
  }
  WorldFormula world_or() {
    WorldFormula l = world_and();
    while (lex_.peek().kind == Tok::Or) {
      lex_.take();
      l = WorldFormula::disjunction(l, world_and());
    }
    return l;
  }
  WorldFormula world_and() {
    WorldFormula l = world_unary();
    while (lex_.peek().kind == Tok::And) {
      lex_.take();
      l = WorldFormula::conjunction(l, world_unary());
    }
    return l;
  }
  WorldFormula world_unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Not) {
      lex_.take();
      return WorldFormula::negation(world_unary());
    }
    if (t.kind == Tok::Ident && (t.text == "C" || t.text == "P")) {
      // Only a modality when immediately followed by '['; otherwise an atom.
      Token name = lex_.take();
      if (lex_.peek().kind == Tok::LBracket) {
        lex_.take();
        AgentFormula idx = agent_iff();
        if (lex_.peek().kind != Tok::RBracket)
          fail("unbalanced brackets: expected ']'");
        lex_.take();
        WorldFormula body = world_unary();
        return name.text == "C" ? WorldFormula::common(idx, body)
                                : WorldFormula::possibly(idx, body);
      }
      return WorldFormula::atom(name.text);
    }
    return world_primary();
  }
  WorldFormula world_primary() {
    Token t = lex_.take();
    switch (t.kind) {
      case Tok::False: return WorldFormula::falsum();
      case Tok::True: return WorldFormula::top();
      case Tok::Ident: return WorldFormula::atom(t.text);
      case Tok::LParen: {
        WorldFormula f = world_iff();
        if (lex_.peek().kind != Tok::RParen)
          fail("unbalanced brackets: expected ')'");
        lex_.take();
        return f;
      }
      default:
        throw ParseError("expected a formula, found '" + t.text + "'", t.line,
                         t.col);
    }
  }

  // --- agent grammar ---

  AgentFormula agent_iff() {
    AgentFormula l = agent_implies();
    if (lex_.peek().kind == Tok::Iff) {
      lex_.take();
      return AgentFormula::equivalence(l, agent_iff());
    }
    return l;
  }
  AgentFormula agent_implies() {
    AgentFormula l = agent_or();
    if (lex_.peek().kind == Tok::Implies) {
      lex_.take();
      return AgentFormula::implication(l, agent_implies());
    }
    return l;
  }
  AgentFormula agent_or() {
    AgentFormula l = agent_and();
    while (lex_.peek().kind == Tok::Or) {
      lex_.take();
      l = AgentFormula::disjunction(l, agent_and());
    }
    return l;
  }
  AgentFormula agent_and() {
    AgentFormula l = agent_unary();
    while (lex_.peek().kind == Tok::And) {
      lex_.take();
      l = AgentFormula::conjunction(l, agent_unary());
    }
    return l;
  }
  AgentFormula agent_unary() {
    if (lex_.peek().kind == Tok::Not) {
      lex_.take();
      return AgentFormula::negation(agent_unary());
    }
    return agent_primary();
  }
  AgentFormula agent_primary() {
    Token t = lex_.take();
    switch (t.kind) {
      case Tok::False: return AgentFormula::falsum();
      case Tok::True: return AgentFormula::top();
      case Tok::Ident: return AgentFormula::atom(t.text);
      case Tok::LParen: {
        AgentFormula f = agent_iff();
        if (lex_.peek().kind != Tok::RParen)
          fail("unbalanced brackets: expected ')'");
        lex_.take();
        return f;
      }
      default:
        throw ParseError(
            "expected an agent formula, found '" + t.text + "'", t.line, t.col);
    }
  }

  Lexer lex_;
};

}  // namespace

WorldFormula parse_world(std::string_view text) {
  return Parser(text).parse_world_formula();
}

AgentFormula parse_agent(std::string_view text) {
  return Parser(text).parse_agent_formula();
}

}  // namespace ciel
