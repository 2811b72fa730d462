#include "ciel/gel_formula.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <unordered_set>

#include "ciel/errors.hpp"

namespace ciel {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

}  // namespace

GelFormula GelFormula::make(Node n) {
  return GelFormula(std::make_shared<const Node>(std::move(n)));
}

GelFormula GelFormula::falsum() {
  static const GelFormula f =
      make(Node{Kind::Falsum, mix(21, 0x5f), 1, {}, {}, nullptr, nullptr});
  return f;
}

GelFormula GelFormula::atom(std::string name) {
  assert(!name.empty());
  std::size_t h = mix(22, std::hash<std::string>{}(name));
  return make(Node{Kind::Atom, h, 1, std::move(name), {}, nullptr, nullptr});
}

GelFormula GelFormula::negation(GelFormula f) {
  std::size_t h = mix(23, f.hash());
  return make(Node{Kind::Not, h, 1 + f.size(), {}, {}, f.node_, nullptr});
}

GelFormula GelFormula::conjunction(GelFormula l, GelFormula r) {
  std::size_t h = mix(mix(24, l.hash()), r.hash());
  return make(
      Node{Kind::And, h, 1 + l.size() + r.size(), {}, {}, l.node_, r.node_});
}

GelFormula GelFormula::common(std::vector<std::string> group, GelFormula body) {
  std::sort(group.begin(), group.end());
  group.erase(std::unique(group.begin(), group.end()), group.end());
  if (group.empty()) throw ModelError("GEL groups must be nonempty");
  std::size_t h = mix(25, body.hash());
  for (const std::string& name : group)
    h = mix(h, std::hash<std::string>{}(name));
  return make(Node{Kind::Common, h, 1 + body.size(), {}, std::move(group),
                   body.node_, nullptr});
}

GelFormula GelFormula::top() { return negation(falsum()); }
GelFormula GelFormula::disjunction(GelFormula l, GelFormula r) {
  return negation(conjunction(negation(l), negation(r)));
}
GelFormula GelFormula::implication(GelFormula l, GelFormula r) {
  return negation(conjunction(l, negation(r)));
}

const std::string& GelFormula::name() const {
  assert(kind() == Kind::Atom);
  return node_->name;
}
GelFormula GelFormula::operand() const {
  assert(kind() == Kind::Not);
  return GelFormula(node_->a);
}
GelFormula GelFormula::left() const {
  assert(kind() == Kind::And);
  return GelFormula(node_->a);
}
GelFormula GelFormula::right() const {
  assert(kind() == Kind::And);
  return GelFormula(node_->b);
}
const std::vector<std::string>& GelFormula::group() const {
  assert(kind() == Kind::Common);
  return node_->group;
}
GelFormula GelFormula::body() const {
  assert(kind() == Kind::Common);
  return GelFormula(node_->a);
}

bool GelFormula::operator==(const GelFormula& o) const {
  if (node_ == o.node_) return true;
  if (node_->hash != o.node_->hash || node_->kind != o.node_->kind) return false;
  switch (kind()) {
    case Kind::Falsum: return true;
    case Kind::Atom: return node_->name == o.node_->name;
    case Kind::Not: return operand() == o.operand();
    case Kind::And: return left() == o.left() && right() == o.right();
    case Kind::Common: return group() == o.group() && body() == o.body();
  }
  return false;
}

namespace {

enum PrintLevel { kImplies = 0, kOr = 1, kAnd = 2, kUnary = 3 };

void print_gel(const GelFormula& f, std::string& out, int min_level) {
  // recover the sugar the parser expanded: true, |, ->
  if (f.kind() == GelFormula::Kind::Not) {
    GelFormula inner = f.operand();
    if (inner.kind() == GelFormula::Kind::Falsum) {
      out += "true";
      return;
    }
    if (inner.kind() == GelFormula::Kind::And &&
        inner.right().kind() == GelFormula::Kind::Not) {
      GelFormula x = inner.left();
      GelFormula y = inner.right().operand();
      if (x.kind() == GelFormula::Kind::Not) {
        bool paren = min_level > kOr;
        if (paren) out += '(';
        print_gel(x.operand(), out, kOr);
        out += " | ";
        print_gel(y, out, kOr + 1);
        if (paren) out += ')';
      } else {
        bool paren = min_level > kImplies;
        if (paren) out += '(';
        print_gel(x, out, kImplies + 1);
        out += " -> ";
        print_gel(y, out, kImplies);
        if (paren) out += ')';
      }
      return;
    }
  }
  switch (f.kind()) {
    case GelFormula::Kind::Falsum:
      out += "false";
      break;
    case GelFormula::Kind::Atom:
      out += f.name();
      break;
    case GelFormula::Kind::Not:
      out += '~';
      print_gel(f.operand(), out, kUnary);
      break;
    case GelFormula::Kind::And: {
      bool paren = min_level > kAnd;
      if (paren) out += '(';
      print_gel(f.left(), out, kAnd);
      out += " & ";
      print_gel(f.right(), out, kAnd + 1);
      if (paren) out += ')';
      break;
    }
    case GelFormula::Kind::Common: {
      out += "C[";
      const auto& group = f.group();
      for (std::size_t i = 0; i < group.size(); ++i)
        out += (i ? ", " : "") + group[i];
      out += "] ";
      print_gel(f.body(), out, kUnary);
      break;
    }
  }
}

}  // namespace

std::string GelFormula::to_string() const {
  std::string out;
  print_gel(*this, out, kImplies);
  return out;
}

GelFormula gel_nneg(const GelFormula& f) {
  if (f.kind() == GelFormula::Kind::Not) return f.operand();
  return GelFormula::negation(f);
}

namespace {

void collect_gel(const GelFormula& f, std::vector<GelFormula>& out,
                 std::unordered_set<GelFormula>& seen) {
  if (!seen.insert(f).second) return;
  out.push_back(f);
  switch (f.kind()) {
    case GelFormula::Kind::Falsum:
    case GelFormula::Kind::Atom:
      break;
    case GelFormula::Kind::Not:
      collect_gel(f.operand(), out, seen);
      break;
    case GelFormula::Kind::And:
      collect_gel(f.left(), out, seen);
      collect_gel(f.right(), out, seen);
      break;
    case GelFormula::Kind::Common:
      collect_gel(f.body(), out, seen);
      break;
  }
}

}  // namespace

std::vector<GelFormula> gel_subformulae(const GelFormula& f) {
  std::vector<GelFormula> out;
  std::unordered_set<GelFormula> seen;
  collect_gel(f, out, seen);
  return out;
}

// ---------------------------------------------------------------------------
// Parser. Same token set as the CIEL grammar; the group inside C[...] is a
// comma-separated identifier list.

namespace {

struct GelParser {
  std::string_view src;
  std::size_t pos = 0;
  std::size_t line = 1, col = 1;

  void skip_space() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, line, col);
  }

  bool eat(char c) {
    skip_space();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      ++col;
      return true;
    }
    return false;
  }

  bool eat_str(std::string_view s) {
    skip_space();
    if (src.substr(pos, s.size()) == s) {
      pos += s.size();
      col += s.size();
      return true;
    }
    return false;
  }

  bool peek_char(char c) {
    skip_space();
    return pos < src.size() && src[pos] == c;
  }

  std::string ident() {
    skip_space();
    if (pos >= src.size() ||
        !(std::isalpha(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      fail("expected an identifier");
    std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
      ++pos;
      ++col;
    }
    return std::string(src.substr(start, pos - start));
  }

  GelFormula parse() {
    GelFormula f = iff();
    skip_space();
    if (pos != src.size()) fail("unexpected trailing input");
    return f;
  }

  GelFormula iff() {
    GelFormula l = implies();
    if (eat_str("<->")) {
      GelFormula r = iff();
      return GelFormula::conjunction(GelFormula::implication(l, r),
                                     GelFormula::implication(r, l));
    }
    return l;
  }
  GelFormula implies() {
    GelFormula l = disj();
    if (eat_str("->")) return GelFormula::implication(l, implies());
    return l;
  }
  GelFormula disj() {
    GelFormula l = conj();
    while (true) {
      skip_space();
      if (pos < src.size() && src[pos] == '|') {
        ++pos;
        ++col;
        l = GelFormula::disjunction(l, conj());
      } else {
        return l;
      }
    }
  }
  GelFormula conj() {
    GelFormula l = unary();
    while (true) {
      skip_space();
      if (pos < src.size() && src[pos] == '&') {
        ++pos;
        ++col;
        l = GelFormula::conjunction(l, unary());
      } else {
        return l;
      }
    }
  }
  GelFormula unary() {
    skip_space();
    if (eat('~')) return GelFormula::negation(unary());
    if (pos < src.size() &&
        (std::isalpha(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
      std::string word = ident();
      if (word == "C" && peek_char('[')) {
        eat('[');
        std::vector<std::string> group;
        group.push_back(ident());
        while (eat(',')) group.push_back(ident());
        if (!eat(']')) fail("unbalanced brackets: expected ']'");
        return GelFormula::common(std::move(group), unary());
      }
      if (word == "true") return GelFormula::top();
      if (word == "false") return GelFormula::falsum();
      return GelFormula::atom(word);
    }
    if (eat('(')) {
      GelFormula f = iff();
      if (!eat(')')) fail("unbalanced brackets: expected ')'");
      return f;
    }
    fail("expected a formula");
  }
};

}  // namespace

GelFormula parse_gel(std::string_view text) { return GelParser{text}.parse(); }

}  // namespace ciel
