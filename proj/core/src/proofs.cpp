#include "ciel/proofs.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

#include "ciel/errors.hpp"

namespace ciel {

namespace {

using Kind = WorldFormula::Kind;

// Core-AST implication decomposition: ~(a & ~b) is a -> b.
std::optional<std::pair<WorldFormula, WorldFormula>> match_implication(
    const WorldFormula& f) {
  if (f.kind() != Kind::Not) return std::nullopt;
  WorldFormula inner = f.operand();
  if (inner.kind() != Kind::And) return std::nullopt;
  if (inner.right().kind() != Kind::Not) return std::nullopt;
  return std::make_pair(inner.left(), inner.right().operand());
}

void collect_letters(const WorldFormula& f, std::vector<WorldFormula>& letters,
                     std::unordered_map<WorldFormula, std::size_t>& index) {
  switch (f.kind()) {
    case Kind::Falsum:
      return;
    case Kind::Not:
      collect_letters(f.operand(), letters, index);
      return;
    case Kind::And:
      collect_letters(f.left(), letters, index);
      collect_letters(f.right(), letters, index);
      return;
    case Kind::Atom:
    case Kind::Common:
      if (index.emplace(f, letters.size()).second) letters.push_back(f);
      return;
  }
}

bool eval_skeleton(const WorldFormula& f,
                   const std::unordered_map<WorldFormula, std::size_t>& index,
                   std::size_t mask) {
  switch (f.kind()) {
    case Kind::Falsum:
      return false;
    case Kind::Not:
      return !eval_skeleton(f.operand(), index, mask);
    case Kind::And:
      return eval_skeleton(f.left(), index, mask) &&
             eval_skeleton(f.right(), index, mask);
    case Kind::Atom:
    case Kind::Common:
      return (mask >> index.at(f)) & 1u;
  }
  return false;
}

}  // namespace

bool is_tautology(const WorldFormula& f, std::size_t assignment_cap) {
  std::vector<WorldFormula> letters;
  std::unordered_map<WorldFormula, std::size_t> index;
  collect_letters(f, letters, index);
  if (letters.size() >= 63 || (std::size_t{1} << letters.size()) > assignment_cap)
    throw ResourceLimitError("tautology check cap exceeded: 2^" +
                             std::to_string(letters.size()) + " assignments");
  std::size_t total = std::size_t{1} << letters.size();
  for (std::size_t mask = 0; mask < total; ++mask)
    if (!eval_skeleton(f, index, mask)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Checking

namespace {

std::string rule_name(Justification::Rule r) {
  switch (r) {
    case Justification::Rule::Taut: return "TAUT";
    case Justification::Rule::T: return "T";
    case Justification::Rule::Bot: return "BOT";
    case Justification::Rule::K: return "K";
    case Justification::Rule::Four: return "4";
    case Justification::Rule::Five: return "5";
    case Justification::Rule::Ind: return "IND";
    case Justification::Rule::MP: return "MP";
    case Justification::Rule::Nec: return "NEC";
    case Justification::Rule::AM: return "AM";
  }
  return "?";
}

struct LineFailure {
  std::string message;
};

// Throws LineFailure on mismatch.
void check_line(const Derivation& d, std::size_t i, const AgentTheory& theory) {
  const DerivationLine& line = d.lines[i];
  const Justification& j = line.justification;
  auto fail = [&](const std::string& msg) -> void {
    throw LineFailure{rule_name(j.rule) + ": " + msg};
  };
  auto need_agent = [&](const std::optional<AgentFormula>& f,
                        const char* key) -> const AgentFormula& {
    if (!f) fail(std::string("missing binding ") + key);
    return *f;
  };
  auto need_world = [&](const std::optional<WorldFormula>& f,
                        const char* key) -> const WorldFormula& {
    if (!f) fail(std::string("missing binding ") + key);
    return *f;
  };
  auto ref_line = [&](std::size_t pos) -> const WorldFormula& {
    if (pos >= j.refs.size()) fail("missing line reference");
    std::size_t r = j.refs[pos];
    if (r == 0 || r > i)
      fail("reference " + std::to_string(r) +
           " does not precede line " + std::to_string(i + 1));
    return d.lines[r - 1].formula;
  };
  auto expect = [&](const WorldFormula& expected) {
    if (line.formula != expected)
      fail("formula does not match the instantiated schema " +
           expected.to_string());
  };

  switch (j.rule) {
    case Justification::Rule::Taut:
      if (!is_tautology(line.formula))
        fail("not a propositional tautology in the Boolean skeleton");
      return;
    case Justification::Rule::T: {
      const AgentFormula& psi = need_agent(j.psi, "psi");
      const WorldFormula& phi = need_world(j.phi, "phi");
      expect(WorldFormula::implication(WorldFormula::common(psi, phi), phi));
      return;
    }
    case Justification::Rule::Bot: {
      const WorldFormula& phi = need_world(j.phi, "phi");
      expect(WorldFormula::implication(
          phi, WorldFormula::common(AgentFormula::falsum(), phi)));
      return;
    }
    case Justification::Rule::K: {
      const AgentFormula& psi = need_agent(j.psi, "psi");
      const WorldFormula& phi = need_world(j.phi, "phi");
      const WorldFormula& gamma = need_world(j.gamma_world, "gamma");
      expect(WorldFormula::implication(
          WorldFormula::common(psi, WorldFormula::implication(phi, gamma)),
          WorldFormula::implication(WorldFormula::common(psi, phi),
                                    WorldFormula::common(psi, gamma))));
      return;
    }
    case Justification::Rule::Four: {
      const AgentFormula& psi = need_agent(j.psi, "psi");
      const WorldFormula& phi = need_world(j.phi, "phi");
      WorldFormula box = WorldFormula::common(psi, phi);
      expect(WorldFormula::implication(box, WorldFormula::common(psi, box)));
      return;
    }
    case Justification::Rule::Five: {
      const AgentFormula& psi = need_agent(j.psi, "psi");
      const WorldFormula& phi = need_world(j.phi, "phi");
      WorldFormula nbox = WorldFormula::negation(WorldFormula::common(psi, phi));
      expect(WorldFormula::implication(nbox, WorldFormula::common(psi, nbox)));
      return;
    }
    case Justification::Rule::Ind: {
      const AgentFormula& psi = need_agent(j.psi, "psi");
      const AgentFormula& chi = need_agent(j.chi, "chi");
      const WorldFormula& phi = need_world(j.phi, "phi");
      AgentFormula join = AgentFormula::disjunction(psi, chi);
      expect(WorldFormula::implication(
          WorldFormula::common(
              join, WorldFormula::implication(
                        phi, WorldFormula::conjunction(
                                 WorldFormula::common(psi, phi),
                                 WorldFormula::common(chi, phi)))),
          WorldFormula::implication(phi, WorldFormula::common(join, phi))));
      return;
    }
    case Justification::Rule::MP: {
      if (j.refs.size() != 2) fail("MP takes two line references");
      const WorldFormula& antecedent = ref_line(0);
      const WorldFormula& implication = ref_line(1);
      auto parts = match_implication(implication);
      if (!parts)
        fail("line " + std::to_string(j.refs[1]) + " is not an implication");
      if (parts->first != antecedent)
        fail("line " + std::to_string(j.refs[0]) +
             " is not the antecedent of line " + std::to_string(j.refs[1]));
      expect(parts->second);
      return;
    }
    case Justification::Rule::Nec: {
      if (j.refs.size() != 1) fail("NEC takes one line reference");
      const AgentFormula& psi = need_agent(j.psi, "psi");
      expect(WorldFormula::common(psi, ref_line(0)));
      return;
    }
    case Justification::Rule::AM: {
      const AgentFormula& gamma = need_agent(j.gamma_agent, "gamma");
      const AgentFormula& psi = need_agent(j.psi, "psi");
      if (!entails(gamma, psi, theory))
        fail("side condition fails: " + gamma.to_string() +
             " does not entail " + psi.to_string());
      if (j.refs.empty()) {
        // Rule form: the implication C[psi]X -> C[gamma]X.
        auto parts = match_implication(line.formula);
        if (!parts || parts->first.kind() != Kind::Common ||
            parts->second.kind() != Kind::Common)
          fail("formula is not an implication between C-formulas");
        if (parts->first.index() != psi) fail("antecedent index is not psi");
        if (parts->second.index() != gamma) fail("consequent index is not gamma");
        if (parts->first.body() != parts->second.body())
          fail("antecedent and consequent bodies differ");
        return;
      }
      if (j.refs.size() != 1) fail("AM takes at most one line reference");
      const WorldFormula& premise = ref_line(0);
      if (premise.kind() != Kind::Common || premise.index() != psi)
        fail("line " + std::to_string(j.refs[0]) + " is not C[psi]...");
      expect(WorldFormula::common(gamma, premise.body()));
      return;
    }
  }
}

}  // namespace

CheckReport check_derivation(const Derivation& d, const AgentTheory& theory) {
  for (std::size_t i = 0; i < d.lines.size(); ++i) {
    try {
      check_line(d, i, theory);
    } catch (const LineFailure& f) {
      return CheckReport{false, i + 1, f.message};
    }
  }
  return CheckReport{true, 0, ""};
}

// ---------------------------------------------------------------------------
// Generalized induction derivations

namespace {

class Builder {
 public:
  std::size_t emit(WorldFormula f, Justification j) {
    d_.lines.push_back(DerivationLine{std::move(f), std::move(j)});
    return d_.lines.size();
  }

  const WorldFormula& formula(std::size_t line) const {
    return d_.lines[line - 1].formula;
  }

  std::size_t taut(const WorldFormula& f) {
    return emit(f, Justification{Justification::Rule::Taut, {}, {}, {}, {}, {}, {}});
  }

  std::size_t mp(std::size_t i, std::size_t j) {
    auto parts = match_implication(formula(j));
    return emit(parts->second,
                Justification{Justification::Rule::MP, {i, j}, {}, {}, {}, {}, {}});
  }

  // From line a: P -> Q and line b: Q -> R, derive P -> R.
  std::size_t chain(std::size_t a, std::size_t b) {
    auto pq = match_implication(formula(a));
    auto qr = match_implication(formula(b));
    WorldFormula pr = WorldFormula::implication(pq->first, qr->second);
    std::size_t step = taut(WorldFormula::implication(
        formula(a), WorldFormula::implication(formula(b), pr)));
    std::size_t half = mp(a, step);
    return mp(b, half);
  }

  // From line i: A -> B, derive C[idx]A -> C[idx]B.
  std::size_t mono(std::size_t i, const AgentFormula& idx) {
    auto ab = match_implication(formula(i));
    std::size_t nec =
        emit(WorldFormula::common(idx, formula(i)),
             Justification{Justification::Rule::Nec, {i}, idx, {}, {}, {}, {}});
    std::size_t k = emit(
        WorldFormula::implication(
            formula(nec),
            WorldFormula::implication(WorldFormula::common(idx, ab->first),
                                      WorldFormula::common(idx, ab->second))),
        Justification{Justification::Rule::K, {}, idx, {}, {}, ab->first,
                      ab->second});
    return mp(nec, k);
  }

  Derivation take() { return std::move(d_); }

 private:
  Derivation d_;
};

AgentFormula big_or(const std::vector<AgentFormula>& psis, std::size_t m) {
  if (m == 0) return AgentFormula::falsum();
  AgentFormula out = psis[0];
  for (std::size_t i = 1; i < m; ++i)
    out = AgentFormula::disjunction(out, psis[i]);
  return out;
}

WorldFormula big_and_boxes(const std::vector<AgentFormula>& psis, std::size_t m,
                           const WorldFormula& phi) {
  if (m == 0) return WorldFormula::top();
  WorldFormula out = WorldFormula::common(psis[0], phi);
  for (std::size_t i = 1; i < m; ++i)
    out = WorldFormula::conjunction(out, WorldFormula::common(psis[i], phi));
  return out;
}

WorldFormula goal_formula(const std::vector<AgentFormula>& psis, std::size_t m,
                          const WorldFormula& phi) {
  AgentFormula b = big_or(psis, m);
  WorldFormula k = big_and_boxes(psis, m, phi);
  return WorldFormula::implication(
      WorldFormula::common(b, WorldFormula::implication(phi, k)),
      WorldFormula::implication(phi, WorldFormula::common(b, phi)));
}

}  // namespace

WorldFormula ind_gen_formula(const std::vector<AgentFormula>& psis,
                             const WorldFormula& phi) {
  return goal_formula(psis, psis.size(), phi);
}

Derivation gen_ind_n(const std::vector<AgentFormula>& psis,
                     const WorldFormula& phi) {
  Builder b;

  if (psis.empty()) {
    // phi -> C[false]phi by (Bot), then weaken to the stated implication.
    WorldFormula bot_inst = WorldFormula::implication(
        phi, WorldFormula::common(AgentFormula::falsum(), phi));
    std::size_t l1 =
        b.emit(bot_inst, Justification{Justification::Rule::Bot, {}, {}, {}, {},
                                       phi, {}});
    WorldFormula goal = goal_formula(psis, 0, phi);
    std::size_t l2 =
        b.taut(WorldFormula::implication(bot_inst, goal));
    b.mp(l1, l2);
    return b.take();
  }

  // n = 1: exactly a (T) instance with body phi -> C[psi1]phi.
  WorldFormula body1 =
      WorldFormula::implication(phi, WorldFormula::common(psis[0], phi));
  std::size_t last = b.emit(
      goal_formula(psis, 1, phi),
      Justification{Justification::Rule::T, {}, psis[0], {}, {}, body1, {}});

  for (std::size_t m = 1; m < psis.size(); ++m) {
    // Inductive step m -> m+1, following the (Nec)/(K)/(AM)/(4)/(Ind) proof.
    AgentFormula b_next = big_or(psis, m + 1);
    const AgentFormula& psi_next = psis[m];
    WorldFormula y = WorldFormula::implication(phi, big_and_boxes(psis, m, phi));
    WorldFormula y_next =
        WorldFormula::implication(phi, big_and_boxes(psis, m + 1, phi));
    WorldFormula a = WorldFormula::common(big_or(psis, m), y);
    WorldFormula g =
        WorldFormula::implication(phi, WorldFormula::common(big_or(psis, m), phi));
    WorldFormula imp2 =
        WorldFormula::implication(phi, WorldFormula::common(psi_next, phi));

    // s1: C[b_next]A -> C[b_next]G from the induction hypothesis.
    std::size_t s1 = b.mono(last, b_next);
    // s2: C[b_next]Y -> C[b_m]Y = A, by antimonotonicity.
    std::size_t s2 = b.emit(
        WorldFormula::implication(WorldFormula::common(b_next, y), a),
        Justification{Justification::Rule::AM, {}, b_next, {}, big_or(psis, m),
                      {}, {}});
    // s3: C[b_next]Y -> C[b_next]C[b_next]Y, by (4).
    WorldFormula box_y = WorldFormula::common(b_next, y);
    std::size_t s3 = b.emit(
        WorldFormula::implication(box_y, WorldFormula::common(b_next, box_y)),
        Justification{Justification::Rule::Four, {}, b_next, {}, {}, y, {}});
    std::size_t s4 = b.mono(s2, b_next);  // C[b_next]C[b_next]Y -> C[b_next]A
    std::size_t s5 = b.chain(s3, s4);     // C[b_next]Y -> C[b_next]A
    std::size_t s6 = b.chain(s5, s1);     // C[b_next]Y -> C[b_next]G
    // Carry the new conjunct through.
    std::size_t s7 = b.taut(WorldFormula::implication(y_next, y));
    std::size_t s8 = b.mono(s7, b_next);  // C[b_next]Y' -> C[b_next]Y
    std::size_t s9 = b.chain(s8, s6);     // C[b_next]Y' -> C[b_next]G
    std::size_t s10 = b.taut(WorldFormula::implication(y_next, imp2));
    std::size_t s11 = b.mono(s10, b_next);  // C[b_next]Y' -> C[b_next]imp2
    // s14: C[b_next]Y' -> (C[b_next]G & C[b_next]imp2)
    WorldFormula cg = WorldFormula::common(b_next, g);
    WorldFormula cimp2 = WorldFormula::common(b_next, imp2);
    std::size_t s12 = b.taut(WorldFormula::implication(
        b.formula(s9),
        WorldFormula::implication(
            b.formula(s11),
            WorldFormula::implication(WorldFormula::common(b_next, y_next),
                                      WorldFormula::conjunction(cg, cimp2)))));
    std::size_t s13 = b.mp(s9, s12);
    std::size_t s14 = b.mp(s11, s13);
    // Commute C with the conjunction: (C G & C imp2) -> C (G & imp2).
    WorldFormula g_and = WorldFormula::conjunction(g, imp2);
    std::size_t f1 = b.taut(WorldFormula::implication(
        g, WorldFormula::implication(imp2, g_and)));
    std::size_t f2 = b.mono(f1, b_next);  // C G -> C (imp2 -> G&imp2)
    std::size_t f3 = b.emit(
        WorldFormula::implication(
            WorldFormula::common(b_next, WorldFormula::implication(imp2, g_and)),
            WorldFormula::implication(cimp2, WorldFormula::common(b_next, g_and))),
        Justification{Justification::Rule::K, {}, b_next, {}, {}, imp2, g_and});
    std::size_t f4 = b.chain(f2, f3);  // C G -> (C imp2 -> C (G&imp2))
    std::size_t f5 = b.taut(WorldFormula::implication(
        b.formula(f4),
        WorldFormula::implication(WorldFormula::conjunction(cg, cimp2),
                                  WorldFormula::common(b_next, g_and))));
    std::size_t f6 = b.mp(f4, f5);
    std::size_t s16 = b.chain(s14, f6);  // C[b_next]Y' -> C[b_next](G & imp2)
    // Reshape the body and close with (Ind).
    WorldFormula ind_body = WorldFormula::implication(
        phi, WorldFormula::conjunction(
                 WorldFormula::common(big_or(psis, m), phi),
                 WorldFormula::common(psi_next, phi)));
    std::size_t s17 = b.taut(WorldFormula::implication(g_and, ind_body));
    std::size_t s18 = b.mono(s17, b_next);
    std::size_t s19 = b.chain(s16, s18);
    std::size_t s20 = b.emit(
        WorldFormula::implication(
            WorldFormula::common(b_next, ind_body),
            WorldFormula::implication(phi, WorldFormula::common(b_next, phi))),
        Justification{Justification::Rule::Ind, {}, big_or(psis, m), psi_next,
                      {}, phi, {}});
    last = b.chain(s19, s20);
  }

  return b.take();
}

bool consistent(const std::vector<WorldFormula>& gamma,
                const AgentTheory& theory, const DecideCaps& caps) {
  if (gamma.empty()) return true;
  WorldFormula conj = gamma[0];
  for (std::size_t i = 1; i < gamma.size(); ++i)
    conj = WorldFormula::conjunction(conj, gamma[i]);
  return sat(conj, theory, caps).satisfiable;
}

// ---------------------------------------------------------------------------
// Proof file format

namespace {

std::string trim(std::string s) {
  auto issp = [](unsigned char c) { return std::isspace(c); };
  while (!s.empty() && issp(s.front())) s.erase(s.begin());
  while (!s.empty() && issp(s.back())) s.pop_back();
  return s;
}

struct ArgList {
  std::vector<std::size_t> refs;
  std::unordered_map<std::string, std::string> bindings;
};

ArgList parse_args(const std::string& text, std::size_t line_no) {
  ArgList args;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  };
  for (skip(); pos < text.size(); skip()) {
    if (std::isdigit(static_cast<unsigned char>(text[pos]))) {
      std::size_t value = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        value = value * 10 + (text[pos++] - '0');
      args.refs.push_back(value);
      continue;
    }
    std::size_t key_start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '_'))
      ++pos;
    std::string key = text.substr(key_start, pos - key_start);
    if (key.empty() || pos >= text.size() || text[pos] != '=')
      throw ParseError("malformed justification argument", line_no, pos + 1);
    ++pos;
    if (pos >= text.size() || text[pos] != '{')
      throw ParseError("expected '{' after '" + key + "='", line_no, pos + 1);
    std::size_t close = text.find('}', pos);
    if (close == std::string::npos)
      throw ParseError("unbalanced brackets: missing '}'", line_no, pos + 1);
    args.bindings[key] = text.substr(pos + 1, close - pos - 1);
    pos = close + 1;
  }
  return args;
}

Justification build_justification(const std::string& rule_text,
                                  const ArgList& args, std::size_t line_no) {
  std::string rule = rule_text;
  std::transform(rule.begin(), rule.end(), rule.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  Justification j{Justification::Rule::Taut, args.refs, {}, {}, {}, {}, {}};
  auto agent_binding = [&](const char* key) -> std::optional<AgentFormula> {
    auto it = args.bindings.find(key);
    if (it == args.bindings.end()) return std::nullopt;
    return parse_agent(it->second);
  };
  auto world_binding = [&](const char* key) -> std::optional<WorldFormula> {
    auto it = args.bindings.find(key);
    if (it == args.bindings.end()) return std::nullopt;
    return parse_world(it->second);
  };
  if (rule == "TAUT") {
    j.rule = Justification::Rule::Taut;
  } else if (rule == "T") {
    j.rule = Justification::Rule::T;
    j.psi = agent_binding("psi");
    j.phi = world_binding("phi");
  } else if (rule == "BOT") {
    j.rule = Justification::Rule::Bot;
    j.phi = world_binding("phi");
  } else if (rule == "K") {
    j.rule = Justification::Rule::K;
    j.psi = agent_binding("psi");
    j.phi = world_binding("phi");
    j.gamma_world = world_binding("gamma");
  } else if (rule == "4") {
    j.rule = Justification::Rule::Four;
    j.psi = agent_binding("psi");
    j.phi = world_binding("phi");
  } else if (rule == "5") {
    j.rule = Justification::Rule::Five;
    j.psi = agent_binding("psi");
    j.phi = world_binding("phi");
  } else if (rule == "IND") {
    j.rule = Justification::Rule::Ind;
    j.psi = agent_binding("psi");
    j.chi = agent_binding("chi");
    j.phi = world_binding("phi");
  } else if (rule == "MP") {
    j.rule = Justification::Rule::MP;
  } else if (rule == "NEC") {
    j.rule = Justification::Rule::Nec;
    j.psi = agent_binding("psi");
  } else if (rule == "AM") {
    j.rule = Justification::Rule::AM;
    j.gamma_agent = agent_binding("gamma");
    j.psi = agent_binding("psi");
  } else {
    throw ParseError("unknown rule '" + rule_text + "'", line_no, 1);
  }
  return j;
}

}  // namespace

Derivation parse_derivation(std::string_view text) {
  Derivation d;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    std::string line(end == std::string_view::npos ? text.substr(pos)
                                                   : text.substr(pos, end - pos));
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      std::size_t dot = line.find('.');
      if (dot == std::string::npos)
        throw ParseError("expected '<index>.'", line_no, 1);
      std::size_t declared = 0;
      for (char c : line.substr(0, dot)) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
          throw ParseError("malformed line index", line_no, 1);
        declared = declared * 10 + (c - '0');
      }
      if (declared != d.lines.size() + 1)
        throw ParseError("line index " + std::to_string(declared) +
                             " out of order (expected " +
                             std::to_string(d.lines.size() + 1) + ")",
                         line_no, 1);
      std::size_t semi = line.find(';', dot + 1);
      if (semi == std::string::npos)
        throw ParseError("expected '; <RULE> <args>'", line_no, line.size());
      std::string formula_text = trim(line.substr(dot + 1, semi - dot - 1));
      std::string rest = trim(line.substr(semi + 1));
      std::size_t space = rest.find_first_of(" \t");
      std::string rule_text = space == std::string::npos ? rest : rest.substr(0, space);
      std::string args_text = space == std::string::npos ? "" : rest.substr(space + 1);
      if (rule_text.empty()) throw ParseError("missing rule name", line_no, semi + 1);
      WorldFormula f = parse_world(formula_text);
      ArgList args = parse_args(args_text, line_no);
      d.lines.push_back(
          DerivationLine{std::move(f), build_justification(rule_text, args, line_no)});
    }
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return d;
}

std::string to_string(const Derivation& d) {
  std::ostringstream out;
  for (std::size_t i = 0; i < d.lines.size(); ++i) {
    const DerivationLine& line = d.lines[i];
    const Justification& j = line.justification;
    out << (i + 1) << ". " << line.formula.to_string() << " ; "
        << rule_name(j.rule);
    for (std::size_t r : j.refs) out << ' ' << r;
    if (j.psi) out << " psi={" << j.psi->to_string() << '}';
    if (j.chi) out << " chi={" << j.chi->to_string() << '}';
    if (j.gamma_agent) out << " gamma={" << j.gamma_agent->to_string() << '}';
    if (j.phi) out << " phi={" << j.phi->to_string() << '}';
    if (j.gamma_world) out << " gamma={" << j.gamma_world->to_string() << '}';
    out << '\n';
  }
  return out.str();
}

}  // namespace ciel
