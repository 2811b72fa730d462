#include "ciel/agentlogic.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "ciel/errors.hpp"

namespace ciel {

namespace {

void collect_atoms(const AgentFormula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case AgentFormula::Kind::Falsum:
      break;
    case AgentFormula::Kind::Atom:
      out.insert(f.name());
      break;
    case AgentFormula::Kind::Not:
      collect_atoms(f.operand(), out);
      break;
    case AgentFormula::Kind::And:
      collect_atoms(f.left(), out);
      collect_atoms(f.right(), out);
      break;
  }
}

bool eval_on(const AgentFormula& f,
             const std::map<std::string, bool>& valuation) {
  switch (f.kind()) {
    case AgentFormula::Kind::Falsum:
      return false;
    case AgentFormula::Kind::Atom: {
      auto it = valuation.find(f.name());
      return it != valuation.end() && it->second;
    }
    case AgentFormula::Kind::Not:
      return !eval_on(f.operand(), valuation);
    case AgentFormula::Kind::And:
      return eval_on(f.left(), valuation) && eval_on(f.right(), valuation);
  }
  return false;
}

bool satisfies_theory(const std::map<std::string, bool>& valuation,
                      const AgentTheory& theory) {
  for (const AgentFormula& c : theory.constraints)
    if (!eval_on(c, valuation)) return false;
  return true;
}

// Enumerates valuations of the given atoms in lexicographic order (atoms
// sorted by name, false < true) and calls f on each; stops early when f
// returns false.
template <typename F>
void for_each_valuation(const std::set<std::string>& atoms, std::size_t cap,
                        F&& f) {
  std::vector<std::string> names(atoms.begin(), atoms.end());
  std::size_t n = names.size();
  if (n >= 63 || (std::size_t{1} << n) > cap)
    throw ResourceLimitError("valuation cap exceeded: 2^" +
                             std::to_string(n) + " agent valuations");
  std::size_t total = std::size_t{1} << n;
  for (std::size_t mask = 0; mask < total; ++mask) {
    std::map<std::string, bool> v;
    for (std::size_t i = 0; i < n; ++i)
      v[names[i]] = (mask >> (n - 1 - i)) & 1u;
    if (!f(std::move(v))) return;
  }
}

std::string default_agent_name(const std::map<std::string, bool>& valuation) {
  std::string name = "v";
  for (const auto& [atom, value] : valuation) name += value ? '1' : '0';
  return name;
}

}  // namespace

AgentTheory parse_theory(std::string_view text) {
  AgentTheory theory;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    std::string_view line = end == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, end - pos);
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    bool blank = line.find_first_not_of(" \t\r") == std::string_view::npos;
    if (!blank) {
      try {
        theory.constraints.push_back(parse_agent(line));
      } catch (const ParseError& e) {
        throw ParseError("theory: " + std::string(e.what()), line_no,
                         e.column());
      }
    }
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return theory;
}

bool eval_agent(const AgentFormula& f, const Agent& a) {
  return eval_on(f, a.valuation);
}

FilteredAgentModel FilteredAgentModel::filtered(std::vector<AgentFormula> sigma,
                                                AgentTheory theory,
                                                std::size_t valuation_cap) {
  std::set<std::string> atoms;
  for (const AgentFormula& f : sigma) collect_atoms(f, atoms);
  for (const AgentFormula& c : theory.constraints) collect_atoms(c, atoms);

  FilteredAgentModel m;
  m.sigma_ = std::move(sigma);
  m.theory_ = std::move(theory);

  // One representative per sigma-satisfaction pattern; lexicographic
  // enumeration makes the representative the least valuation of its class.
  std::unordered_set<Bitset> seen_patterns;
  bool any_valuation = false;
  for_each_valuation(atoms, valuation_cap, [&](std::map<std::string, bool> v) {
    if (!satisfies_theory(v, m.theory_)) return true;
    any_valuation = true;
    Bitset pattern(m.sigma_.size());
    for (std::size_t i = 0; i < m.sigma_.size(); ++i)
      if (eval_on(m.sigma_[i], v)) pattern.set(i);
    if (seen_patterns.insert(pattern).second)
      m.agents_.push_back(Agent{default_agent_name(v), std::move(v)});
    return true;
  });

  if (!any_valuation)
    throw ModelError("unsatisfiable agent theory");
  return m;
}

FilteredAgentModel FilteredAgentModel::from_agents(std::vector<Agent> agents,
                                                   AgentTheory theory) {
  for (const Agent& a : agents)
    for (const AgentFormula& c : theory.constraints)
      if (!eval_agent(c, a))
        throw ModelError("agent '" + a.name +
                         "' violates theory constraint " + c.to_string());
  FilteredAgentModel m;
  m.agents_ = std::move(agents);
  m.theory_ = std::move(theory);
  return m;
}

Bitset FilteredAgentModel::denote(const AgentFormula& f) const {
  Bitset out(agents_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i)
    if (eval_agent(f, agents_[i])) out.set(i);
  return out;
}

AgentFormula FilteredAgentModel::characteristic(std::size_t i) const {
  const Agent& a = agents_[i];
  std::vector<AgentFormula> parts;
  for (const AgentFormula& s : sigma_)
    parts.push_back(eval_agent(s, a) ? s : AgentFormula::negation(s));
  if (parts.empty()) return AgentFormula::top();
  AgentFormula out = parts[0];
  for (std::size_t k = 1; k < parts.size(); ++k)
    out = AgentFormula::conjunction(out, parts[k]);
  return out;
}

std::vector<AgentFormula> FilteredAgentModel::agent_closure() const {
  std::vector<AgentFormula> out;
  std::unordered_set<AgentFormula> seen;
  auto add = [&](const AgentFormula& f) {
    if (seen.insert(f).second) out.push_back(f);
  };
  for (const AgentFormula& s : sigma_) add(s);
  for (std::size_t i = 0; i < agents_.size(); ++i) add(characteristic(i));
  return out;
}

bool entails(const AgentFormula& gamma, const AgentFormula& psi,
             const AgentTheory& theory, std::size_t valuation_cap) {
  std::set<std::string> atoms;
  collect_atoms(gamma, atoms);
  collect_atoms(psi, atoms);
  for (const AgentFormula& c : theory.constraints) collect_atoms(c, atoms);
  bool holds = true;
  for_each_valuation(atoms, valuation_cap, [&](std::map<std::string, bool> v) {
    if (!satisfies_theory(v, theory)) return true;
    if (eval_on(gamma, v) && !eval_on(psi, v)) {
      holds = false;
      return false;
    }
    return true;
  });
  return holds;
}

bool sat_agent(const std::vector<AgentFormula>& formulas,
               const AgentTheory& theory, std::size_t valuation_cap) {
  std::set<std::string> atoms;
  for (const AgentFormula& f : formulas) collect_atoms(f, atoms);
  for (const AgentFormula& c : theory.constraints) collect_atoms(c, atoms);
  bool found = false;
  for_each_valuation(atoms, valuation_cap, [&](std::map<std::string, bool> v) {
    if (!satisfies_theory(v, theory)) return true;
    for (const AgentFormula& f : formulas)
      if (!eval_on(f, v)) return true;
    found = true;
    return false;
  });
  return found;
}

}  // namespace ciel
