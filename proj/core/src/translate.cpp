#include "ciel/translate.hpp"

#include "ciel/errors.hpp"

namespace ciel {

std::string gel_agent_atom(const std::string& name) { return "p_" + name; }

WorldFormula gel_to_ciel(const GelFormula& f) {
  switch (f.kind()) {
    case GelFormula::Kind::Falsum:
      return WorldFormula::falsum();
    case GelFormula::Kind::Atom:
      return WorldFormula::atom(f.name());
    case GelFormula::Kind::Not:
      return WorldFormula::negation(gel_to_ciel(f.operand()));
    case GelFormula::Kind::And:
      return WorldFormula::conjunction(gel_to_ciel(f.left()),
                                       gel_to_ciel(f.right()));
    case GelFormula::Kind::Common: {
      const auto& group = f.group();
      AgentFormula index = AgentFormula::atom(gel_agent_atom(group[0]));
      for (std::size_t i = 1; i < group.size(); ++i)
        index = AgentFormula::disjunction(
            index, AgentFormula::atom(gel_agent_atom(group[i])));
      return WorldFormula::common(index, gel_to_ciel(f.body()));
    }
  }
  return WorldFormula::falsum();
}

CielModel gel_model_to_ciel(const GelModel& m) {
  std::vector<Agent> agents;
  for (const std::string& name : m.agent_names()) {
    Agent a;
    a.name = name;
    for (const std::string& other : m.agent_names())
      a.valuation[gel_agent_atom(other)] = (other == name);
    agents.push_back(std::move(a));
  }
  std::vector<Relation> indist;
  for (std::size_t i = 0; i < m.agent_names().size(); ++i)
    indist.push_back(m.relation(i));
  return CielModel(m.worlds(), FilteredAgentModel::from_agents(std::move(agents)),
                   m.world_valuation(), std::move(indist));
}

GelModel ciel_model_to_gel(const CielModel& m,
                           const std::vector<std::string>& names) {
  const FilteredAgentModel& am = m.agent_model();
  std::vector<Relation> indist;
  for (const std::string& name : names) {
    std::string atom = gel_agent_atom(name);
    bool known = false;
    for (const Agent& a : am.agents())
      if (a.valuation.count(atom)) known = true;
    if (!known)
      throw ModelError("agent model does not interpret '" + atom +
                       "' (needed for GEL agent '" + name + "')");
    // The GEL relation of a name is the group relation of the agents its
    // atom denotes: reflexive-symmetric-transitive closure of their union.
    Bitset members = am.denote(AgentFormula::atom(atom));
    Relation rel;
    for (std::size_t x = 0; x < m.world_count(); ++x) {
      Bitset cls = group_reach(m, members, x);
      cls.for_each([&](std::size_t y) { rel.insert({x, y}); });
    }
    indist.push_back(std::move(rel));
  }
  return GelModel(m.worlds(), names, m.world_valuation(), std::move(indist));
}

GelFormula ciel_to_gel(const WorldFormula& f, const FilteredAgentModel& m) {
  switch (f.kind()) {
    case WorldFormula::Kind::Falsum:
      return GelFormula::falsum();
    case WorldFormula::Kind::Atom:
      return GelFormula::atom(f.name());
    case WorldFormula::Kind::Not:
      return GelFormula::negation(ciel_to_gel(f.operand(), m));
    case WorldFormula::Kind::And:
      return GelFormula::conjunction(ciel_to_gel(f.left(), m),
                                     ciel_to_gel(f.right(), m));
    case WorldFormula::Kind::Common: {
      Bitset members = m.denote(f.index());
      if (members.none())
        throw ModelError("C-index " + f.index().to_string() +
                         " denotes no agent; GEL groups must be nonempty");
      std::vector<std::string> group;
      members.for_each([&](std::size_t i) { group.push_back(m.agent(i).name); });
      return GelFormula::common(std::move(group), ciel_to_gel(f.body(), m));
    }
  }
  return GelFormula::falsum();
}

}  // namespace ciel
