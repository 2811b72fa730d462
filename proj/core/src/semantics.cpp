#include "ciel/semantics.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "ciel/errors.hpp"
#include "ciel/union_find.hpp"
#include "json.hpp"

namespace ciel {

namespace {

std::vector<std::vector<std::vector<std::size_t>>> build_adjacency(
    std::size_t world_count, const std::vector<Relation>& indist) {
  std::vector<std::vector<std::vector<std::size_t>>> adj(indist.size());
  for (std::size_t a = 0; a < indist.size(); ++a) {
    adj[a].assign(world_count, {});
    for (auto [x, y] : indist[a]) {
      if (x == y) continue;
      adj[a][x].push_back(y);
      adj[a][y].push_back(x);
    }
    for (auto& ns : adj[a]) {
      std::sort(ns.begin(), ns.end());
      ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    }
  }
  return adj;
}

}  // namespace

// ---------------------------------------------------------------------------
// CielModel

CielModel::CielModel(std::vector<std::string> worlds,
                     FilteredAgentModel agent_model,
                     std::map<std::string, Bitset> world_valuation,
                     std::vector<Relation> indist)
    : worlds_(std::move(worlds)),
      agent_model_(std::move(agent_model)),
      world_valuation_(std::move(world_valuation)),
      indist_(std::move(indist)) {
  if (indist_.size() != agent_model_.agent_count())
    throw ModelError("model has " + std::to_string(indist_.size()) +
                     " relations for " +
                     std::to_string(agent_model_.agent_count()) + " agents");
  for (const auto& [atom, extent] : world_valuation_)
    if (extent.size() != worlds_.size())
      throw ModelError("valuation of '" + atom + "' has wrong world count");
  for (const Relation& rel : indist_)
    for (auto [x, y] : rel)
      if (x >= worlds_.size() || y >= worlds_.size())
        throw ModelError("relation pair out of range");
  adjacency_ = build_adjacency(worlds_.size(), indist_);
}

std::size_t CielModel::world_index(const std::string& name) const {
  for (std::size_t i = 0; i < worlds_.size(); ++i)
    if (worlds_[i] == name) return i;
  throw ModelError("unknown world '" + name + "'");
}

Bitset CielModel::atom_extent(const std::string& atom) const {
  auto it = world_valuation_.find(atom);
  if (it != world_valuation_.end()) return it->second;
  return Bitset(worlds_.size());
}

// ---------------------------------------------------------------------------
// Reachability and evaluation

Bitset group_reach(const CielModel& m, const Bitset& agents,
                   std::size_t world) {
  if (world >= m.world_count()) throw ModelError("unknown world index");
  Bitset seen(m.world_count());
  std::queue<std::size_t> queue;
  seen.set(world);
  queue.push(world);
  while (!queue.empty()) {
    std::size_t x = queue.front();
    queue.pop();
    agents.for_each([&](std::size_t a) {
      for (std::size_t y : m.adjacency(a)[x])
        if (!seen.test(y)) {
          seen.set(y);
          queue.push(y);
        }
    });
  }
  return seen;
}

Bitset group_reach(const CielModel& m, const Bitset& agents,
                   const std::string& world) {
  return group_reach(m, agents, m.world_index(world));
}

namespace {

// Partition the worlds into components of the union of the given agents'
// relations; returns a representative id per world.
std::vector<std::size_t> union_components(const CielModel& m,
                                          const Bitset& agents) {
  UnionFind uf(m.world_count());
  agents.for_each([&](std::size_t a) {
    for (std::size_t x = 0; x < m.world_count(); ++x)
      for (std::size_t y : m.adjacency(a)[x]) uf.unite(x, y);
  });
  std::vector<std::size_t> comp(m.world_count());
  for (std::size_t x = 0; x < m.world_count(); ++x) comp[x] = uf.find(x);
  return comp;
}

class Evaluator {
 public:
  explicit Evaluator(const CielModel& m) : m_(m) {}

  Bitset eval(const WorldFormula& f) {
    auto it = memo_.find(f);
    if (it != memo_.end()) return it->second;
    Bitset out(m_.world_count());
    switch (f.kind()) {
      case WorldFormula::Kind::Falsum:
        break;
      case WorldFormula::Kind::Atom:
        out = m_.atom_extent(f.name());
        break;
      case WorldFormula::Kind::Not:
        out = eval(f.operand()).complement();
        break;
      case WorldFormula::Kind::And:
        out = eval(f.left()) & eval(f.right());
        break;
      case WorldFormula::Kind::Common: {
        Bitset body = eval(f.body());
        Bitset agents = m_.agent_model().denote(f.index());
        std::vector<std::size_t> comp = union_components(m_, agents);
        // A component supports C[psi]body iff the body holds throughout.
        std::unordered_map<std::size_t, bool> component_ok;
        for (std::size_t x = 0; x < m_.world_count(); ++x) {
          auto [it2, inserted] = component_ok.try_emplace(comp[x], true);
          it2->second = it2->second && body.test(x);
        }
        for (std::size_t x = 0; x < m_.world_count(); ++x)
          if (component_ok[comp[x]]) out.set(x);
        break;
      }
    }
    memo_.emplace(f, out);
    return out;
  }

 private:
  const CielModel& m_;
  std::unordered_map<WorldFormula, Bitset> memo_;
};

}  // namespace

Bitset eval(const CielModel& m, const WorldFormula& f) {
  return Evaluator(m).eval(f);
}

bool check(const CielModel& m, std::size_t world, const WorldFormula& f) {
  if (world >= m.world_count()) throw ModelError("unknown world index");
  return eval(m, f).test(world);
}

bool check(const CielModel& m, const std::string& world,
           const WorldFormula& f) {
  return check(m, m.world_index(world), f);
}

namespace {

class GfpEvaluator {
 public:
  explicit GfpEvaluator(const CielModel& m) : m_(m) {}

  Bitset eval(const WorldFormula& f) {
    auto it = memo_.find(f);
    if (it != memo_.end()) return it->second;
    Bitset out(m_.world_count());
    switch (f.kind()) {
      case WorldFormula::Kind::Falsum:
        break;
      case WorldFormula::Kind::Atom:
        out = m_.atom_extent(f.name());
        break;
      case WorldFormula::Kind::Not:
        out = eval(f.operand()).complement();
        break;
      case WorldFormula::Kind::And:
        out = eval(f.left()) & eval(f.right());
        break;
      case WorldFormula::Kind::Common: {
        // Downward iteration of F(U) = body /\ [step](U), starting from the
        // full world set; stabilizes in at most |worlds| rounds.
        Bitset body = eval(f.body());
        Bitset agents = m_.agent_model().denote(f.index());
        Bitset u(m_.world_count(), true);
        for (;;) {
          Bitset next(m_.world_count());
          for (std::size_t x = 0; x < m_.world_count(); ++x) {
            if (!body.test(x)) continue;
            bool successors_in = true;
            agents.for_each([&](std::size_t a) {
              if (!successors_in) return;
              for (std::size_t y : m_.adjacency(a)[x])
                if (!u.test(y)) {
                  successors_in = false;
                  return;
                }
            });
            if (successors_in) next.set(x);
          }
          if (next == u) break;
          u = next;
        }
        out = u;
        break;
      }
    }
    memo_.emplace(f, out);
    return out;
  }

 private:
  const CielModel& m_;
  std::unordered_map<WorldFormula, Bitset> memo_;
};

}  // namespace

Bitset check_gfp(const CielModel& m, const WorldFormula& f) {
  if (f.kind() != WorldFormula::Kind::Common)
    throw ModelError("check_gfp expects a C-formula");
  return GfpEvaluator(m).eval(f);
}

// ---------------------------------------------------------------------------
// Validation

CielModel validate(const CielModel& m, ValidateMode mode) {
  std::size_t n = m.world_count();
  std::vector<Relation> fixed;
  for (std::size_t a = 0; a < m.agent_model().agent_count(); ++a) {
    const Relation& rel = m.relation(a);
    if (mode == ValidateMode::Strict) {
      const std::string& agent = m.agent_model().agent(a).name;
      for (std::size_t x = 0; x < n; ++x)
        if (!rel.count({x, x}))
          throw ModelError("relation of agent '" + agent +
                           "' is not reflexive: missing (" + m.world_name(x) +
                           ", " + m.world_name(x) + ")");
      for (auto [x, y] : rel)
        if (!rel.count({y, x}))
          throw ModelError("relation of agent '" + agent +
                           "' is not symmetric: has (" + m.world_name(x) +
                           ", " + m.world_name(y) + ") but not its converse");
      for (auto [x, y] : rel)
        for (auto [y2, z] : rel)
          if (y == y2 && !rel.count({x, z}))
            throw ModelError("relation of agent '" + agent +
                             "' is not transitive: (" + m.world_name(x) + ", " +
                             m.world_name(y) + ") and (" + m.world_name(y) +
                             ", " + m.world_name(z) + ") but not (" +
                             m.world_name(x) + ", " + m.world_name(z) + ")");
      fixed.push_back(rel);
    } else {
      // Reflexive-symmetric-transitive closure via connected components.
      UnionFind uf(n);
      for (auto [x, y] : rel) uf.unite(x, y);
      std::map<std::size_t, std::vector<std::size_t>> classes;
      for (std::size_t x = 0; x < n; ++x) classes[uf.find(x)].push_back(x);
      Relation closed;
      for (const auto& [root, members] : classes)
        for (std::size_t x : members)
          for (std::size_t y : members) closed.insert({x, y});
      fixed.push_back(std::move(closed));
    }
  }
  return CielModel(m.worlds(), m.agent_model(), m.world_valuation(),
                   std::move(fixed));
}

// ---------------------------------------------------------------------------
// JSON I/O

namespace {

CielModel load_model_impl(const nlohmann::json& j) {
  if (!j.is_object()) throw ModelError("model file: top level must be an object");

  std::vector<std::string> worlds;
  for (const auto& w : j.value("worlds", nlohmann::json::array()))
    worlds.push_back(w.get<std::string>());
  if (worlds.empty()) throw ModelError("model file: no worlds");
  std::map<std::string, std::size_t> world_idx;
  for (std::size_t i = 0; i < worlds.size(); ++i) {
    if (world_idx.count(worlds[i]))
      throw ModelError("model file: duplicate world '" + worlds[i] + "'");
    world_idx[worlds[i]] = i;
  }

  AgentTheory theory;
  for (const auto& t : j.value("theory", nlohmann::json::array()))
    theory.constraints.push_back(parse_agent(t.get<std::string>()));

  std::vector<Agent> agents;
  for (const auto& a : j.value("agents", nlohmann::json::array())) {
    Agent agent;
    agent.name = a.at("name").get<std::string>();
    const nlohmann::json valuation_obj =
        a.value("valuation", nlohmann::json::object());
    for (const auto& [atom, value] : valuation_obj.items())
      agent.valuation[atom] = value.get<bool>();
    agents.push_back(std::move(agent));
  }
  if (agents.empty()) throw ModelError("model file: no agents");
  std::map<std::string, std::size_t> agent_idx;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agent_idx.count(agents[i].name))
      throw ModelError("model file: duplicate agent '" + agents[i].name + "'");
    agent_idx[agents[i].name] = i;
  }

  std::map<std::string, Bitset> valuation;
  const nlohmann::json valuation_obj =
      j.value("world_valuation", nlohmann::json::object());
  for (const auto& [atom, list] : valuation_obj.items()) {
    Bitset extent(worlds.size());
    for (const auto& w : list) {
      auto it = world_idx.find(w.get<std::string>());
      if (it == world_idx.end())
        throw ModelError("model file: valuation of '" + atom +
                         "' mentions unknown world '" + w.get<std::string>() + "'");
      extent.set(it->second);
    }
    valuation[atom] = std::move(extent);
  }

  std::vector<Relation> indist(agents.size());
  const nlohmann::json indist_obj =
      j.value("indist", nlohmann::json::object());
  for (const auto& [agent, pairs] : indist_obj.items()) {
    auto ait = agent_idx.find(agent);
    if (ait == agent_idx.end())
      throw ModelError("model file: indist mentions unknown agent '" + agent + "'");
    for (const auto& pair : pairs) {
      if (!pair.is_array() || pair.size() != 2)
        throw ModelError("model file: indist pairs must be 2-element arrays");
      auto x = world_idx.find(pair[0].get<std::string>());
      auto y = world_idx.find(pair[1].get<std::string>());
      if (x == world_idx.end() || y == world_idx.end())
        throw ModelError("model file: indist pair mentions unknown world");
      indist[ait->second].insert({x->second, y->second});
    }
  }

  return CielModel(std::move(worlds),
                   FilteredAgentModel::from_agents(std::move(agents), std::move(theory)),
                   std::move(valuation), std::move(indist));
}

}  // namespace

CielModel load_model(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    return load_model_impl(j);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
}

std::string save_model(const CielModel& m) {
  nlohmann::json j;
  j["worlds"] = m.worlds();
  nlohmann::json agents = nlohmann::json::array();
  for (const Agent& a : m.agent_model().agents()) {
    nlohmann::json entry;
    entry["name"] = a.name;
    nlohmann::json valuation = nlohmann::json::object();
    for (const auto& [atom, value] : a.valuation) valuation[atom] = value;
    entry["valuation"] = std::move(valuation);
    agents.push_back(std::move(entry));
  }
  j["agents"] = std::move(agents);
  nlohmann::json theory = nlohmann::json::array();
  for (const AgentFormula& c : m.agent_model().theory().constraints)
    theory.push_back(c.to_string());
  j["theory"] = std::move(theory);
  nlohmann::json valuation = nlohmann::json::object();
  for (const auto& [atom, extent] : m.world_valuation()) {
    nlohmann::json list = nlohmann::json::array();
    extent.for_each([&](std::size_t i) { list.push_back(m.world_name(i)); });
    valuation[atom] = std::move(list);
  }
  j["world_valuation"] = std::move(valuation);
  nlohmann::json indist = nlohmann::json::object();
  for (std::size_t a = 0; a < m.agent_model().agent_count(); ++a) {
    nlohmann::json pairs = nlohmann::json::array();
    for (auto [x, y] : m.relation(a))
      pairs.push_back(nlohmann::json::array({m.world_name(x), m.world_name(y)}));
    indist[m.agent_model().agent(a).name] = std::move(pairs);
  }
  j["indist"] = std::move(indist);
  return j.dump(2);
}

std::string to_dot(const CielModel& m) {
  // Undirected union of all agent relations; edges labeled by the agents
  // that contribute them.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::string>> edges;
  for (std::size_t a = 0; a < m.agent_model().agent_count(); ++a)
    for (auto [x, y] : m.relation(a)) {
      if (x == y) continue;
      auto key = std::minmax(x, y);
      auto& labels = edges[{key.first, key.second}];
      const std::string& name = m.agent_model().agent(a).name;
      if (labels.empty() || labels.back() != name) labels.push_back(name);
    }
  std::ostringstream out;
  out << "graph indistinguishability {\n";
  for (std::size_t x = 0; x < m.world_count(); ++x) {
    out << "  \"" << m.world_name(x) << "\"";
    std::string atoms;
    for (const auto& [atom, extent] : m.world_valuation())
      if (extent.test(x)) atoms += atoms.empty() ? atom : ", " + atom;
    out << " [label=\"" << m.world_name(x);
    if (!atoms.empty()) out << "\\n" << atoms;
    out << "\"];\n";
  }
  for (const auto& [pair, labels] : edges) {
    out << "  \"" << m.world_name(pair.first) << "\" -- \""
        << m.world_name(pair.second) << "\" [label=\"";
    for (std::size_t i = 0; i < labels.size(); ++i)
      out << (i ? "," : "") << labels[i];
    out << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// GEL models

GelModel::GelModel(std::vector<std::string> worlds,
                   std::vector<std::string> agent_names,
                   std::map<std::string, Bitset> world_valuation,
                   std::vector<Relation> indist)
    : worlds_(std::move(worlds)),
      agent_names_(std::move(agent_names)),
      world_valuation_(std::move(world_valuation)),
      indist_(std::move(indist)) {
  if (indist_.size() != agent_names_.size())
    throw ModelError("GEL model relation/agent count mismatch");
  adjacency_ = build_adjacency(worlds_.size(), indist_);
}

std::size_t GelModel::world_index(const std::string& name) const {
  for (std::size_t i = 0; i < worlds_.size(); ++i)
    if (worlds_[i] == name) return i;
  throw ModelError("unknown world '" + name + "'");
}

std::size_t GelModel::agent_index(const std::string& name) const {
  for (std::size_t i = 0; i < agent_names_.size(); ++i)
    if (agent_names_[i] == name) return i;
  throw ModelError("unknown agent '" + name + "'");
}

Bitset GelModel::atom_extent(const std::string& atom) const {
  auto it = world_valuation_.find(atom);
  if (it != world_valuation_.end()) return it->second;
  return Bitset(worlds_.size());
}

namespace {

class GelEvaluator {
 public:
  explicit GelEvaluator(const GelModel& m) : m_(m) {}

  Bitset eval(const GelFormula& f) {
    auto it = memo_.find(f);
    if (it != memo_.end()) return it->second;
    Bitset out(m_.world_count());
    switch (f.kind()) {
      case GelFormula::Kind::Falsum:
        break;
      case GelFormula::Kind::Atom:
        out = m_.atom_extent(f.name());
        break;
      case GelFormula::Kind::Not:
        out = eval(f.operand()).complement();
        break;
      case GelFormula::Kind::And:
        out = eval(f.left()) & eval(f.right());
        break;
      case GelFormula::Kind::Common: {
        Bitset body = eval(f.body());
        UnionFind uf(m_.world_count());
        for (const std::string& name : f.group()) {
          std::size_t a = m_.agent_index(name);
          for (std::size_t x = 0; x < m_.world_count(); ++x)
            for (std::size_t y : m_.adjacency(a)[x]) uf.unite(x, y);
        }
        std::unordered_map<std::size_t, bool> component_ok;
        for (std::size_t x = 0; x < m_.world_count(); ++x) {
          auto [it2, inserted] = component_ok.try_emplace(uf.find(x), true);
          it2->second = it2->second && body.test(x);
        }
        for (std::size_t x = 0; x < m_.world_count(); ++x)
          if (component_ok[uf.find(x)]) out.set(x);
        break;
      }
    }
    memo_.emplace(f, out);
    return out;
  }

 private:
  const GelModel& m_;
  std::unordered_map<GelFormula, Bitset> memo_;
};

}  // namespace

Bitset eval_gel(const GelModel& m, const GelFormula& f) {
  return GelEvaluator(m).eval(f);
}

bool check_gel(const GelModel& m, std::size_t world, const GelFormula& f) {
  if (world >= m.world_count()) throw ModelError("unknown world index");
  return eval_gel(m, f).test(world);
}

bool check_gel(const GelModel& m, const std::string& world,
               const GelFormula& f) {
  return check_gel(m, m.world_index(world), f);
}

// ---------------------------------------------------------------------------
// Pseudo-models

namespace {

class PseudoEvaluator {
 public:
  explicit PseudoEvaluator(const PseudoModel& m) : m_(m) {}

  Bitset eval(const WorldFormula& f) {
    auto it = memo_.find(f);
    if (it != memo_.end()) return it->second;
    std::size_t n = m_.worlds.size();
    Bitset out(n);
    switch (f.kind()) {
      case WorldFormula::Kind::Falsum:
        break;
      case WorldFormula::Kind::Atom: {
        auto vit = m_.world_valuation.find(f.name());
        if (vit != m_.world_valuation.end()) out = vit->second;
        break;
      }
      case WorldFormula::Kind::Not:
        out = eval(f.operand()).complement();
        break;
      case WorldFormula::Kind::And:
        out = eval(f.left()) & eval(f.right());
        break;
      case WorldFormula::Kind::Common: {
        Bitset body = eval(f.body());
        Bitset agents = m_.agent_model.denote(f.index());
        auto pit = m_.indist_by_set.find(agents);
        if (pit == m_.indist_by_set.end())
          throw ModelError("pseudo-model has no relation for the denotation of " +
                           f.index().to_string());
        const std::vector<std::size_t>& classes = pit->second;
        std::unordered_map<std::size_t, bool> class_ok;
        for (std::size_t x = 0; x < n; ++x) {
          auto [it2, inserted] = class_ok.try_emplace(classes[x], true);
          it2->second = it2->second && body.test(x);
        }
        for (std::size_t x = 0; x < n; ++x)
          if (class_ok[classes[x]]) out.set(x);
        break;
      }
    }
    memo_.emplace(f, out);
    return out;
  }

 private:
  const PseudoModel& m_;
  std::unordered_map<WorldFormula, Bitset> memo_;
};

}  // namespace

Bitset eval_pseudo(const PseudoModel& m, const WorldFormula& f) {
  return PseudoEvaluator(m).eval(f);
}

bool check_pseudo(const PseudoModel& m, std::size_t world,
                  const WorldFormula& f) {
  return eval_pseudo(m, f).test(world);
}

}  // namespace ciel
