#include "ciel/decide.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "ciel/errors.hpp"
#include "ciel/union_find.hpp"

namespace ciel {

namespace {

// Per-closure constraint tables shared by enumeration.
struct SigmaInfo {
  std::vector<std::size_t> partner;  // index of the normalized negation
  std::optional<std::size_t> falsum;
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> and_children;
  std::vector<TypeSpace::CEntry> c_entries;
  // (AM) propagation edges: membership of `first` forces membership of
  // `second`; both are closure indices of C-formulas over the same body.
  std::vector<std::pair<std::size_t, std::size_t>> am_edges;
};

SigmaInfo build_sigma_info(const ClosureSet& sigma,
                           const FilteredAgentModel& m) {
  SigmaInfo info;
  std::size_t n = sigma.size();
  info.partner.resize(n);
  info.and_children.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const WorldFormula& f = sigma.world_formulas[i];
    auto p = sigma.index_of(nneg(f));
    if (!p) throw CielError("closure is not nneg-closed");
    info.partner[i] = *p;
    switch (f.kind()) {
      case WorldFormula::Kind::Falsum:
        info.falsum = i;
        break;
      case WorldFormula::Kind::And: {
        auto l = sigma.index_of(f.left());
        auto r = sigma.index_of(f.right());
        if (!l || !r) throw CielError("closure is not subformula-closed");
        info.and_children[i] = std::make_pair(*l, *r);
        break;
      }
      case WorldFormula::Kind::Common: {
        auto b = sigma.index_of(f.body());
        if (!b) throw CielError("closure is not subformula-closed");
        info.c_entries.push_back(
            TypeSpace::CEntry{i, *b, m.denote(f.index())});
        break;
      }
      default:
        break;
    }
  }
  // Antimonotonicity between C-formulas over the same body.
  std::map<std::size_t, std::vector<std::size_t>> by_body;
  for (std::size_t c = 0; c < info.c_entries.size(); ++c)
    by_body[info.c_entries[c].body_index].push_back(c);
  for (const auto& [body, entries] : by_body)
    for (std::size_t c1 : entries)
      for (std::size_t c2 : entries) {
        if (c1 == c2) continue;
        if (info.c_entries[c2].denotation.is_subset_of(
                info.c_entries[c1].denotation))
          info.am_edges.emplace_back(info.c_entries[c1].sigma_index,
                                     info.c_entries[c2].sigma_index);
      }
  return info;
}

// Depth-first enumeration of the coherent types with unit propagation.
class TypeEnumerator {
 public:
  TypeEnumerator(const SigmaInfo& info, std::size_t n, std::size_t cap)
      : info_(info), cap_(cap), n_(n) {
    value_.assign(n_, kUnknown);
    watchers_.assign(n_, {});
    for (std::size_t i = 0; i < n_; ++i) {
      Constraint c{Constraint::Pair, i, info_.partner[i], 0};
      add_watch(i, c);
      add_watch(info_.partner[i], c);
    }
    for (std::size_t i = 0; i < n_; ++i)
      if (info_.and_children[i]) {
        auto [l, r] = *info_.and_children[i];
        Constraint c{Constraint::Conj, i, l, r};
        add_watch(i, c);
        add_watch(l, c);
        add_watch(r, c);
      }
    for (const auto& e : info_.c_entries) {
      Constraint c{e.denotation.none() ? Constraint::CEmpty : Constraint::CTrue,
                   e.sigma_index, e.body_index, 0};
      add_watch(e.sigma_index, c);
      add_watch(e.body_index, c);
    }
    for (auto [from, to] : info_.am_edges) {
      Constraint c{Constraint::Am, from, to, 0};
      add_watch(from, c);
      add_watch(to, c);
    }
  }

  std::vector<Bitset> run() {
    bool consistent = true;
    if (info_.falsum) consistent = assign(*info_.falsum, false) && propagate();
    if (consistent) search();
    return std::move(types_);
  }

 private:
  static constexpr signed char kUnknown = -1;

  struct Constraint {
    enum Kind { Pair, Conj, CTrue, CEmpty, Am } kind;
    std::size_t a, b, c;
  };

  void add_watch(std::size_t var, Constraint c) { watchers_[var].push_back(c); }

  bool assign(std::size_t var, bool val) {
    if (value_[var] != kUnknown)
      return value_[var] == static_cast<signed char>(val);
    value_[var] = val ? 1 : 0;
    trail_.push_back(var);
    queue_.push_back(var);
    return true;
  }

  bool propagate() {
    while (!queue_.empty()) {
      std::size_t var = queue_.back();
      queue_.pop_back();
      for (const Constraint& c : watchers_[var])
        if (!apply(c)) {
          queue_.clear();
          return false;
        }
    }
    return true;
  }

  bool apply(const Constraint& c) {
    auto v = [&](std::size_t i) { return value_[i]; };
    switch (c.kind) {
      case Constraint::Pair:  // exactly one of a, b
        if (v(c.a) != kUnknown) return assign(c.b, v(c.a) == 0);
        if (v(c.b) != kUnknown) return assign(c.a, v(c.b) == 0);
        return true;
      case Constraint::Conj:  // a = b && c
        if (v(c.a) == 1) return assign(c.b, true) && assign(c.c, true);
        if (v(c.b) == 0 || v(c.c) == 0) return assign(c.a, false);
        if (v(c.b) == 1 && v(c.c) == 1) return assign(c.a, true);
        if (v(c.a) == 0) {
          if (v(c.b) == 1) return assign(c.c, false);
          if (v(c.c) == 1) return assign(c.b, false);
        }
        return true;
      case Constraint::CTrue:  // C[psi]phi in the type forces phi in it
        if (v(c.a) == 1) return assign(c.b, true);
        if (v(c.b) == 0) return assign(c.a, false);
        return true;
      case Constraint::CEmpty:  // empty denotation: C[psi]phi iff phi
        if (v(c.a) != kUnknown) return assign(c.b, v(c.a) == 1);
        if (v(c.b) != kUnknown) return assign(c.a, v(c.b) == 1);
        return true;
      case Constraint::Am:  // membership of a forces membership of b
        if (v(c.a) == 1) return assign(c.b, true);
        if (v(c.b) == 0) return assign(c.a, false);
        return true;
    }
    return true;
  }

  void search() {
    std::size_t var = n_;
    for (std::size_t i = 0; i < n_; ++i)
      if (value_[i] == kUnknown) {
        var = i;
        break;
      }
    if (var == n_) {
      if (types_.size() >= cap_)
        throw ResourceLimitError("type cap exceeded (" + std::to_string(cap_) +
                                 " coherent types)");
      Bitset t(n_);
      for (std::size_t i = 0; i < n_; ++i)
        if (value_[i] == 1) t.set(i);
      types_.push_back(std::move(t));
      return;
    }
    for (bool val : {true, false}) {
      std::size_t mark = trail_.size();
      if (assign(var, val) && propagate()) search();
      while (trail_.size() > mark) {
        value_[trail_.back()] = kUnknown;
        trail_.pop_back();
      }
      queue_.clear();
    }
  }

  const SigmaInfo& info_;
  std::size_t cap_;
  std::size_t n_;
  std::vector<signed char> value_;
  std::vector<std::vector<Constraint>> watchers_;
  std::vector<std::size_t> trail_;
  std::vector<std::size_t> queue_;
  std::vector<Bitset> types_;
};

std::vector<std::vector<std::uint32_t>> partition_by_traces(
    const std::vector<Bitset>& types,
    const std::vector<TypeSpace::CEntry>& entries, std::size_t agent_count,
    std::size_t sigma_size) {
  std::vector<std::vector<std::uint32_t>> agent_class(agent_count);
  for (std::size_t a = 0; a < agent_count; ++a) {
    Bitset mask(sigma_size);
    for (const auto& e : entries)
      if (e.denotation.test(a)) mask.set(e.sigma_index);
    std::unordered_map<Bitset, std::uint32_t> ids;
    auto& classes = agent_class[a];
    classes.resize(types.size());
    for (std::size_t t = 0; t < types.size(); ++t) {
      Bitset trace = types[t] & mask;
      auto [it, inserted] = ids.emplace(
          std::move(trace), static_cast<std::uint32_t>(ids.size()));
      classes[t] = it->second;
    }
  }
  return agent_class;
}

// One elimination pass over the survivors, appending the survivor positions
// that must die to `kill`. Sequential orders stop at the first kill.
void elimination_pass(const TypeSpace& ts,
                      const std::vector<std::size_t>& survivors,
                      EliminationOrder order, std::vector<std::size_t>& kill) {
  std::size_t ns = survivors.size();
  if (ns == 0) return;

  // Group C-entries by denotation; each group shares one reachability
  // partition over the survivors, built with a union-find.
  std::map<Bitset, std::vector<std::size_t>> groups;
  for (std::size_t c = 0; c < ts.c_entries.size(); ++c)
    groups[ts.c_entries[c].denotation].push_back(c);

  // component id per (group, survivor) and, per group and C-entry, whether a
  // component contains a refuter of the body.
  std::vector<char> must_die(ns, 0);
  for (const auto& [denotation, entries] : groups) {
    UnionFind uf(ns);
    denotation.for_each([&](std::size_t a) {
      std::unordered_map<std::uint32_t, std::size_t> first_of_class;
      for (std::size_t s = 0; s < ns; ++s) {
        std::uint32_t cls = ts.agent_class[a][survivors[s]];
        auto [it, inserted] = first_of_class.emplace(cls, s);
        if (!inserted) uf.unite(it->second, s);
      }
    });
    for (std::size_t c : entries) {
      const auto& e = ts.c_entries[c];
      std::unordered_map<std::size_t, char> component_has_refuter;
      for (std::size_t s = 0; s < ns; ++s)
        if (!ts.types[survivors[s]].test(e.body_index))
          component_has_refuter[uf.find(s)] = 1;
      for (std::size_t s = 0; s < ns; ++s) {
        if (ts.types[survivors[s]].test(e.sigma_index)) continue;  // no obligation
        if (!component_has_refuter.count(uf.find(s))) must_die[s] = 1;
      }
    }
  }

  if (order == EliminationOrder::Batch) {
    for (std::size_t s = 0; s < ns; ++s)
      if (must_die[s]) kill.push_back(s);
  } else if (order == EliminationOrder::ForwardSequential) {
    for (std::size_t s = 0; s < ns; ++s)
      if (must_die[s]) {
        kill.push_back(s);
        return;
      }
  } else {
    for (std::size_t s = ns; s-- > 0;)
      if (must_die[s]) {
        kill.push_back(s);
        return;
      }
  }
}

std::vector<std::size_t> run_elimination(const TypeSpace& ts,
                                         EliminationOrder order,
                                         std::size_t* rounds_out) {
  std::vector<std::size_t> survivors(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) survivors[i] = i;
  std::size_t rounds = 0;
  for (;;) {
    std::vector<std::size_t> kill;
    elimination_pass(ts, survivors, order, kill);
    if (kill.empty()) break;
    ++rounds;
    std::vector<std::size_t> next;
    next.reserve(survivors.size() - kill.size());
    std::size_t k = 0;
    for (std::size_t pos = 0; pos < survivors.size(); ++pos) {
      if (k < kill.size() && kill[k] == pos) {
        ++k;
        continue;
      }
      next.push_back(survivors[pos]);
    }
    survivors = std::move(next);
  }
  if (rounds_out) *rounds_out = rounds;
  return survivors;
}

std::string type_world_name(std::size_t i) { return "t" + std::to_string(i); }

CielModel witness_from_types(const TypeSpace& surv, const ClosureSet& sigma,
                             const FilteredAgentModel& m) {
  std::vector<std::string> worlds;
  for (std::size_t t = 0; t < surv.size(); ++t)
    worlds.push_back(type_world_name(t));

  std::map<std::string, Bitset> valuation;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const WorldFormula& f = sigma.world_formulas[i];
    if (f.kind() != WorldFormula::Kind::Atom) continue;
    Bitset extent(surv.size());
    for (std::size_t t = 0; t < surv.size(); ++t)
      if (surv.types[t].test(i)) extent.set(t);
    valuation[f.name()] = std::move(extent);
  }

  std::vector<Relation> indist(m.agent_count());
  for (std::size_t a = 0; a < m.agent_count(); ++a) {
    std::map<std::uint32_t, std::vector<std::size_t>> classes;
    for (std::size_t t = 0; t < surv.size(); ++t)
      classes[surv.agent_class[a][t]].push_back(t);
    for (const auto& [cls, members] : classes)
      for (std::size_t x : members)
        for (std::size_t y : members) indist[a].insert({x, y});
  }

  return CielModel(std::move(worlds), m, std::move(valuation),
                   std::move(indist));
}

}  // namespace

TypeSpace enumerate_types(const ClosureSet& sigma, const FilteredAgentModel& m,
                          std::size_t cap) {
  SigmaInfo info = build_sigma_info(sigma, m);
  TypeEnumerator enumerator(info, sigma.size(), cap);
  TypeSpace ts;
  ts.types = enumerator.run();
  ts.c_entries = std::move(info.c_entries);
  ts.agent_count = m.agent_count();
  ts.agent_class =
      partition_by_traces(ts.types, ts.c_entries, ts.agent_count, sigma.size());
  return ts;
}

TypeSpace eliminate(const TypeSpace& ts, const ClosureSet& sigma,
                    EliminationOrder order) {
  std::vector<std::size_t> survivors = run_elimination(ts, order, nullptr);
  TypeSpace out;
  out.c_entries = ts.c_entries;
  out.agent_count = ts.agent_count;
  for (std::size_t s : survivors) out.types.push_back(ts.types[s]);
  out.agent_class = partition_by_traces(out.types, out.c_entries,
                                        out.agent_count, sigma.size());
  return out;
}

PseudoModel canonical_pseudo_model(const TypeSpace& ts, const ClosureSet& sigma,
                                   const FilteredAgentModel& m) {
  PseudoModel pm;
  for (std::size_t t = 0; t < ts.size(); ++t)
    pm.worlds.push_back(type_world_name(t));
  pm.agent_model = m;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const WorldFormula& f = sigma.world_formulas[i];
    if (f.kind() != WorldFormula::Kind::Atom) continue;
    Bitset extent(ts.size());
    for (std::size_t t = 0; t < ts.size(); ++t)
      if (ts.types[t].test(i)) extent.set(t);
    pm.world_valuation[f.name()] = std::move(extent);
  }
  for (const auto& e : ts.c_entries) {
    if (pm.indist_by_set.count(e.denotation)) continue;
    UnionFind uf(ts.size());
    e.denotation.for_each([&](std::size_t a) {
      std::unordered_map<std::uint32_t, std::size_t> first_of_class;
      for (std::size_t t = 0; t < ts.size(); ++t) {
        auto [it, inserted] = first_of_class.emplace(ts.agent_class[a][t], t);
        if (!inserted) uf.unite(it->second, t);
      }
    });
    std::vector<std::size_t> classes(ts.size());
    for (std::size_t t = 0; t < ts.size(); ++t) classes[t] = uf.find(t);
    pm.indist_by_set.emplace(e.denotation, std::move(classes));
  }
  return pm;
}

SatResult sat(const WorldFormula& rho, const AgentTheory& theory,
              const DecideCaps& caps) {
  FilteredAgentModel fam = FilteredAgentModel::filtered(
      agent_subformulae(rho), theory, caps.valuations);
  ClosureSet sigma = closure(rho, fam.agent_closure(), caps.closure);
  if (sigma.size() > caps.sigma)
    throw ResourceLimitError("closure has " + std::to_string(sigma.size()) +
                             " formulas, enumeration gate is " +
                             std::to_string(caps.sigma));

  TypeSpace all = enumerate_types(sigma, fam, caps.types);

  SatStats stats;
  stats.sigma_size = sigma.size();
  stats.type_count = all.size();
  std::vector<std::size_t> survivors =
      run_elimination(all, EliminationOrder::Batch, &stats.rounds);
  stats.surviving = survivors.size();

  TypeSpace surv;
  surv.c_entries = all.c_entries;
  surv.agent_count = all.agent_count;
  for (std::size_t s : survivors) surv.types.push_back(all.types[s]);
  surv.agent_class = partition_by_traces(surv.types, surv.c_entries,
                                         surv.agent_count, sigma.size());

  std::size_t root = 0;  // the root formula is the first closure member
  std::optional<std::size_t> start;
  for (std::size_t t = 0; t < surv.size(); ++t)
    if (surv.types[t].test(root)) {
      start = t;
      break;
    }

  SatResult result;
  result.stats = stats;
  if (!start) return result;

  CielModel witness = witness_from_types(surv, sigma, fam);

  // Truth lemma check on the witness: membership must coincide with truth for
  // every closure formula at every world.
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    Bitset extent = eval(witness, sigma.world_formulas[i]);
    for (std::size_t t = 0; t < surv.size(); ++t)
      if (extent.test(t) != surv.types[t].test(i))
        throw CielError("internal error: truth lemma fails on the witness at " +
                        witness.world_name(t) + " for " +
                        sigma.world_formulas[i].to_string());
  }

  result.satisfiable = true;
  result.start_world = witness.world_name(*start);
  result.witness = std::move(witness);
  return result;
}

bool valid(const WorldFormula& f, const AgentTheory& theory,
           const DecideCaps& caps) {
  return !sat(nneg(f), theory, caps).satisfiable;
}

// ---------------------------------------------------------------------------
// GEL oracle: independent filtration-based decision procedure. Truth values
// of atoms and C-formulas are enumerated as free bits, composite formulas are
// derived recursively, and unfulfilled diamonds are eliminated to a fixpoint.

namespace {

struct GelClosure {
  std::vector<GelFormula> formulas;
  std::unordered_map<GelFormula, std::size_t> index;
  std::vector<std::size_t> free_bits;  // indices of atoms and C-formulas
  std::vector<std::string> agents;     // all names mentioned in groups
};

GelClosure make_gel_closure(const GelFormula& f) {
  GelClosure c;
  for (const GelFormula& g : gel_subformulae(f)) {
    c.index.emplace(g, c.formulas.size());
    c.formulas.push_back(g);
  }
  std::vector<std::string> agents;
  for (std::size_t i = 0; i < c.formulas.size(); ++i) {
    const GelFormula& g = c.formulas[i];
    if (g.kind() == GelFormula::Kind::Atom ||
        g.kind() == GelFormula::Kind::Common)
      c.free_bits.push_back(i);
    if (g.kind() == GelFormula::Kind::Common)
      for (const std::string& name : g.group()) agents.push_back(name);
  }
  std::sort(agents.begin(), agents.end());
  agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
  c.agents = std::move(agents);
  return c;
}

char derive_truth(const GelClosure& c, const std::vector<signed char>& free_value,
                  std::vector<signed char>& truth, std::size_t i) {
  if (truth[i] != -1) return truth[i];
  const GelFormula& g = c.formulas[i];
  char v = 0;
  switch (g.kind()) {
    case GelFormula::Kind::Falsum:
      v = 0;
      break;
    case GelFormula::Kind::Atom:
    case GelFormula::Kind::Common:
      v = free_value[i];
      break;
    case GelFormula::Kind::Not:
      v = !derive_truth(c, free_value, truth, c.index.at(g.operand()));
      break;
    case GelFormula::Kind::And:
      v = derive_truth(c, free_value, truth, c.index.at(g.left())) &&
          derive_truth(c, free_value, truth, c.index.at(g.right()));
      break;
  }
  truth[i] = v;
  return v;
}

}  // namespace

bool gel_sat(const GelFormula& f, const DecideCaps& caps) {
  GelClosure c = make_gel_closure(f);
  if (c.free_bits.size() >= 63 ||
      (std::size_t{1} << c.free_bits.size()) > caps.types)
    throw ResourceLimitError("GEL type cap exceeded: 2^" +
                             std::to_string(c.free_bits.size()) +
                             " candidates");

  std::size_t nf = c.formulas.size();
  std::vector<std::vector<signed char>> types;
  std::size_t total = std::size_t{1} << c.free_bits.size();
  for (std::size_t mask = 0; mask < total; ++mask) {
    std::vector<signed char> free_value(nf, 0);
    for (std::size_t b = 0; b < c.free_bits.size(); ++b)
      free_value[c.free_bits[b]] = static_cast<signed char>((mask >> b) & 1u);
    std::vector<signed char> truth(nf, -1);
    for (std::size_t i = 0; i < nf; ++i) derive_truth(c, free_value, truth, i);
    // Reflexivity: a true C-formula needs a true body.
    bool coherent = true;
    for (std::size_t i = 0; i < nf && coherent; ++i)
      if (c.formulas[i].kind() == GelFormula::Kind::Common && truth[i] &&
          !truth[c.index.at(c.formulas[i].body())])
        coherent = false;
    if (coherent) types.push_back(std::move(truth));
  }

  // Boxed trace per agent: the C-formulas whose group contains the agent.
  std::vector<std::vector<std::size_t>> boxed_of_agent(c.agents.size());
  std::unordered_map<std::string, std::size_t> agent_id;
  for (std::size_t a = 0; a < c.agents.size(); ++a) agent_id[c.agents[a]] = a;
  for (std::size_t i = 0; i < nf; ++i)
    if (c.formulas[i].kind() == GelFormula::Kind::Common)
      for (const std::string& name : c.formulas[i].group())
        boxed_of_agent[agent_id[name]].push_back(i);

  std::vector<std::size_t> alive(types.size());
  for (std::size_t i = 0; i < types.size(); ++i) alive[i] = i;

  for (;;) {
    std::size_t ns = alive.size();
    // Per agent: group the survivors by boxed trace.
    std::vector<std::vector<std::size_t>> class_of(c.agents.size());
    for (std::size_t a = 0; a < c.agents.size(); ++a) {
      std::map<std::vector<signed char>, std::size_t> ids;
      class_of[a].resize(ns);
      for (std::size_t s = 0; s < ns; ++s) {
        std::vector<signed char> key;
        for (std::size_t i : boxed_of_agent[a])
          key.push_back(types[alive[s]][i]);
        auto [it, inserted] = ids.emplace(std::move(key), ids.size());
        class_of[a][s] = it->second;
      }
    }
    // Distinct groups -> reachability partitions.
    std::map<std::vector<std::string>, std::vector<std::size_t>> group_comp;
    for (std::size_t i = 0; i < nf; ++i) {
      const GelFormula& g = c.formulas[i];
      if (g.kind() != GelFormula::Kind::Common) continue;
      if (group_comp.count(g.group())) continue;
      UnionFind uf(ns);
      for (const std::string& name : g.group()) {
        std::size_t a = agent_id[name];
        std::unordered_map<std::size_t, std::size_t> first_of_class;
        for (std::size_t s = 0; s < ns; ++s) {
          auto [it, inserted] = first_of_class.emplace(class_of[a][s], s);
          if (!inserted) uf.unite(it->second, s);
        }
      }
      std::vector<std::size_t> comp(ns);
      for (std::size_t s = 0; s < ns; ++s) comp[s] = uf.find(s);
      group_comp.emplace(g.group(), std::move(comp));
    }

    std::vector<std::size_t> keep;
    for (std::size_t s = 0; s < ns; ++s) {
      bool ok = true;
      for (std::size_t i = 0; i < nf && ok; ++i) {
        const GelFormula& g = c.formulas[i];
        if (g.kind() != GelFormula::Kind::Common || types[alive[s]][i]) continue;
        std::size_t body = c.index.at(g.body());
        const std::vector<std::size_t>& comp = group_comp[g.group()];
        bool fulfilled = false;
        for (std::size_t s2 = 0; s2 < ns && !fulfilled; ++s2)
          if (comp[s2] == comp[s] && !types[alive[s2]][body]) fulfilled = true;
        ok = fulfilled;
      }
      if (ok) keep.push_back(alive[s]);
    }
    if (keep.size() == alive.size()) break;
    alive = std::move(keep);
  }

  std::size_t root = c.index.at(f);
  for (std::size_t s : alive)
    if (types[s][root]) return true;
  return false;
}

}  // namespace ciel
