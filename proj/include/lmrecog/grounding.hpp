#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lmrecog/model.hpp"
#include "lmrecog/pddl.hpp"

namespace lmrecog {

struct GroundOptions {
  // Drop bindings whose static preconditions fail in the initial state and
  // actions that are unreachable under delete relaxation. Neither can occur
  // in a valid plan.
  bool prune_unreachable = true;
};

namespace detail {

struct GroundAtomAction {
  std::string name;
  std::vector<std::string> args;
  std::vector<pddl::Atom> pre, add, del;
};

class Binder {
 public:
  Binder(const pddl::DomainAst& domain, const pddl::ProblemAst& problem) : domain_(domain) {
    for (const auto& c : domain.constants) object_types_[c.name] = c.type;
    for (const auto& o : problem.objects) object_types_[o.name] = o.type;
  }

  const std::map<std::string, std::string>& object_types() const { return object_types_; }

  // Sorted object names whose type is a subtype of `type`.
  const std::vector<std::string>& objects_of(const std::string& type) {
    auto it = by_type_.find(type);
    if (it != by_type_.end()) return it->second;
    std::vector<std::string> out;
    for (const auto& [name, t] : object_types_)
      if (domain_.is_subtype(t, type)) out.push_back(name);
    return by_type_.emplace(type, std::move(out)).first->second;
  }

  bool has_object_of(const std::string& name, const std::string& type) const {
    auto it = object_types_.find(name);
    return it != object_types_.end() && domain_.is_subtype(it->second, type);
  }

  bool atom_type_consistent(const pddl::Atom& a) const {
    const auto* decl = domain_.find_predicate(a.predicate);
    if (!decl || decl->params.size() != a.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i)
      if (!has_object_of(a.terms[i], decl->params[i].type)) return false;
    return true;
  }

 private:
  const pddl::DomainAst& domain_;
  std::map<std::string, std::string> object_types_;
  std::map<std::string, std::vector<std::string>> by_type_;
};

inline pddl::Atom substitute(const pddl::Atom& a, const std::map<std::string, std::string>& binding) {
  pddl::Atom out{a.predicate, {}};
  out.terms.reserve(a.terms.size());
  for (const auto& t : a.terms) {
    if (t[0] == '?') {
      out.terms.push_back(binding.at(t));
    } else {
      out.terms.push_back(t);
    }
  }
  return out;
}

inline Fact to_fact(const pddl::Atom& a) { return Fact{a.predicate, a.terms}; }

inline const std::string& resolve(const std::string& term, const std::map<std::string, std::string>& binding) {
  if (term[0] == '?') return binding.at(term);
  return term;
}

inline std::optional<GroundAtomAction> bind_schema(const pddl::ActionSchema& schema,
                                                   std::span<const std::string> args) {
  std::map<std::string, std::string> binding;
  for (std::size_t i = 0; i < schema.params.size(); ++i) binding[schema.params[i].name] = args[i];
  for (const auto& eq : schema.equalities) {
    bool same = resolve(eq.lhs, binding) == resolve(eq.rhs, binding);
    if (same == eq.negated) return std::nullopt;
  }
  GroundAtomAction g{schema.name, {args.begin(), args.end()}, {}, {}, {}};
  for (const auto& a : schema.pre) g.pre.push_back(substitute(a, binding));
  for (const auto& a : schema.add) g.add.push_back(substitute(a, binding));
  for (const auto& a : schema.del) g.del.push_back(substitute(a, binding));
  // A fact both added and deleted ends up true.
  std::erase_if(g.del, [&](const pddl::Atom& d) { return std::find(g.add.begin(), g.add.end(), d) != g.add.end(); });
  return g;
}

class SchemaEnumerator {
 public:
  SchemaEnumerator(const pddl::ActionSchema& schema, Binder& binder, const std::set<pddl::Atom>* static_init,
                   const std::set<std::string>* static_preds)
      : schema_(schema), binder_(binder), static_init_(static_init) {
    const auto n = schema.params.size();
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[schema.params[i].name] = i;
    auto last_var = [&](const std::vector<std::string>& terms) {
      std::size_t last = 0;
      for (const auto& t : terms)
        if (t[0] == '?') last = std::max(last, index.at(t) + 1);
      return last;  // 0 means ground
    };
    checks_at_.resize(n + 1);
    for (const auto& eq : schema.equalities) checks_at_[last_var({eq.lhs, eq.rhs})].equalities.push_back(&eq);
    if (static_init_)
      for (const auto& p : schema.pre)
        if (static_preds->contains(p.predicate)) checks_at_[last_var(p.terms)].statics.push_back(&p);
  }

  std::vector<GroundAtomAction> run() {
    if (!passes(0)) return {};
    args_.clear();
    recurse(0);
    return std::move(out_);
  }

 private:
  struct Checks {
    std::vector<const pddl::EqualityConstraint*> equalities;
    std::vector<const pddl::Atom*> statics;
  };

  bool passes(std::size_t level) const {
    for (const auto* eq : checks_at_[level].equalities) {
      bool same = resolve(eq->lhs, binding_) == resolve(eq->rhs, binding_);
      if (same == eq->negated) return false;
    }
    for (const auto* atom : checks_at_[level].statics)
      if (!static_init_->contains(substitute(*atom, binding_))) return false;
    return true;
  }

  void recurse(std::size_t k) {
    if (k == schema_.params.size()) {
      if (auto g = bind_schema(schema_, args_)) out_.push_back(std::move(*g));
      return;
    }
    const auto& param = schema_.params[k];
    for (const auto& obj : binder_.objects_of(param.type)) {
      binding_[param.name] = obj;
      args_.push_back(obj);
      if (passes(k + 1)) recurse(k + 1);
      args_.pop_back();
    }
    binding_.erase(param.name);
  }

  const pddl::ActionSchema& schema_;
  Binder& binder_;
  const std::set<pddl::Atom>* static_init_;
  std::vector<Checks> checks_at_;
  std::map<std::string, std::string> binding_;
  std::vector<std::string> args_;
  std::vector<GroundAtomAction> out_;
};

// Delete-relaxed fixpoint from `init`; returns the indices of actions whose
// preconditions become reachable.
inline std::vector<std::size_t> relaxed_reachable_actions(const std::vector<GroundAtomAction>& actions,
                                                          const std::set<pddl::Atom>& init) {
  std::map<pddl::Atom, std::size_t> ids;
  auto id_of = [&](const pddl::Atom& a) { return ids.try_emplace(a, ids.size()).first->second; };
  std::vector<std::vector<std::size_t>> consumers;
  std::vector<std::size_t> missing(actions.size());
  std::vector<std::vector<std::size_t>> adds(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    std::set<std::size_t> pre;
    for (const auto& p : actions[i].pre) pre.insert(id_of(p));
    if (consumers.size() < ids.size()) consumers.resize(ids.size());
    for (auto p : pre) consumers[p].push_back(i);
    missing[i] = pre.size();
    for (const auto& a : actions[i].add) adds[i].push_back(id_of(a));
  }
  for (const auto& a : init) id_of(a);
  consumers.resize(ids.size());
  std::vector<bool> reached(ids.size(), false);
  std::vector<std::size_t> queue;
  std::vector<std::size_t> fired;
  auto reach = [&](std::size_t f) {
    if (!reached[f]) {
      reached[f] = true;
      queue.push_back(f);
    }
  };
  for (const auto& a : init) reach(ids.at(a));
  for (std::size_t i = 0; i < actions.size(); ++i)
    if (missing[i] == 0) {
      fired.push_back(i);
      for (auto f : adds[i]) reach(f);
    }
  while (!queue.empty()) {
    auto f = queue.back();
    queue.pop_back();
    for (auto i : consumers[f])
      if (--missing[i] == 0) {
        fired.push_back(i);
        for (auto g : adds[i]) reach(g);
      }
  }
  std::sort(fired.begin(), fired.end());
  return fired;
}

}  // namespace detail

// Instantiates every type-consistent binding of every schema into a ground
// action over a canonically ordered fact universe.
inline PlanningInstance ground(const pddl::DomainAst& domain, const pddl::ProblemAst& problem,
                               const GroundOptions& options = {}) {
  detail::Binder binder(domain, problem);

  std::set<std::string> static_preds;
  for (const auto& p : domain.predicates) static_preds.insert(p.name);
  for (const auto& a : domain.actions) {
    for (const auto& e : a.add) static_preds.erase(e.predicate);
    for (const auto& e : a.del) static_preds.erase(e.predicate);
  }
  std::set<pddl::Atom> init(problem.init.begin(), problem.init.end());
  std::set<pddl::Atom> static_init;
  for (const auto& a : init)
    if (static_preds.contains(a.predicate)) static_init.insert(a);

  std::vector<detail::GroundAtomAction> candidates;
  for (const auto& schema : domain.actions) {
    detail::SchemaEnumerator en(schema, binder, options.prune_unreachable ? &static_init : nullptr, &static_preds);
    auto batch = en.run();
    std::move(batch.begin(), batch.end(), std::back_inserter(candidates));
  }

  std::vector<detail::GroundAtomAction> kept;
  if (options.prune_unreachable) {
    for (auto i : detail::relaxed_reachable_actions(candidates, init)) kept.push_back(std::move(candidates[i]));
  } else {
    kept = std::move(candidates);
  }

  for (const auto& g : problem.goal)
    if (!binder.atom_type_consistent(g)) {
      pddl::Atom copy = g;
      throw GroundingError("goal atom " + detail::to_fact(copy).str() + " is outside the fact universe");
    }

  std::set<Fact> universe;
  for (const auto& a : init) universe.insert(detail::to_fact(a));
  for (const auto& a : problem.goal) universe.insert(detail::to_fact(a));
  for (const auto& act : kept)
    for (const auto* atoms : {&act.pre, &act.add, &act.del})
      for (const auto& a : *atoms) universe.insert(detail::to_fact(a));

  std::vector<Fact> facts(universe.begin(), universe.end());
  std::map<Fact, FactId> ids;
  for (std::size_t i = 0; i < facts.size(); ++i) ids.emplace(facts[i], static_cast<FactId>(i));
  auto map_atoms = [&](const std::vector<pddl::Atom>& atoms) {
    std::vector<FactId> out;
    for (const auto& a : atoms) out.push_back(ids.at(detail::to_fact(a)));
    return out;
  };

  std::vector<Action> actions;
  actions.reserve(kept.size());
  for (const auto& g : kept) actions.push_back({g.name, g.args, map_atoms(g.pre), map_atoms(g.add), map_atoms(g.del), 1});

  auto task = std::make_shared<const Task>(std::move(facts), std::move(actions));
  PlanningInstance inst{task, State{task->empty_set()}, task->empty_set()};
  for (FactId f : map_atoms({init.begin(), init.end()})) inst.init.facts.set(f);
  for (FactId f : map_atoms(problem.goal)) inst.goal.set(f);
  return inst;
}

// Grounds a single named schema binding against an existing task, e.g. an
// observed action that grounding pruned as unreachable. Facts outside the
// task's universe are dropped. Returns nullopt when the name, arity, types or
// equality constraints do not admit the binding.
inline std::optional<Action> instantiate(const pddl::DomainAst& domain, const pddl::ProblemAst& problem,
                                         const Task& task, std::string_view name,
                                         std::span<const std::string> args) {
  const auto* schema = domain.find_action(name);
  if (!schema || schema->params.size() != args.size()) return std::nullopt;
  detail::Binder binder(domain, problem);
  for (std::size_t i = 0; i < args.size(); ++i)
    if (!binder.has_object_of(args[i], schema->params[i].type)) return std::nullopt;
  auto g = detail::bind_schema(*schema, args);
  if (!g) return std::nullopt;
  auto map_atoms = [&](const std::vector<pddl::Atom>& atoms) {
    std::vector<FactId> out;
    for (const auto& a : atoms)
      if (auto id = task.find_fact(detail::to_fact(a))) out.push_back(*id);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  return Action{g->name, g->args, map_atoms(g->pre), map_atoms(g->add), map_atoms(g->del), 1};
}

}  // namespace lmrecog
