#pragma once

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <iterator>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lmrecog/bitset.hpp"
#include "lmrecog/errors.hpp"

namespace lmrecog {

using FactId = std::uint32_t;
using ActionId = std::uint32_t;

// A ground atom. Ordered by predicate, then arguments.
struct Fact {
  std::string predicate;
  std::vector<std::string> args;

  auto operator<=>(const Fact&) const = default;
  bool operator==(const Fact&) const = default;

  // `p(a,b)`, or just `p` for 0-ary atoms.
  std::string str() const {
    std::string out = predicate;
    if (!args.empty()) {
      out += '(';
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ',';
        out += args[i];
      }
      out += ')';
    }
    return out;
  }
};

// Sets over the fact universe.
using FactSet = DynamicBitset;

struct Action {
  std::string name;
  std::vector<std::string> args;
  std::vector<FactId> pre;  // sorted, unique
  std::vector<FactId> add;
  std::vector<FactId> del;
  int cost = 1;

  // `(name a b)`
  std::string signature() const {
    std::string out = "(" + name;
    for (const auto& a : args) out += " " + a;
    return out + ")";
  }
};

struct State {
  FactSet facts;
  bool operator==(const State&) const = default;
};

// The domain part of a planning instance: fact universe and ground actions,
// plus the adjacency indices every reachability routine needs. Immutable
// once built.
class Task {
 public:
  // Facts must be sorted and unique; ids are positions in that order.
  Task(std::vector<Fact> facts, std::vector<Action> actions)
      : facts_(std::move(facts)), actions_(std::move(actions)) {
    if (!std::is_sorted(facts_.begin(), facts_.end()) ||
        std::adjacent_find(facts_.begin(), facts_.end()) != facts_.end())
      throw Error("task facts must be sorted and unique");
    for (std::size_t i = 0; i < facts_.size(); ++i) fact_ids_.emplace(facts_[i].str(), static_cast<FactId>(i));

    pre_of_.resize(facts_.size());
    achievers_.resize(facts_.size());
    for (std::size_t a = 0; a < actions_.size(); ++a) {
      auto& act = actions_[a];
      for (auto* v : {&act.pre, &act.add, &act.del}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
        for (FactId f : *v)
          if (f >= facts_.size()) throw Error("action " + act.signature() + " references unknown fact id");
      }
      std::vector<FactId> both;
      std::set_intersection(act.add.begin(), act.add.end(), act.del.begin(), act.del.end(),
                            std::back_inserter(both));
      if (!both.empty())
        throw Error("action " + act.signature() + " adds and deletes " + facts_[both.front()].str());
      if (act.cost < 0) throw Error("action " + act.signature() + " has negative cost");
      for (FactId f : act.pre) pre_of_[f].push_back(static_cast<ActionId>(a));
      for (FactId f : act.add) achievers_[f].push_back(static_cast<ActionId>(a));
      action_ids_.emplace(act.signature(), static_cast<ActionId>(a));
    }
  }

  std::size_t num_facts() const { return facts_.size(); }
  std::size_t num_actions() const { return actions_.size(); }
  const std::vector<Fact>& facts() const { return facts_; }
  const std::vector<Action>& actions() const { return actions_; }
  const Fact& fact(FactId f) const { return facts_[f]; }
  const Action& action(ActionId a) const { return actions_[a]; }

  // Actions with `f` as a precondition / as an add effect.
  std::span<const ActionId> consumers(FactId f) const { return pre_of_[f]; }
  std::span<const ActionId> achievers(FactId f) const { return achievers_[f]; }

  std::optional<FactId> find_fact(std::string_view name) const {
    auto it = fact_ids_.find(std::string(name));
    if (it == fact_ids_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<FactId> find_fact(const Fact& f) const { return find_fact(f.str()); }
  // Lookup by `(name a b)` signature.
  std::optional<ActionId> find_action(std::string_view signature) const {
    auto it = action_ids_.find(std::string(signature));
    if (it == action_ids_.end()) return std::nullopt;
    return it->second;
  }

  FactSet empty_set() const { return FactSet(facts_.size()); }
  FactSet make_set(std::span<const FactId> ids) const {
    FactSet s(facts_.size());
    for (FactId f : ids) s.set(f);
    return s;
  }

 private:
  std::vector<Fact> facts_;
  std::vector<Action> actions_;
  std::vector<std::vector<ActionId>> pre_of_;
  std::vector<std::vector<ActionId>> achievers_;
  std::map<std::string, FactId, std::less<>> fact_ids_;
  std::map<std::string, ActionId, std::less<>> action_ids_;
};

struct PlanningInstance {
  std::shared_ptr<const Task> task;
  State init;
  FactSet goal;

  const Task& domain() const { return *task; }
};

inline bool applicable(const State& state, const Action& action) {
  return std::all_of(action.pre.begin(), action.pre.end(),
                     [&](FactId f) { return state.facts.test(f); });
}

inline State apply(const State& state, const Action& action) {
  if (!applicable(state, action))
    throw InapplicableActionError("action " + action.signature() + " is not applicable");
  State next = state;
  for (FactId f : action.del) next.facts.reset(f);
  for (FactId f : action.add) next.facts.set(f);
  return next;
}

inline bool validate_plan(const PlanningInstance& instance, std::span<const ActionId> plan) {
  State s = instance.init;
  for (ActionId a : plan) {
    const auto& act = instance.task->action(a);
    if (!applicable(s, act)) return false;
    s = apply(s, act);
  }
  return instance.goal.is_subset_of(s.facts);
}

// Builds tasks from fact names, for fixtures and tests.
class TaskBuilder {
 public:
  TaskBuilder& fact(Fact f) {
    facts_.push_back(std::move(f));
    return *this;
  }
  // `pre`, `add`, `del` are fact strings as rendered by Fact::str().
  TaskBuilder& action(std::string name, std::vector<std::string> args, std::vector<std::string> pre,
                      std::vector<std::string> add, std::vector<std::string> del = {}) {
    pending_.push_back({std::move(name), std::move(args), std::move(pre), std::move(add), std::move(del)});
    return *this;
  }

  std::shared_ptr<const Task> build() const {
    auto facts = facts_;
    std::sort(facts.begin(), facts.end());
    facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
    std::map<std::string, FactId> ids;
    for (std::size_t i = 0; i < facts.size(); ++i) ids[facts[i].str()] = static_cast<FactId>(i);
    auto lookup = [&](const std::vector<std::string>& names) {
      std::vector<FactId> out;
      for (const auto& n : names) {
        auto it = ids.find(n);
        if (it == ids.end()) throw Error("unknown fact " + n);
        out.push_back(it->second);
      }
      return out;
    };
    std::vector<Action> actions;
    for (const auto& p : pending_)
      actions.push_back({p.name, p.args, lookup(p.pre), lookup(p.add), lookup(p.del), 1});
    return std::make_shared<const Task>(std::move(facts), std::move(actions));
  }

 private:
  struct Pending {
    std::string name;
    std::vector<std::string> args, pre, add, del;
  };
  std::vector<Fact> facts_;
  std::vector<Pending> pending_;
};

inline FactSet facts_by_name(const Task& task, std::initializer_list<std::string_view> names) {
  FactSet s = task.empty_set();
  for (auto n : names) {
    auto id = task.find_fact(n);
    if (!id) throw Error("unknown fact " + std::string(n));
    s.set(*id);
  }
  return s;
}

inline std::string format_facts(const Task& task, const FactSet& s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](std::size_t f) {
    if (!first) out += ", ";
    first = false;
    out += task.fact(static_cast<FactId>(f)).str();
  });
  return out + "}";
}

}  // namespace lmrecog
