#pragma once

// Delete-relaxation machinery: layered relaxed planning graphs, constrained
// reachability, and the labelled planning graph used for label propagation.

#include <cstdint>
#include <limits>
#include <vector>

#include "lmrecog/model.hpp"

namespace lmrecog {

using ActionSet = DynamicBitset;

inline constexpr int kUnreached = -1;

struct RelaxedPlanningGraph {
  // Cumulative: fact_levels[i] is every fact present at layer i.
  std::vector<FactSet> fact_levels;
  // action_levels[i] holds the actions that first become applicable at
  // layer i; they produce layer i + 1.
  std::vector<std::vector<ActionId>> action_levels;
  std::vector<int> fact_level;    // first layer of each fact, or kUnreached
  std::vector<int> action_level;  // first layer of each action, or kUnreached

  const FactSet& reached() const { return fact_levels.back(); }
  std::size_t num_levels() const { return fact_levels.size(); }
};

// Facts in `forbidden_facts` are dropped from the initial state and from every
// add list; actions in `forbidden_actions` never fire. Either set may be
// empty-sized (size 0) to mean "nothing forbidden".
inline RelaxedPlanningGraph build_rpg(const PlanningInstance& instance, const FactSet& forbidden_facts,
                                      const ActionSet& forbidden_actions) {
  const Task& task = *instance.task;
  const auto nf = task.num_facts();
  const auto na = task.num_actions();
  const bool ff = forbidden_facts.size() != 0;
  const bool fa = forbidden_actions.size() != 0;

  RelaxedPlanningGraph g;
  g.fact_level.assign(nf, kUnreached);
  g.action_level.assign(na, kUnreached);

  std::vector<std::uint32_t> missing(na);
  for (std::size_t a = 0; a < na; ++a) missing[a] = static_cast<std::uint32_t>(task.action(a).pre.size());

  FactSet current = instance.init.facts;
  if (ff) current.subtract(forbidden_facts);
  std::vector<FactId> fresh;
  current.for_each([&](std::size_t f) {
    fresh.push_back(static_cast<FactId>(f));
    g.fact_level[f] = 0;
  });
  g.fact_levels.push_back(current);

  std::vector<ActionId> ready;
  for (std::size_t a = 0; a < na; ++a)
    if (missing[a] == 0 && !(fa && forbidden_actions.test(a))) ready.push_back(static_cast<ActionId>(a));

  for (int level = 0;; ++level) {
    for (FactId f : fresh)
      for (ActionId a : task.consumers(f))
        if (--missing[a] == 0 && !(fa && forbidden_actions.test(a))) ready.push_back(a);
    std::sort(ready.begin(), ready.end());
    for (ActionId a : ready) g.action_level[a] = level;

    std::vector<FactId> next;
    FactSet layer = current;
    for (ActionId a : ready)
      for (FactId f : task.action(a).add) {
        if ((ff && forbidden_facts.test(f)) || layer.test(f)) continue;
        layer.set(f);
        g.fact_level[f] = level + 1;
        next.push_back(f);
      }
    g.action_levels.push_back(std::move(ready));
    ready.clear();
    if (next.empty()) break;
    std::sort(next.begin(), next.end());
    g.fact_levels.push_back(layer);
    current = std::move(layer);
    fresh = std::move(next);
  }
  return g;
}

inline RelaxedPlanningGraph build_rpg(const PlanningInstance& instance) {
  return build_rpg(instance, FactSet{}, ActionSet{});
}

// Goal test under delete relaxation with the same constraint semantics as
// build_rpg, without materialising the layers.
inline bool relaxed_reachable(const PlanningInstance& instance, const FactSet& goal_facts,
                              const FactSet& forbidden_facts = {}, const ActionSet& forbidden_actions = {}) {
  const Task& task = *instance.task;
  const bool ff = forbidden_facts.size() != 0;
  const bool fa = forbidden_actions.size() != 0;
  if (ff && goal_facts.intersects(forbidden_facts)) return false;

  FactSet reached = instance.init.facts;
  if (ff) reached.subtract(forbidden_facts);
  std::size_t outstanding = goal_facts.count() - (goal_facts & reached).count();
  if (outstanding == 0) return true;

  std::vector<std::uint32_t> missing(task.num_actions());
  std::vector<FactId> queue;
  reached.for_each([&](std::size_t f) { queue.push_back(static_cast<FactId>(f)); });

  auto fire = [&](ActionId a) {
    for (FactId f : task.action(a).add) {
      if (reached.test(f) || (ff && forbidden_facts.test(f))) continue;
      reached.set(f);
      queue.push_back(f);
      if (goal_facts.test(f) && --outstanding == 0) return true;
    }
    return false;
  };

  for (std::size_t a = 0; a < task.num_actions(); ++a) {
    missing[a] = static_cast<std::uint32_t>(task.action(a).pre.size());
    if (missing[a] == 0 && !(fa && forbidden_actions.test(a)) && fire(static_cast<ActionId>(a))) return true;
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (ActionId a : task.consumers(queue[head]))
      if (--missing[a] == 0 && !(fa && forbidden_actions.test(a)) && fire(a)) return true;
  }
  return false;
}

// Labels range over facts [0, |facts|) followed by actions
// [|facts|, |facts| + |actions|).
class LabelGraph {
 public:
  using Label = DynamicBitset;

  std::size_t num_levels() const { return fact_labels_.size(); }
  std::size_t label_size() const { return label_size_; }
  std::size_t num_facts() const { return num_facts_; }

  bool fact_present(std::size_t level, FactId f) const { return fact_labels_[level][f].size() != 0; }
  bool action_present(std::size_t level, ActionId a) const { return action_labels_[level][a].size() != 0; }
  // Size-0 label when absent.
  const Label& fact_label(std::size_t level, FactId f) const { return fact_labels_[level][f]; }
  const Label& action_label(std::size_t level, ActionId a) const { return action_labels_[level][a]; }
  const Label& final_label(FactId f) const { return fact_labels_.back()[f]; }

  static std::size_t action_label_id(std::size_t num_facts, ActionId a) { return num_facts + a; }

 private:
  friend LabelGraph build_label_graph(const PlanningInstance& instance);

  std::size_t num_facts_ = 0;
  std::size_t label_size_ = 0;
  std::vector<std::vector<Label>> fact_labels_;
  std::vector<std::vector<Label>> action_labels_;
};

// Propagates labels layer by layer until both presence and labels stop
// changing. Fact labels include the fact itself; action labels include the
// action itself.
inline LabelGraph build_label_graph(const PlanningInstance& instance) {
  const Task& task = *instance.task;
  const auto nf = task.num_facts();
  const auto na = task.num_actions();
  LabelGraph g;
  g.num_facts_ = nf;
  g.label_size_ = nf + na;

  std::vector<LabelGraph::Label> facts(nf);
  instance.init.facts.for_each([&](std::size_t f) {
    facts[f] = LabelGraph::Label(g.label_size_);
    facts[f].set(f);
  });
  g.fact_labels_.push_back(facts);

  // Each layer changes at least one label bit or presence flag, so this bound
  // is never reached on a well-formed task.
  const std::size_t max_layers = (nf + 1) * (g.label_size_ + 1) + 2;
  for (std::size_t layer = 0; layer < max_layers; ++layer) {
    const auto& cur = g.fact_labels_.back();
    std::vector<LabelGraph::Label> acts(na);
    for (std::size_t a = 0; a < na; ++a) {
      const auto& act = task.action(a);
      bool ok = std::all_of(act.pre.begin(), act.pre.end(), [&](FactId p) { return cur[p].size() != 0; });
      if (!ok) continue;
      LabelGraph::Label l(g.label_size_);
      l.set(nf + a);
      for (FactId p : act.pre) l |= cur[p];
      acts[a] = std::move(l);
    }
    std::vector<LabelGraph::Label> next = cur;  // no-op persistence
    for (std::size_t a = 0; a < na; ++a) {
      if (acts[a].size() == 0) continue;
      for (FactId f : task.action(a).add) {
        if (next[f].size() == 0) {
          next[f] = acts[a];
        } else {
          next[f] &= acts[a];
        }
      }
    }
    for (std::size_t f = 0; f < nf; ++f)
      if (next[f].size() != 0) next[f].set(f);
    g.action_labels_.push_back(std::move(acts));
    bool stable = next == cur;
    g.fact_labels_.push_back(std::move(next));
    if (stable) break;
  }

  instance.goal.for_each([&](std::size_t f) {
    if (!g.fact_present(g.num_levels() - 1, static_cast<FactId>(f)))
      throw UnsolvableInstanceError("goal fact " + task.fact(static_cast<FactId>(f)).str() +
                                    " never appears in the planning graph");
  });
  return g;
}

}  // namespace lmrecog
