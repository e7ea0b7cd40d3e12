#pragma once

// Exact state-space search over the real (non-relaxed) transition system.
// These routines are independent of every relaxation used by the extractors
// and serve as ground truth on small instances.

#include <deque>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lmrecog/landmarks.hpp"
#include "lmrecog/model.hpp"

namespace lmrecog {

struct OracleLimits {
  std::size_t max_length = 12;
  std::size_t max_expansions = 200'000;
  std::size_t max_plans = 100'000;
};

using Plan = std::vector<ActionId>;

struct PlanEnumeration {
  std::vector<Plan> plans;
  bool truncated = false;
};

namespace detail {

inline std::vector<ActionId> applicable_actions(const Task& task, const State& s) {
  std::vector<ActionId> out;
  for (std::size_t a = 0; a < task.num_actions(); ++a)
    if (applicable(s, task.action(a))) out.push_back(static_cast<ActionId>(a));
  return out;
}

inline void count_expansion(std::size_t& expansions, std::size_t cap) {
  if (++expansions > cap)
    throw StateSpaceTooLargeError("state-space search exceeded " + std::to_string(cap) + " expansions");
}

}  // namespace detail

// Every action sequence of length <= max_length that is a valid plan and
// never revisits a state along its own path, in breadth-first order.
inline PlanEnumeration brute_force_plans(const PlanningInstance& instance, const OracleLimits& limits = {}) {
  if (limits.max_length > 14) throw Error("brute-force plan enumeration is limited to plans of length 14");
  const Task& task = *instance.task;
  struct Node {
    State state;
    Plan plan;
    std::vector<FactSet> path;  // states visited so far, for cycle pruning
  };
  PlanEnumeration out;
  std::size_t expansions = 0;
  std::deque<Node> frontier;
  frontier.push_back({instance.init, {}, {instance.init.facts}});
  while (!frontier.empty()) {
    Node n = std::move(frontier.front());
    frontier.pop_front();
    if (instance.goal.is_subset_of(n.state.facts)) {
      if (out.plans.size() >= limits.max_plans) {
        out.truncated = true;
        return out;
      }
      out.plans.push_back(n.plan);
    }
    if (n.plan.size() >= limits.max_length) continue;
    detail::count_expansion(expansions, limits.max_expansions);
    for (ActionId a : detail::applicable_actions(task, n.state)) {
      State next = apply(n.state, task.action(a));
      if (std::find(n.path.begin(), n.path.end(), next.facts) != n.path.end()) continue;
      Node child{std::move(next), n.plan, n.path};
      child.plan.push_back(a);
      child.path.push_back(child.state.facts);
      frontier.push_back(std::move(child));
    }
  }
  return out;
}

// Breadth-first search restricted to states where `blocked` does not hold.
// Returns a shortest plan of length <= max_length, if any.
template <typename Blocked>
std::optional<Plan> constrained_shortest_plan(const PlanningInstance& instance, Blocked&& blocked,
                                              const OracleLimits& limits) {
  const Task& task = *instance.task;
  if (blocked(instance.init.facts)) return std::nullopt;
  struct Entry {
    std::size_t parent;
    ActionId via;
    std::size_t depth;
  };
  std::vector<State> states{instance.init};
  std::vector<Entry> meta{{0, 0, 0}};
  std::unordered_map<FactSet, std::size_t, BitsetHash> index{{instance.init.facts, 0}};
  std::size_t expansions = 0;
  auto extract_plan = [&](std::size_t i) {
    Plan p;
    while (i != 0) {
      p.push_back(meta[i].via);
      i = meta[i].parent;
    }
    std::reverse(p.begin(), p.end());
    return p;
  };
  for (std::size_t head = 0; head < states.size(); ++head) {
    if (instance.goal.is_subset_of(states[head].facts)) return extract_plan(head);
    if (meta[head].depth >= limits.max_length) continue;
    detail::count_expansion(expansions, limits.max_expansions);
    for (ActionId a : detail::applicable_actions(task, states[head])) {
      State next = apply(states[head], task.action(a));
      if (blocked(next.facts) || index.contains(next.facts)) continue;
      index.emplace(next.facts, states.size());
      meta.push_back({head, a, meta[head].depth + 1});
      states.push_back(std::move(next));
    }
  }
  return std::nullopt;
}

inline std::optional<Plan> shortest_plan(const PlanningInstance& instance, const OracleLimits& limits = {}) {
  return constrained_shortest_plan(instance, [](const FactSet&) { return false; }, limits);
}

struct LandmarkViolation {
  Landmark landmark;
  Plan witness;  // a valid plan along which the landmark never holds
};

// A landmark is violated when some valid plan of length <= max_length never
// passes through a state satisfying it. Searching the state space with the
// satisfying states removed answers this for all such plans at once.
inline std::vector<LandmarkViolation> oracle_check_landmarks(const PlanningInstance& instance,
                                                             std::span<const Landmark> landmarks,
                                                             const OracleLimits& limits = {}) {
  std::vector<LandmarkViolation> out;
  for (const auto& l : landmarks) {
    auto witness = constrained_shortest_plan(instance, [&](const FactSet& s) { return l.holds_in(s); }, limits);
    if (witness) out.push_back({l, std::move(*witness)});
  }
  return out;
}

// Same question answered by simulating an explicit list of plans.
inline std::vector<LandmarkViolation> oracle_check_landmarks(const PlanningInstance& instance,
                                                             std::span<const Landmark> landmarks,
                                                             std::span<const Plan> plans) {
  std::vector<LandmarkViolation> out;
  const Task& task = *instance.task;
  for (const auto& l : landmarks) {
    for (const auto& plan : plans) {
      State s = instance.init;
      bool seen = l.holds_in(s.facts);
      for (ActionId a : plan) {
        if (seen) break;
        s = apply(s, task.action(a));
        seen = l.holds_in(s.facts);
      }
      if (!seen) {
        out.push_back({l, plan});
        break;
      }
    }
  }
  return out;
}

}  // namespace lmrecog
