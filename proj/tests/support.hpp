#pragma once

// Shared helpers and reference implementations for the tests. The reference
// routines here are written directly from the definitions and share no code
// with the library's algorithms.

#include <algorithm>
#include <deque>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <unistd.h>
#include <vector>

#include "lmrecog.hpp"
#include "lmrecog/generate.hpp"

namespace testing_support {

using namespace lmrecog;

inline std::filesystem::path fixture_dir() { return LMRECOG_FIXTURES; }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("lmrecog-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline PlanningInstance ground_text(std::string_view domain, std::string_view problem, bool prune = true) {
  auto d = pddl::parse_domain(domain);
  auto p = pddl::parse_problem(problem, d);
  GroundOptions o;
  o.prune_unreachable = prune;
  return ground(d, p, o);
}

inline std::set<std::string> names(const Task& task, const std::vector<FactId>& ids) {
  std::set<std::string> out;
  for (auto f : ids) out.insert(task.fact(f).str());
  return out;
}

inline std::set<std::string> fact_landmark_names(const Task& task, const LandmarkSet& s) {
  std::set<std::string> out;
  for (const auto& l : s.landmarks)
    if (l.is_fact()) out.insert(task.fact(l.facts.front()).str());
  return out;
}

// Delete-relaxed reachability by naive fixpoint over the whole action list.
// Forbidden facts never become true.
inline bool ref_relaxed_reachable(const PlanningInstance& inst, const std::set<FactId>& forbidden) {
  const Task& t = *inst.task;
  std::vector<bool> have(t.num_facts(), false);
  for (std::size_t f = 0; f < t.num_facts(); ++f)
    if (inst.init.facts.test(f) && !forbidden.count(static_cast<FactId>(f))) have[f] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& a : t.actions()) {
      if (!std::all_of(a.pre.begin(), a.pre.end(), [&](FactId f) { return have[f]; })) continue;
      for (FactId f : a.add)
        if (!have[f] && !forbidden.count(f)) have[f] = changed = true;
    }
  }
  for (std::size_t f = 0; f < t.num_facts(); ++f)
    if (inst.goal.test(f) && !have[f]) return false;
  return true;
}

// Facts whose removal makes the goal relaxed-unreachable, plus goal facts.
inline std::set<FactId> ref_relaxed_landmarks(const PlanningInstance& inst) {
  std::set<FactId> out;
  for (std::size_t f = 0; f < inst.task->num_facts(); ++f)
    if (inst.goal.test(f) || !ref_relaxed_reachable(inst, {static_cast<FactId>(f)})) out.insert(static_cast<FactId>(f));
  return out;
}

// Exact landmark test over the full reachable state space: can the goal be
// reached through states none of which contains any fact of `facts`?
inline bool ref_avoidable(const PlanningInstance& inst, const std::vector<FactId>& facts) {
  const Task& t = *inst.task;
  auto touches = [&](const std::vector<bool>& s) {
    return std::any_of(facts.begin(), facts.end(), [&](FactId f) { return s[f]; });
  };
  std::vector<bool> start(t.num_facts());
  for (std::size_t f = 0; f < t.num_facts(); ++f) start[f] = inst.init.facts.test(f);
  if (touches(start)) return false;
  std::set<std::vector<bool>> seen{start};
  std::deque<std::vector<bool>> queue{start};
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    bool goal = true;
    for (std::size_t f = 0; f < t.num_facts(); ++f)
      if (inst.goal.test(f) && !s[f]) goal = false;
    if (goal) return true;
    for (const auto& a : t.actions()) {
      if (!std::all_of(a.pre.begin(), a.pre.end(), [&](FactId f) { return s[f]; })) continue;
      auto n = s;
      for (FactId f : a.del) n[f] = false;
      for (FactId f : a.add) n[f] = true;
      if (touches(n) || !seen.insert(n).second) continue;
      queue.push_back(std::move(n));
    }
  }
  return false;
}

struct SmallInstance {
  std::string label;
  PlanningInstance instance;
};

// E1, E2 and generated Blocks World (<= 4 blocks) / Logistics (<= 2
// packages) instances, one per hypothesis.
inline std::vector<SmallInstance> small_instances(std::size_t generated_problems = 4) {
  std::vector<SmallInstance> out{{"E1", fixtures::e1()}, {"E2", fixtures::e2()}};
  for (std::size_t i = 0; i < generated_problems; ++i) {
    auto bw = fixtures::generate_blocks(3 + i % 2, 3, 100 + i);
    auto lg = fixtures::generate_logistics(1 + i % 2, 3, 200 + i);
    for (const auto* gp : {&bw, &lg}) {
      auto d = pddl::parse_domain(gp->domain_pddl);
      for (std::size_t h = 0; h < gp->hypotheses.size(); ++h) {
        auto p = pddl::parse_problem(gp->problem_pddl(h), d);
        out.push_back({gp->name + "/h" + std::to_string(h), ground(d, p)});
      }
    }
  }
  return out;
}

// Writes a generated problem as a bundle observing `steps` of its plan and
// loads it back.
inline LoadedBundle bundle_of(const fixtures::GeneratedProblem& gp, const std::vector<std::size_t>& steps,
                              const std::string& tag) {
  auto dir = scratch_dir("bundle-" + tag) / (gp.domain_name + "_" + tag + "_100");
  std::vector<std::string> obs;
  for (auto i : steps) obs.push_back(gp.plan.at(i));
  fixtures::write_bundle(dir, gp, obs);
  auto b = load_bundle(dir);
  std::filesystem::remove_all(dir.parent_path());
  return b;
}

inline std::vector<std::size_t> all_steps(const fixtures::GeneratedProblem& gp) {
  std::vector<std::size_t> out(gp.plan.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

}  // namespace testing_support
