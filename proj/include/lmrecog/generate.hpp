#pragma once

// Hermetic fixtures: the two hand-sized instances E1/E2 and small generated
// Blocks World / Logistics recognition problems written as bundles.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lmrecog/bundle.hpp"
#include "lmrecog/grounding.hpp"
#include "lmrecog/oracle.hpp"
#include "lmrecog/suite.hpp"

namespace lmrecog::fixtures {

// E1: p -a1-> q -a2-> g, a2 deletes p.
inline constexpr std::string_view kE1Domain = R"((define (domain e1)
  (:requirements :strips)
  (:predicates (p) (q) (g))
  (:action a1 :parameters () :precondition (p) :effect (q))
  (:action a2 :parameters () :precondition (q) :effect (and (g) (not (p)))))
)";
inline constexpr std::string_view kE1Problem = R"((define (problem e1-1)
  (:domain e1)
  (:init (p))
  (:goal (g)))
)";

// E2: two disjoint routes p -> q(o1) -> g and p -> q(o2) -> g.
inline constexpr std::string_view kE2Domain = R"((define (domain e2)
  (:requirements :strips :typing)
  (:types item)
  (:constants o1 o2 - item)
  (:predicates (p) (q ?x - item) (g))
  (:action a1 :parameters () :precondition (p) :effect (q o1))
  (:action a2 :parameters () :precondition (p) :effect (q o2))
  (:action a3 :parameters () :precondition (q o1) :effect (g))
  (:action a4 :parameters () :precondition (q o2) :effect (g)))
)";
inline constexpr std::string_view kE2Problem = R"((define (problem e2-1)
  (:domain e2)
  (:init (p))
  (:goal (g)))
)";

inline PlanningInstance e1() {
  auto task = TaskBuilder{}
                  .fact({"p", {}})
                  .fact({"q", {}})
                  .fact({"g", {}})
                  .action("a1", {}, {"p"}, {"q"})
                  .action("a2", {}, {"q"}, {"g"}, {"p"})
                  .build();
  return {task, State{facts_by_name(*task, {"p"})}, facts_by_name(*task, {"g"})};
}

inline PlanningInstance e2() {
  auto task = TaskBuilder{}
                  .fact({"p", {}})
                  .fact({"q", {"o1"}})
                  .fact({"q", {"o2"}})
                  .fact({"g", {}})
                  .action("a1", {}, {"p"}, {"q(o1)"})
                  .action("a2", {}, {"p"}, {"q(o2)"})
                  .action("a3", {}, {"q(o1)"}, {"g"})
                  .action("a4", {}, {"q(o2)"}, {"g"})
                  .build();
  return {task, State{facts_by_name(*task, {"p"})}, facts_by_name(*task, {"g"})};
}

inline constexpr std::string_view kBlocksDomain = R"((define (domain blocks-world)
  (:requirements :strips :typing :equality)
  (:types block)
  (:predicates (on ?x - block ?y - block) (ontable ?x - block) (clear ?x - block)
               (handempty) (holding ?x - block))
  (:action pick-up
    :parameters (?x - block)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (not (ontable ?x)) (not (clear ?x)) (not (handempty)) (holding ?x)))
  (:action put-down
    :parameters (?x - block)
    :precondition (holding ?x)
    :effect (and (not (holding ?x)) (clear ?x) (handempty) (ontable ?x)))
  (:action stack
    :parameters (?x - block ?y - block)
    :precondition (and (holding ?x) (clear ?y) (not (= ?x ?y)))
    :effect (and (not (holding ?x)) (not (clear ?y)) (clear ?x) (handempty) (on ?x ?y)))
  (:action unstack
    :parameters (?x - block ?y - block)
    :precondition (and (on ?x ?y) (clear ?x) (handempty) (not (= ?x ?y)))
    :effect (and (holding ?x) (clear ?y) (not (clear ?x)) (not (handempty)) (not (on ?x ?y)))))
)";

inline constexpr std::string_view kLogisticsDomain = R"((define (domain logistics)
  (:requirements :strips :typing)
  (:types truck airplane - vehicle
          package vehicle - physobj
          airport location - place
          city place physobj - object)
  (:predicates (in-city ?loc - place ?city - city)
               (at ?obj - physobj ?loc - place)
               (in ?pkg - package ?veh - vehicle))
  (:action load-truck
    :parameters (?pkg - package ?truck - truck ?loc - place)
    :precondition (and (at ?truck ?loc) (at ?pkg ?loc))
    :effect (and (not (at ?pkg ?loc)) (in ?pkg ?truck)))
  (:action load-airplane
    :parameters (?pkg - package ?airplane - airplane ?loc - place)
    :precondition (and (at ?pkg ?loc) (at ?airplane ?loc))
    :effect (and (not (at ?pkg ?loc)) (in ?pkg ?airplane)))
  (:action unload-truck
    :parameters (?pkg - package ?truck - truck ?loc - place)
    :precondition (and (at ?truck ?loc) (in ?pkg ?truck))
    :effect (and (not (in ?pkg ?truck)) (at ?pkg ?loc)))
  (:action unload-airplane
    :parameters (?pkg - package ?airplane - airplane ?loc - place)
    :precondition (and (in ?pkg ?airplane) (at ?airplane ?loc))
    :effect (and (not (in ?pkg ?airplane)) (at ?pkg ?loc)))
  (:action drive-truck
    :parameters (?truck - truck ?loc-from - place ?loc-to - place ?city - city)
    :precondition (and (at ?truck ?loc-from) (in-city ?loc-from ?city) (in-city ?loc-to ?city))
    :effect (and (not (at ?truck ?loc-from)) (at ?truck ?loc-to)))
  (:action fly-airplane
    :parameters (?airplane - airplane ?loc-from - airport ?loc-to - airport)
    :precondition (at ?airplane ?loc-from)
    :effect (and (not (at ?airplane ?loc-from)) (at ?airplane ?loc-to))))
)";

// A recognition problem before observation sampling.
struct GeneratedProblem {
  std::string domain_name;
  std::string name;
  std::string domain_pddl;
  std::string objects;  // body of (:objects ...)
  std::vector<std::string> init_atoms;
  std::vector<std::vector<std::string>> hypotheses;  // atoms per goal
  std::size_t real_goal = 0;
  std::vector<std::string> plan;  // optimal plan for the real goal, as signatures

  std::string template_pddl() const { return problem_pddl_with("<HYPOTHESIS>"); }
  std::string problem_pddl(std::size_t hypothesis) const {
    std::string goal;
    for (const auto& a : hypotheses.at(hypothesis)) goal += a + " ";
    return problem_pddl_with(goal);
  }
  static std::string hypothesis_line(const std::vector<std::string>& atoms) {
    std::string out;
    for (std::size_t i = 0; i < atoms.size(); ++i) out += (i ? "," : "") + atoms[i];
    return out;
  }

 private:
  std::string problem_pddl_with(const std::string& goal) const {
    std::string out = "(define (problem " + name + ")\n  (:domain " + domain_name + ")\n  (:objects " + objects +
                      ")\n  (:init";
    for (const auto& a : init_atoms) out += "\n    " + a;
    out += ")\n  (:goal (and " + goal + ")))\n";
    return out;
  }
};

namespace detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Portable across standard libraries, unlike the distributions.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

// Random arrangement of blocks into towers, as (bottom..top) stacks.
inline std::vector<std::vector<std::string>> random_towers(const std::vector<std::string>& blocks, Rng& rng) {
  auto order = blocks;
  rng.shuffle(order);
  std::vector<std::vector<std::string>> towers;
  for (const auto& b : order) {
    if (towers.empty() || rng.below(2) == 0) {
      towers.push_back({b});
    } else {
      towers[rng.below(towers.size())].push_back(b);
    }
  }
  return towers;
}

inline std::vector<std::string> tower_goal_atoms(const std::vector<std::vector<std::string>>& towers) {
  std::vector<std::string> atoms;
  for (const auto& t : towers) {
    atoms.push_back("(ontable " + t.front() + ")");
    for (std::size_t i = 1; i < t.size(); ++i) atoms.push_back("(on " + t[i] + " " + t[i - 1] + ")");
  }
  std::sort(atoms.begin(), atoms.end());
  return atoms;
}

inline std::vector<std::string> plan_signatures(const PlanningInstance& inst, const Plan& plan) {
  std::vector<std::string> out;
  for (ActionId a : plan) out.push_back(inst.task->action(a).signature());
  return out;
}

// Grounds `problem_pddl(real)` and attaches an optimal plan; false when the
// real goal is unreachable or already true.
inline bool attach_plan(GeneratedProblem& gp) {
  auto d = pddl::parse_domain(gp.domain_pddl, gp.domain_name + ".pddl");
  auto p = pddl::parse_problem(gp.problem_pddl(gp.real_goal), d, gp.name + ".pddl");
  auto inst = ground(d, p);
  OracleLimits limits;
  limits.max_length = 40;
  limits.max_expansions = 2'000'000;
  auto plan = shortest_plan(inst, limits);
  if (!plan || plan->size() < 2) return false;
  gp.plan = plan_signatures(inst, *plan);
  return true;
}

}  // namespace detail

inline GeneratedProblem generate_blocks(std::size_t num_blocks, std::size_t num_hypotheses, std::uint64_t seed) {
  detail::Rng rng(seed);
  std::vector<std::string> blocks;
  for (std::size_t i = 1; i <= num_blocks; ++i) blocks.push_back("b" + std::to_string(i));
  for (;;) {
    GeneratedProblem gp;
    gp.domain_name = "blocks-world";
    gp.name = "blocks-" + std::to_string(seed);
    gp.domain_pddl = std::string(kBlocksDomain);
    for (const auto& b : blocks) gp.objects += b + " ";
    gp.objects += "- block";
    auto start = detail::random_towers(blocks, rng);
    for (const auto& t : start) {
      gp.init_atoms.push_back("(ontable " + t.front() + ")");
      for (std::size_t i = 1; i < t.size(); ++i) gp.init_atoms.push_back("(on " + t[i] + " " + t[i - 1] + ")");
      gp.init_atoms.push_back("(clear " + t.back() + ")");
    }
    gp.init_atoms.push_back("(handempty)");
    const auto start_goal = detail::tower_goal_atoms(start);
    std::set<std::vector<std::string>> seen{start_goal};
    for (std::size_t attempts = 0; gp.hypotheses.size() < num_hypotheses && attempts < 1000; ++attempts) {
      auto atoms = detail::tower_goal_atoms(detail::random_towers(blocks, rng));
      if (seen.insert(atoms).second) gp.hypotheses.push_back(std::move(atoms));
    }
    if (gp.hypotheses.size() < 2) continue;
    gp.real_goal = rng.below(gp.hypotheses.size());
    if (detail::attach_plan(gp)) return gp;
  }
}

// Two cities with an airport and one other location each, a truck per city
// and one airplane.
inline GeneratedProblem generate_logistics(std::size_t num_packages, std::size_t num_hypotheses, std::uint64_t seed) {
  detail::Rng rng(seed);
  const std::vector<std::string> places{"c1-air", "c1-loc", "c2-air", "c2-loc"};
  for (;;) {
    GeneratedProblem gp;
    gp.domain_name = "logistics";
    gp.name = "logistics-" + std::to_string(seed);
    gp.domain_pddl = std::string(kLogisticsDomain);
    gp.objects = "c1 c2 - city c1-air c2-air - airport c1-loc c2-loc - location t1 t2 - truck pl1 - airplane";
    std::vector<std::string> pkgs;
    for (std::size_t i = 1; i <= num_packages; ++i) pkgs.push_back("pk" + std::to_string(i));
    for (const auto& p : pkgs) gp.objects += " " + p;
    gp.objects += " - package";
    gp.init_atoms = {"(in-city c1-air c1)", "(in-city c1-loc c1)", "(in-city c2-air c2)", "(in-city c2-loc c2)"};
    gp.init_atoms.push_back("(at t1 " + places[rng.below(2)] + ")");
    gp.init_atoms.push_back("(at t2 " + places[2 + rng.below(2)] + ")");
    gp.init_atoms.push_back("(at pl1 " + std::string(rng.below(2) ? "c1-air" : "c2-air") + ")");
    std::vector<std::string> start;
    for (const auto& p : pkgs) {
      start.push_back(places[rng.below(places.size())]);
      gp.init_atoms.push_back("(at " + p + " " + start.back() + ")");
    }
    std::set<std::vector<std::string>> seen;
    for (std::size_t attempts = 0; gp.hypotheses.size() < num_hypotheses && attempts < 1000; ++attempts) {
      std::vector<std::string> atoms;
      bool moved = false;
      for (std::size_t i = 0; i < pkgs.size(); ++i) {
        auto dest = places[rng.below(places.size())];
        moved = moved || dest != start[i];
        atoms.push_back("(at " + pkgs[i] + " " + dest + ")");
      }
      if (moved && seen.insert(atoms).second) gp.hypotheses.push_back(std::move(atoms));
    }
    if (gp.hypotheses.size() < 2) continue;
    gp.real_goal = rng.below(gp.hypotheses.size());
    if (detail::attach_plan(gp)) return gp;
  }
}

// Indices of plan steps observed at `level` percent. A fixed random ranking
// of the steps makes lower levels subsets of higher ones.
inline std::vector<std::size_t> observed_steps(std::size_t plan_length, int level, std::uint64_t seed) {
  detail::Rng rng(seed);
  std::vector<std::size_t> order(plan_length);
  for (std::size_t i = 0; i < plan_length; ++i) order[i] = i;
  rng.shuffle(order);
  std::size_t keep = (plan_length * static_cast<std::size_t>(level) + 50) / 100;
  keep = std::clamp<std::size_t>(keep, 1, plan_length);
  std::vector<std::size_t> out(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
  std::sort(out.begin(), out.end());
  return out;
}

inline void write_bundle(const std::filesystem::path& dir, const GeneratedProblem& gp,
                         const std::vector<std::string>& observations) {
  std::filesystem::create_directories(dir);
  write_text(dir / "domain.pddl", gp.domain_pddl);
  write_text(dir / "template.pddl", gp.template_pddl());
  std::string hyps;
  for (const auto& h : gp.hypotheses) hyps += GeneratedProblem::hypothesis_line(h) + "\n";
  write_text(dir / "hyps.dat", hyps);
  write_text(dir / "real_hyp.dat", GeneratedProblem::hypothesis_line(gp.hypotheses[gp.real_goal]) + "\n");
  std::string obs;
  for (const auto& o : observations) obs += o + "\n";
  write_text(dir / "obs.dat", obs);
}

struct SuiteSpec {
  std::size_t blocks_problems = 6;
  std::size_t logistics_problems = 6;
  std::size_t max_blocks = 5;  // instances use 4..max_blocks blocks
  std::size_t max_packages = 2;
  std::size_t hypotheses = 6;
  std::vector<int> levels{10, 30, 50, 70, 100};
  std::uint64_t seed = 1;
};

struct GeneratedBundle {
  std::filesystem::path dir;
  GeneratedProblem problem;
  int level = 100;
};

// Writes <root>/<domain>/<domain>_pNN_<level>/ for every problem and level.
inline std::vector<GeneratedBundle> write_suite(const std::filesystem::path& root, const SuiteSpec& spec) {
  std::vector<GeneratedBundle> out;
  auto emit = [&](const GeneratedProblem& gp, std::size_t index, std::uint64_t sample_seed) {
    for (int level : spec.levels) {
      char name[128];
      std::snprintf(name, sizeof name, "%s_p%02zu_%d", gp.domain_name.c_str(), index, level);
      auto dir = root / gp.domain_name / name;
      std::vector<std::string> obs;
      for (auto i : observed_steps(gp.plan.size(), level, sample_seed)) obs.push_back(gp.plan[i]);
      write_bundle(dir, gp, obs);
      out.push_back({dir, gp, level});
    }
  };
  const std::size_t min_blocks = std::min<std::size_t>(4, spec.max_blocks);
  for (std::size_t i = 0; i < spec.blocks_problems; ++i) {
    const std::size_t n = min_blocks + i % (spec.max_blocks - min_blocks + 1);
    const std::uint64_t s = spec.seed * 1000 + i;
    emit(generate_blocks(n, spec.hypotheses, s), i + 1, s ^ 0x5bd1e995u);
  }
  for (std::size_t i = 0; i < spec.logistics_problems; ++i) {
    const std::size_t n = 1 + i % spec.max_packages;
    const std::uint64_t s = spec.seed * 1000 + 500 + i;
    emit(generate_logistics(n, spec.hypotheses, s), i + 1, s ^ 0x5bd1e995u);
  }
  return out;
}

}  // namespace lmrecog::fixtures
