#pragma once

// Fact landmark extraction: an exhaustive baseline, the h^m compilation
// (m = 1), RHW-style backchaining with disjunctions, Zhu & Givan label
// propagation, and Hoffmann et al. RPG backchaining. Every routine here is a
// pure function of the instance.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lmrecog/graphs.hpp"
#include "lmrecog/model.hpp"

namespace lmrecog {

enum class LandmarkKind { conjunctive, disjunctive };

// A single fact (conjunctive) or a disjunction of at least two facts.
struct Landmark {
  LandmarkKind kind = LandmarkKind::conjunctive;
  std::vector<FactId> facts;  // sorted, unique

  static Landmark fact(FactId f) { return {LandmarkKind::conjunctive, {f}}; }
  // Collapses to a fact landmark when only one distinct fact remains.
  static Landmark disjunction(std::vector<FactId> fs) {
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    if (fs.empty()) throw Error("empty disjunctive landmark");
    if (fs.size() == 1) return fact(fs.front());
    return {LandmarkKind::disjunctive, std::move(fs)};
  }

  bool is_fact() const { return kind == LandmarkKind::conjunctive; }
  bool holds_in(const FactSet& s) const {
    return std::any_of(facts.begin(), facts.end(), [&](FactId f) { return s.test(f); });
  }

  auto operator<=>(const Landmark&) const = default;
  bool operator==(const Landmark&) const = default;
};

enum class Extractor { exhaust, h1, rhw, zhu_givan, hoffmann };

inline constexpr Extractor kAllExtractors[] = {Extractor::exhaust, Extractor::h1, Extractor::rhw,
                                               Extractor::zhu_givan, Extractor::hoffmann};

inline std::string_view to_string(Extractor e) {
  switch (e) {
    case Extractor::exhaust: return "exhaust";
    case Extractor::h1: return "h1";
    case Extractor::rhw: return "rhw";
    case Extractor::zhu_givan: return "zhu-givan";
    case Extractor::hoffmann: return "hoffmann";
  }
  return "?";
}

inline std::optional<Extractor> parse_extractor(std::string_view s) {
  for (auto e : kAllExtractors)
    if (to_string(e) == s) return e;
  return std::nullopt;
}

struct LandmarkSet {
  FactSet goal;
  std::vector<Landmark> landmarks;
  Extractor extractor = Extractor::exhaust;
  // Compilation order for h^m; 0 for the other extractors.
  int m = 0;

  std::size_t size() const { return landmarks.size(); }
  std::size_t num_fact_landmarks() const {
    return static_cast<std::size_t>(std::count_if(landmarks.begin(), landmarks.end(),
                                                  [](const Landmark& l) { return l.is_fact(); }));
  }
  bool contains(const Landmark& l) const { return std::find(landmarks.begin(), landmarks.end(), l) != landmarks.end(); }
  FactSet fact_landmarks(const Task& task) const {
    FactSet s = task.empty_set();
    for (const auto& l : landmarks)
      if (l.is_fact()) s.set(l.facts.front());
    return s;
  }
};

struct ExtractOptions {
  // RHW disjunctions with more disjuncts than this are discarded.
  std::size_t max_disjunction_size = 4;
};

// A candidate is a landmark when forbidding all of its facts makes the goal
// unreachable under delete relaxation. Candidates touching the goal hold at
// the end of every plan.
inline bool verify_candidate(const PlanningInstance& instance, const Landmark& candidate) {
  FactSet forbidden = instance.task->empty_set();
  for (FactId f : candidate.facts) {
    if (instance.goal.test(f)) return true;
    forbidden.set(f);
  }
  return !relaxed_reachable(instance, instance.goal, forbidden);
}

namespace detail {

inline void require_solvable(const PlanningInstance& instance) {
  if (!relaxed_reachable(instance, instance.goal))
    throw UnsolvableInstanceError("goal " + format_facts(*instance.task, instance.goal) +
                                  " is not reachable under delete relaxation");
}

// Orders by first RPG layer, then canonical fact order; drops duplicates and
// disjunctions subsumed by a fact landmark.
inline std::vector<Landmark> normalize(const PlanningInstance& instance, std::vector<Landmark> lms) {
  const auto rpg = build_rpg(instance);
  std::set<FactId> single;
  for (const auto& l : lms)
    if (l.is_fact()) single.insert(l.facts.front());
  std::erase_if(lms, [&](const Landmark& l) {
    return !l.is_fact() && std::any_of(l.facts.begin(), l.facts.end(), [&](FactId f) { return single.contains(f); });
  });
  auto level = [&](const Landmark& l) {
    int best = std::numeric_limits<int>::max();
    for (FactId f : l.facts)
      if (rpg.fact_level[f] != kUnreached) best = std::min(best, rpg.fact_level[f]);
    return best;
  };
  std::sort(lms.begin(), lms.end(), [&](const Landmark& a, const Landmark& b) {
    auto la = level(a), lb = level(b);
    if (la != lb) return la < lb;
    return a.facts != b.facts ? a.facts < b.facts : a.kind < b.kind;
  });
  lms.erase(std::unique(lms.begin(), lms.end()), lms.end());
  return lms;
}

inline LandmarkSet finish(const PlanningInstance& instance, Extractor e, std::vector<Landmark> lms, int m = 0) {
  instance.goal.for_each([&](std::size_t g) { lms.push_back(Landmark::fact(static_cast<FactId>(g))); });
  return LandmarkSet{instance.goal, normalize(instance, std::move(lms)), e, m};
}

}  // namespace detail

// Tests every relaxed-reachable fact.
inline LandmarkSet extract_exhaust(const PlanningInstance& instance) {
  detail::require_solvable(instance);
  const auto rpg = build_rpg(instance);
  std::vector<Landmark> out;
  rpg.reached().for_each([&](std::size_t f) {
    auto l = Landmark::fact(static_cast<FactId>(f));
    if (verify_candidate(instance, l)) out.push_back(l);
  });
  return detail::finish(instance, Extractor::exhaust, std::move(out));
}

// Delete-free compilation whose facts are sets of at most m original facts.
// An action gets one copy per context set C of size < m that it neither
// requires, adds nor deletes; the copy requires and re-adds C. Only m = 1 is
// built here, where C is always empty and the meta-facts are singletons.
struct HmCompilation {
  struct MetaAction {
    ActionId origin;
    std::vector<std::uint32_t> pre;
    std::vector<std::uint32_t> add;
  };

  int m = 1;
  std::vector<std::vector<FactId>> meta_facts;
  std::vector<MetaAction> actions;
  std::vector<std::uint32_t> init;
  std::vector<std::uint32_t> goal;
};

inline HmCompilation compile_hm(const PlanningInstance& instance, int m = 1) {
  if (m != 1) throw Error("h^m compilation is only available for m = 1");
  const Task& task = *instance.task;
  HmCompilation c;
  c.m = m;
  for (std::size_t f = 0; f < task.num_facts(); ++f) c.meta_facts.push_back({static_cast<FactId>(f)});
  for (std::size_t a = 0; a < task.num_actions(); ++a) {
    const auto& act = task.action(a);
    c.actions.push_back({static_cast<ActionId>(a), {act.pre.begin(), act.pre.end()}, {act.add.begin(), act.add.end()}});
  }
  instance.init.facts.for_each([&](std::size_t f) { c.init.push_back(static_cast<std::uint32_t>(f)); });
  instance.goal.for_each([&](std::size_t f) { c.goal.push_back(static_cast<std::uint32_t>(f)); });
  return c;
}

// Landmarks of the compiled problem by fixpoint propagation:
//   LM(s) = {s} ∪ ⋂_{achievers a} ⋃_{p ∈ pre(a)} LM(p),   LM(s) = {s} for s ∈ init.
inline LandmarkSet extract_h1(const PlanningInstance& instance) {
  detail::require_solvable(instance);
  const HmCompilation c = compile_hm(instance, 1);
  const std::size_t n = c.meta_facts.size();

  std::vector<DynamicBitset> lm(n);  // size 0 = not yet reached
  for (auto s : c.init) {
    lm[s] = DynamicBitset(n);
    lm[s].set(s);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& a : c.actions) {
      if (!std::all_of(a.pre.begin(), a.pre.end(), [&](auto p) { return lm[p].size() != 0; })) continue;
      DynamicBitset u(n);
      for (auto p : a.pre) u |= lm[p];
      for (auto s : a.add) {
        DynamicBitset cand = u;
        cand.set(s);
        if (lm[s].size() == 0) {
          lm[s] = std::move(cand);
          changed = true;
        } else {
          DynamicBitset before = lm[s];
          lm[s] &= cand;
          if (!(lm[s] == before)) changed = true;
        }
      }
    }
  }

  DynamicBitset all(n);
  for (auto g : c.goal) {
    if (lm[g].size() == 0) throw UnsolvableInstanceError("goal unreachable in the compiled problem");
    all |= lm[g];
  }
  std::vector<Landmark> out;
  all.for_each([&](std::size_t s) {
    // Singleton meta-facts map straight back to fact landmarks.
    out.push_back(Landmark::fact(c.meta_facts[s].front()));
  });
  return detail::finish(instance, Extractor::h1, std::move(out), c.m);
}

// Backchains from the goal through possible first achievers: actions that add
// the landmark and are applicable before it is first reached. Shared
// preconditions become fact landmarks; otherwise preconditions are grouped
// by predicate into disjunctions covering every achiever.
inline LandmarkSet extract_rhw(const PlanningInstance& instance, const ExtractOptions& options = {}) {
  detail::require_solvable(instance);
  const Task& task = *instance.task;

  std::set<Landmark> known;
  std::set<Landmark> rejected;
  std::deque<Landmark> queue;
  std::vector<Landmark> out;
  auto record = [&](const Landmark& l) {
    if (known.contains(l) || rejected.contains(l)) return;
    if (!verify_candidate(instance, l)) {
      rejected.insert(l);
      return;
    }
    known.insert(l);
    out.push_back(l);
    queue.push_back(l);
  };
  instance.goal.for_each([&](std::size_t g) { record(Landmark::fact(static_cast<FactId>(g))); });

  while (!queue.empty()) {
    Landmark l = queue.front();
    queue.pop_front();
    if (l.holds_in(instance.init.facts)) continue;

    FactSet forbidden = task.make_set(l.facts);
    const auto before = build_rpg(instance, forbidden, ActionSet{});
    const FactSet& reachable = before.reached();

    std::set<ActionId> achievers;
    for (FactId f : l.facts)
      for (ActionId a : task.achievers(f)) {
        const auto& pre = task.action(a).pre;
        if (std::all_of(pre.begin(), pre.end(), [&](FactId p) { return reachable.test(p); })) achievers.insert(a);
      }
    if (achievers.empty()) continue;

    FactSet shared = task.make_set(task.action(*achievers.begin()).pre);
    for (ActionId a : achievers) shared &= task.make_set(task.action(a).pre);
    shared.for_each([&](std::size_t f) { record(Landmark::fact(static_cast<FactId>(f))); });

    // predicate -> (union of matching preconditions, achievers covered)
    std::map<std::string, std::pair<std::set<FactId>, std::size_t>> groups;
    for (ActionId a : achievers) {
      std::set<std::string> seen;
      for (FactId p : task.action(a).pre) {
        if (shared.test(p)) continue;
        const auto& pred = task.fact(p).predicate;
        auto& grp = groups[pred];
        grp.first.insert(p);
        if (seen.insert(pred).second) ++grp.second;
      }
    }
    for (const auto& [pred, grp] : groups) {
      if (grp.second != achievers.size()) continue;
      if (grp.first.size() > options.max_disjunction_size) continue;
      const bool subsumed = std::any_of(grp.first.begin(), grp.first.end(),
                                        [&](FactId f) { return known.contains(Landmark::fact(f)); });
      if (subsumed) continue;
      record(Landmark::disjunction({grp.first.begin(), grp.first.end()}));
    }
  }
  return detail::finish(instance, Extractor::rhw, std::move(out));
}

// Every fact in the fixpoint label of a goal node.
inline LandmarkSet extract_zhu_givan(const PlanningInstance& instance) {
  detail::require_solvable(instance);
  const auto g = build_label_graph(instance);
  DynamicBitset all(g.label_size());
  instance.goal.for_each([&](std::size_t f) { all |= g.final_label(static_cast<FactId>(f)); });
  std::vector<Landmark> out;
  all.for_each([&](std::size_t id) {
    if (id < g.num_facts()) out.push_back(Landmark::fact(static_cast<FactId>(id)));
  });
  return detail::finish(instance, Extractor::zhu_givan, std::move(out));
}

// Walks the RPG backwards from the goal layer by layer. Preconditions of the
// actions achieving a candidate at the preceding layer become candidates
// themselves; each is kept when it passes verification.
inline LandmarkSet extract_hoffmann(const PlanningInstance& instance) {
  detail::require_solvable(instance);
  const Task& task = *instance.task;
  const auto rpg = build_rpg(instance);

  std::vector<bool> seen(task.num_facts(), false);
  std::deque<FactId> candidates;
  instance.goal.for_each([&](std::size_t g) {
    seen[g] = true;
    candidates.push_back(static_cast<FactId>(g));
  });
  std::vector<Landmark> out;
  while (!candidates.empty()) {
    FactId f = candidates.front();
    candidates.pop_front();
    const int level = rpg.fact_level[f];
    if (level <= 0) continue;
    for (ActionId a : task.achievers(f)) {
      if (rpg.action_level[a] != level - 1) continue;
      for (FactId p : task.action(a).pre) {
        if (seen[p]) continue;
        seen[p] = true;
        if (verify_candidate(instance, Landmark::fact(p))) out.push_back(Landmark::fact(p));
        candidates.push_back(p);
      }
    }
  }
  return detail::finish(instance, Extractor::hoffmann, std::move(out));
}

inline LandmarkSet extract(const PlanningInstance& instance, Extractor e, const ExtractOptions& options = {}) {
  switch (e) {
    case Extractor::exhaust: return extract_exhaust(instance);
    case Extractor::h1: return extract_h1(instance);
    case Extractor::rhw: return extract_rhw(instance, options);
    case Extractor::zhu_givan: return extract_zhu_givan(instance);
    case Extractor::hoffmann: return extract_hoffmann(instance);
  }
  throw Error("unknown extractor");
}

// 1 / (number of goals whose landmark set contains the landmark).
inline std::map<Landmark, double> compute_uniqueness(const std::vector<const LandmarkSet*>& sets) {
  if (sets.empty()) throw Error("uniqueness needs at least one goal");
  std::map<Landmark, int> counts;
  for (const auto* s : sets) {
    std::set<Landmark> distinct(s->landmarks.begin(), s->landmarks.end());
    for (const auto& l : distinct) ++counts[l];
  }
  std::map<Landmark, double> out;
  for (const auto& [l, c] : counts) out.emplace(l, 1.0 / c);
  return out;
}

// One landmark per line: `conj p(a,b)` or `disj p(a) r(b)`.
inline std::string format_landmarks(const Task& task, const LandmarkSet& set) {
  std::ostringstream os;
  for (const auto& l : set.landmarks) {
    os << (l.is_fact() ? "conj" : "disj");
    for (FactId f : l.facts) os << ' ' << task.fact(f).str();
    os << '\n';
  }
  return os.str();
}

inline std::vector<Landmark> parse_landmarks(const Task& task, std::string_view text) {
  std::vector<Landmark> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    std::vector<FactId> facts;
    for (std::string tok; ls >> tok;) {
      auto id = task.find_fact(tok);
      if (!id) throw Error("line " + std::to_string(lineno) + ": unknown fact " + tok);
      facts.push_back(*id);
    }
    if (facts.empty()) throw Error("line " + std::to_string(lineno) + ": landmark without facts");
    if (kind == "conj") {
      if (facts.size() != 1) throw Error("line " + std::to_string(lineno) + ": conj landmarks hold one fact");
      out.push_back(Landmark::fact(facts.front()));
    } else if (kind == "disj") {
      out.push_back(Landmark::disjunction(std::move(facts)));
    } else {
      throw Error("line " + std::to_string(lineno) + ": unknown landmark kind " + kind);
    }
  }
  return out;
}

}  // namespace lmrecog
