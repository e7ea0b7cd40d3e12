#include <gtest/gtest.h>

#include "support.hpp"

using namespace lmrecog;
using namespace testing_support;

namespace {

using Names = std::set<std::string>;

Landmark fact_lm(const Task& t, std::string_view name) { return Landmark::fact(*t.find_fact(name)); }

// Delete-free copy of an instance.
PlanningInstance without_deletes(const PlanningInstance& inst) {
  std::vector<Action> acts = inst.task->actions();
  for (auto& a : acts) a.del.clear();
  return {std::make_shared<const Task>(inst.task->facts(), std::move(acts)), inst.init, inst.goal};
}

}  // namespace

TEST(VerifyCandidate, Examples) {
  auto e1 = fixtures::e1();
  auto e2 = fixtures::e2();
  EXPECT_TRUE(verify_candidate(e1, fact_lm(*e1.task, "q")));
  EXPECT_TRUE(verify_candidate(e1, fact_lm(*e1.task, "p")));
  EXPECT_FALSE(verify_candidate(e2, fact_lm(*e2.task, "q(o1)")));
  EXPECT_TRUE(verify_candidate(
      e2, Landmark::disjunction({*e2.task->find_fact("q(o1)"), *e2.task->find_fact("q(o2)")})));
}

TEST(Extract, ExhaustExamples) {
  auto e1 = fixtures::e1();
  auto e2 = fixtures::e2();
  EXPECT_EQ(fact_landmark_names(*e1.task, extract_exhaust(e1)), (Names{"p", "q", "g"}));
  auto s2 = extract_exhaust(e2);
  EXPECT_EQ(fact_landmark_names(*e2.task, s2), (Names{"p", "g"}));
  EXPECT_EQ(s2.size(), 2u);
}

TEST(Extract, GoalAlreadyTrueGivesGoalFacts) {
  auto t = TaskBuilder{}.fact({"a", {}}).fact({"b", {}}).build();
  PlanningInstance inst{t, State{facts_by_name(*t, {"a", "b"})}, facts_by_name(*t, {"a", "b"})};
  for (auto e : kAllExtractors) EXPECT_EQ(fact_landmark_names(*t, extract(inst, e)), (Names{"a", "b"})) << to_string(e);
}

TEST(Extract, H1Examples) {
  auto e1 = fixtures::e1();
  auto e2 = fixtures::e2();
  auto s1 = extract_h1(e1);
  EXPECT_EQ(s1.m, 1);
  for (auto n : {"p", "q", "g"}) EXPECT_TRUE(fact_landmark_names(*e1.task, s1).count(n)) << n;
  for (auto n : {"p", "g"}) EXPECT_TRUE(fact_landmark_names(*e2.task, extract_h1(e2)).count(n)) << n;
}

TEST(Extract, H1CompilationShape) {
  auto e1 = fixtures::e1();
  auto c = compile_hm(e1, 1);
  EXPECT_EQ(c.meta_facts.size(), 3u);
  ASSERT_EQ(c.actions.size(), 2u);
  // a2's delete of p leaves no trace in the delete-free compilation.
  const auto& a2 = c.actions[*e1.task->find_action("(a2)")];
  EXPECT_EQ(a2.pre, std::vector<std::uint32_t>{*e1.task->find_fact("q")});
  EXPECT_EQ(a2.add, std::vector<std::uint32_t>{*e1.task->find_fact("g")});
  EXPECT_THROW(compile_hm(e1, 2), Error);
}

TEST(Extract, H1OnDeleteFreeMatchesExhaust) {
  for (const auto& [label, inst] : small_instances(2)) {
    auto relaxed = without_deletes(inst);
    EXPECT_EQ(extract_h1(relaxed).landmarks, extract_exhaust(relaxed).landmarks) << label;
  }
}

TEST(Extract, RhwExamples) {
  auto e1 = fixtures::e1();
  auto s1 = extract_rhw(e1);
  EXPECT_EQ(fact_landmark_names(*e1.task, s1), (Names{"p", "q", "g"}));
  EXPECT_EQ(s1.size(), 3u);

  auto e2 = fixtures::e2();
  const auto& t = *e2.task;
  auto s2 = extract_rhw(e2);
  EXPECT_EQ(fact_landmark_names(t, s2), (Names{"p", "g"}));
  EXPECT_TRUE(s2.contains(Landmark::disjunction({*t.find_fact("q(o1)"), *t.find_fact("q(o2)")})));
  EXPECT_EQ(s2.size(), 3u);
}

TEST(Extract, RhwDisjunctionCap) {
  auto e2 = fixtures::e2();
  ExtractOptions opts;
  opts.max_disjunction_size = 1;
  // Without the disjunction nothing leads back to p.
  auto s = extract_rhw(e2, opts);
  EXPECT_EQ(format_landmarks(*e2.task, s), "conj g\n");
}

TEST(Extract, ZhuGivanAndHoffmannExamples) {
  auto e1 = fixtures::e1();
  auto e2 = fixtures::e2();
  EXPECT_EQ(fact_landmark_names(*e1.task, extract_zhu_givan(e1)), (Names{"p", "q", "g"}));
  EXPECT_EQ(fact_landmark_names(*e2.task, extract_zhu_givan(e2)), (Names{"p", "g"}));
  EXPECT_EQ(fact_landmark_names(*e1.task, extract_hoffmann(e1)), (Names{"p", "q", "g"}));
  EXPECT_EQ(fact_landmark_names(*e2.task, extract_hoffmann(e2)), (Names{"p", "g"}));
}

TEST(Extract, UnsolvableInstanceThrows) {
  auto e1 = fixtures::e1();
  PlanningInstance stuck{e1.task, State{e1.task->empty_set()}, e1.goal};
  for (auto e : kAllExtractors) EXPECT_THROW(extract(stuck, e), UnsolvableInstanceError) << to_string(e);
}

TEST(Extract, NamesRoundTrip) {
  for (auto e : kAllExtractors) EXPECT_EQ(parse_extractor(to_string(e)), e);
  EXPECT_EQ(to_string(Extractor::zhu_givan), "zhu-givan");
  EXPECT_FALSE(parse_extractor("lama"));
}

TEST(Uniqueness, Examples) {
  auto e2 = fixtures::e2();
  const auto& t = *e2.task;
  auto A = fact_lm(t, "p"), B = fact_lm(t, "g"), C = fact_lm(t, "q(o1)");
  LandmarkSet g1{t.empty_set(), {A, B}}, g2{t.empty_set(), {B, C}}, g3{t.empty_set(), {B}};
  auto u = compute_uniqueness({&g1, &g2, &g3});
  EXPECT_DOUBLE_EQ(u.at(A), 1.0);
  EXPECT_DOUBLE_EQ(u.at(B), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(u.at(C), 1.0);
  auto same = compute_uniqueness({&g1, &g1});
  for (const auto& [l, v] : same) EXPECT_DOUBLE_EQ(v, 0.5);
  EXPECT_THROW(compute_uniqueness({}), Error);
}

TEST(Format, TextRoundTrip) {
  auto e2 = fixtures::e2();
  auto s = extract_rhw(e2);
  auto text = format_landmarks(*e2.task, s);
  EXPECT_EQ(text, "conj p\ndisj q(o1) q(o2)\nconj g\n");
  EXPECT_EQ(parse_landmarks(*e2.task, text), s.landmarks);
  EXPECT_THROW(parse_landmarks(*e2.task, "conj nope\n"), Error);
  EXPECT_THROW(parse_landmarks(*e2.task, "conj p g\n"), Error);
  EXPECT_THROW(parse_landmarks(*e2.task, "maybe p\n"), Error);
}

// Every landmark of every extractor holds along every plan: no goal-reaching
// path through the full state space avoids it.
TEST(ExtractProperty, SoundAgainstStateSpace) {
  for (const auto& [label, inst] : small_instances(4))
    for (auto e : kAllExtractors)
      for (const auto& l : extract(inst, e).landmarks)
        EXPECT_FALSE(ref_avoidable(inst, l.facts))
            << label << " " << to_string(e) << " " << inst.task->fact(l.facts.front()).str();
}

TEST(ExtractProperty, ExhaustMatchesReferenceRelaxedLandmarks) {
  for (const auto& [label, inst] : small_instances(4)) {
    auto s = extract_exhaust(inst);
    std::set<FactId> got;
    for (const auto& l : s.landmarks) {
      ASSERT_TRUE(l.is_fact());
      got.insert(l.facts.front());
    }
    EXPECT_EQ(got, ref_relaxed_landmarks(inst)) << label;
  }
}

TEST(ExtractProperty, DominanceGoalInclusionDeterminism) {
  for (const auto& [label, inst] : small_instances(4)) {
    const auto base = extract_exhaust(inst).fact_landmarks(*inst.task);
    for (auto e : kAllExtractors) {
      auto s = extract(inst, e);
      EXPECT_TRUE(s.fact_landmarks(*inst.task).is_subset_of(base)) << label << " " << to_string(e);
      EXPECT_TRUE(inst.goal.is_subset_of(s.fact_landmarks(*inst.task))) << label << " " << to_string(e);
      EXPECT_EQ(s.landmarks, extract(inst, e).landmarks) << label << " " << to_string(e);
      for (const auto& l : s.landmarks) EXPECT_TRUE(l.is_fact() || l.facts.size() >= 2);
    }
  }
}

// Grounding without reachability pruning leaves every extractor's output
// unchanged.
TEST(ExtractProperty, PruningDoesNotChangeOutput) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (const auto& gp : {fixtures::generate_blocks(4, 2, seed), fixtures::generate_logistics(2, 2, seed)}) {
      auto pruned = ground_text(gp.domain_pddl, gp.problem_pddl(0), true);
      auto full = ground_text(gp.domain_pddl, gp.problem_pddl(0), false);
      for (auto e : kAllExtractors)
        EXPECT_EQ(format_landmarks(*pruned.task, extract(pruned, e)), format_landmarks(*full.task, extract(full, e)))
            << gp.name << " " << to_string(e);
    }
  }
}
