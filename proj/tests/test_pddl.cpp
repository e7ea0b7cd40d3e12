#include <gtest/gtest.h>

#include "support.hpp"

using namespace lmrecog;
using namespace testing_support;

namespace {

constexpr std::string_view kTwoBlocks = R"((define (problem two)
  (:domain blocks-world)
  (:objects a b - block)
  (:init (ontable a) (ontable b) (clear a) (clear b) (handempty))
  (:goal (and (on a b))))
)";

std::string parse_error_of(std::string_view domain, std::string_view problem = {}) {
  try {
    auto d = pddl::parse_domain(domain, "d.pddl");
    if (!problem.empty()) pddl::parse_problem(problem, d, "p.pddl");
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Parse, MinimalDomain) {
  auto d = pddl::parse_domain(R"((define (domain m) (:predicates (p ?x))
    (:action a :parameters (?x) :precondition (p ?x) :effect (not (p ?x)))))");
  EXPECT_EQ(d.name, "m");
  EXPECT_EQ(d.predicates.size(), 1u);
  EXPECT_EQ(d.actions.size(), 1u);
}

TEST(Parse, SupportedRequirementsAccepted) {
  EXPECT_NO_THROW(pddl::parse_domain("(define (domain m) (:requirements :strips :typing) (:predicates (p)))"));
  EXPECT_NO_THROW(pddl::parse_domain("(define (domain m) (:requirements :strips :equality) (:predicates (p)))"));
}

TEST(Parse, BlocksWorldHasFourSchemas) {
  auto d = pddl::parse_domain(fixtures::kBlocksDomain);
  ASSERT_EQ(d.actions.size(), 4u);
  std::set<std::string> names;
  for (const auto& a : d.actions) names.insert(a.name);
  EXPECT_EQ(names, (std::set<std::string>{"pick-up", "put-down", "stack", "unstack"}));
}

TEST(Parse, TwoBlockProblem) {
  auto d = pddl::parse_domain(fixtures::kBlocksDomain);
  auto p = pddl::parse_problem(kTwoBlocks, d);
  EXPECT_EQ(p.goal.size(), 1u);
  EXPECT_EQ(p.init.size(), 5u);
  EXPECT_EQ(p.objects.size(), 2u);
}

TEST(Parse, CaseFolding) {
  auto d = pddl::parse_domain("(DEFINE (DOMAIN Mixed-Case) (:PREDICATES (P-q)))");
  EXPECT_EQ(d.name, "mixed-case");
  EXPECT_EQ(d.predicates.front().name, "p-q");
}

TEST(Parse, Errors) {
  auto d = pddl::parse_domain(fixtures::kBlocksDomain);
  EXPECT_THROW(pddl::parse_problem(R"((define (problem x) (:domain blocks-world) (:objects a - block)
      (:init (ontable a)) (:goal (and))))", d),
               ParseError);
  EXPECT_NE(parse_error_of(fixtures::kBlocksDomain, R"((define (problem x) (:domain blocks-world)
      (:objects a - block) (:init (ontable a)) (:goal (and))))")
                .find("empty goal"),
            std::string::npos);
  EXPECT_NE(parse_error_of(fixtures::kBlocksDomain, R"((define (problem x) (:domain blocks-world)
      (:objects a - block) (:init (ontable a)) (:goal (on a zz))))")
                .find("zz"),
            std::string::npos);
  EXPECT_NE(parse_error_of(fixtures::kBlocksDomain, R"((define (problem x) (:domain other)
      (:objects a - block) (:init (ontable a)) (:goal (ontable a))))"),
            "");
  EXPECT_NE(parse_error_of(fixtures::kBlocksDomain, R"((define (problem x) (:domain blocks-world)
      (:objects a - block) (:init (ontable a a)) (:goal (ontable a))))"),
            "");
}

TEST(Parse, ErrorsCarryPosition) {
  auto msg = parse_error_of("(define (domain m)\n  (:predicates (p))\n  (:action a :parameters () :precondition (q)))");
  EXPECT_NE(msg.find("d.pddl:3:"), std::string::npos) << msg;
  EXPECT_NE(parse_error_of("(define (domain m) (:predicates (p))").find("d.pddl:"), std::string::npos);
}

TEST(Parse, UnsupportedFeaturesAreNamed) {
  auto expect_unsupported = [](std::string_view text, std::string_view needle) {
    try {
      pddl::parse_domain(text, "d.pddl");
      ADD_FAILURE() << "accepted: " << text;
    } catch (const UnsupportedFeatureError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_unsupported("(define (domain m) (:requirements :adl) (:predicates (p)))", ":adl");
  expect_unsupported("(define (domain m) (:requirements :conditional-effects) (:predicates (p)))",
                     ":conditional-effects");
  expect_unsupported(R"((define (domain m) (:predicates (p) (q))
      (:action a :parameters () :precondition (not (p)) :effect (q))))",
                     "negative");
  expect_unsupported(R"((define (domain m) (:predicates (p) (q))
      (:action a :parameters () :precondition (or (p) (q)) :effect (q))))",
                     "or");
  expect_unsupported(R"((define (domain m) (:predicates (p) (q))
      (:action a :parameters () :precondition (p) :effect (when (p) (q)))))",
                     "conditional");
}

TEST(Ground, TwoBlocksWithoutPruningHasEightActions) {
  auto inst = ground_text(fixtures::kBlocksDomain, kTwoBlocks, false);
  std::map<std::string, int> per_schema;
  for (const auto& a : inst.task->actions()) ++per_schema[a.name];
  EXPECT_EQ(inst.task->num_actions(), 8u);
  EXPECT_EQ(per_schema["stack"], 2);
  EXPECT_EQ(per_schema["unstack"], 2);
  EXPECT_EQ(per_schema["pick-up"], 2);
  EXPECT_EQ(per_schema["put-down"], 2);
  for (const auto& a : inst.task->actions()) EXPECT_TRUE(a.args.size() < 2 || a.args[0] != a.args[1]);
}

TEST(Ground, PruningDropsUnreachableActions) {
  // Pruning removes (unstack ...) only if (on ...) can never hold; here every
  // action stays reachable.
  auto full = ground_text(fixtures::kBlocksDomain, kTwoBlocks, false);
  auto pruned = ground_text(fixtures::kBlocksDomain, kTwoBlocks, true);
  EXPECT_EQ(pruned.task->num_actions(), 8u);
  auto d = pddl::parse_domain(R"((define (domain m) (:predicates (p) (q) (r) (s))
      (:action a :parameters () :precondition (p) :effect (q))
      (:action b :parameters () :precondition (r) :effect (s))))");
  auto p = pddl::parse_problem("(define (problem x) (:domain m) (:init (p)) (:goal (q)))", d);
  EXPECT_EQ(ground(d, p).task->num_actions(), 1u);
  GroundOptions keep;
  keep.prune_unreachable = false;
  EXPECT_EQ(ground(d, p, keep).task->num_actions(), 2u);
  (void)full;
}

TEST(Ground, NullaryPredicatesOnly) {
  auto d = pddl::parse_domain(R"((define (domain m) (:predicates (p) (q) (r))
      (:action a :parameters () :precondition (p) :effect (q))
      (:action b :parameters () :precondition (q) :effect (and (r) (not (p))))))");
  auto p = pddl::parse_problem("(define (problem x) (:domain m) (:init (p)) (:goal (r)))", d);
  EXPECT_EQ(ground(d, p).task->num_facts(), 3u);
}

TEST(Ground, E1FromPddlMatchesHandBuilt) {
  auto parsed = ground_text(fixtures::kE1Domain, fixtures::kE1Problem);
  auto hand = fixtures::e1();
  ASSERT_EQ(parsed.task->facts(), hand.task->facts());
  ASSERT_EQ(parsed.task->num_actions(), hand.task->num_actions());
  for (std::size_t a = 0; a < hand.task->num_actions(); ++a) {
    const auto& x = parsed.task->action(a);
    const auto& y = hand.task->action(a);
    EXPECT_EQ(x.signature(), y.signature());
    EXPECT_EQ(x.pre, y.pre);
    EXPECT_EQ(x.add, y.add);
    EXPECT_EQ(x.del, y.del);
  }
  EXPECT_EQ(parsed.init, hand.init);
  EXPECT_EQ(parsed.goal, hand.goal);
}

TEST(Ground, E2FromPddlMatchesHandBuilt) {
  auto parsed = ground_text(fixtures::kE2Domain, fixtures::kE2Problem);
  auto hand = fixtures::e2();
  ASSERT_EQ(parsed.task->facts(), hand.task->facts());
  ASSERT_EQ(parsed.task->num_actions(), hand.task->num_actions());
  for (std::size_t a = 0; a < hand.task->num_actions(); ++a) EXPECT_EQ(parsed.task->action(a).add, hand.task->action(a).add);
}

TEST(Ground, TypingRestrictsBindings) {
  auto gp = fixtures::generate_logistics(1, 2, 3);
  auto inst = ground_text(gp.domain_pddl, gp.problem_pddl(0), false);
  for (const auto& a : inst.task->actions()) {
    if (a.name == "fly-airplane") {
      EXPECT_EQ(a.args[0], "pl1");
      EXPECT_NE(a.args[1].find("-air"), std::string::npos);
    }
    if (a.name == "drive-truck") EXPECT_TRUE(a.args[0] == "t1" || a.args[0] == "t2");
  }
}

TEST(Ground, GoalOutsideUniverseFails) {
  auto d = pddl::parse_domain(R"((define (domain m) (:requirements :typing) (:types a b)
      (:predicates (p ?x - a)) (:action act :parameters (?x - a) :precondition () :effect (p ?x))))");
  auto p = pddl::parse_problem("(define (problem x) (:domain m) (:objects o - b) (:init) (:goal (p o)))", d);
  EXPECT_THROW(ground(d, p), GroundingError);
}

// Grounding is deterministic and every action touches only facts of the
// universe.
TEST(GroundProperty, DeterministicAndClosed) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (const auto& gp : {fixtures::generate_blocks(4, 2, seed), fixtures::generate_logistics(2, 2, seed)}) {
      auto a = ground_text(gp.domain_pddl, gp.problem_pddl(0));
      auto b = ground_text(gp.domain_pddl, gp.problem_pddl(0));
      ASSERT_EQ(a.task->facts(), b.task->facts());
      ASSERT_EQ(a.task->num_actions(), b.task->num_actions());
      for (std::size_t i = 0; i < a.task->num_actions(); ++i) {
        EXPECT_EQ(a.task->action(i).signature(), b.task->action(i).signature());
        for (const auto* v : {&a.task->action(i).pre, &a.task->action(i).add, &a.task->action(i).del})
          for (FactId f : *v) EXPECT_LT(f, a.task->num_facts());
      }
    }
  }
}

// Printing an AST and parsing it again gives the same AST.
TEST(ParseProperty, RoundTrip) {
  std::vector<std::pair<std::string, std::string>> cases{
      {std::string(fixtures::kE1Domain), std::string(fixtures::kE1Problem)},
      {std::string(fixtures::kE2Domain), std::string(fixtures::kE2Problem)}};
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto bw = fixtures::generate_blocks(4, 3, seed);
    auto lg = fixtures::generate_logistics(2, 3, seed);
    cases.emplace_back(bw.domain_pddl, bw.problem_pddl(1));
    cases.emplace_back(lg.domain_pddl, lg.problem_pddl(1));
  }
  for (const auto& [dt, pt] : cases) {
    auto d = pddl::parse_domain(dt);
    auto p = pddl::parse_problem(pt, d);
    auto d2 = pddl::parse_domain(pddl::to_pddl(d));
    EXPECT_EQ(d, d2) << pddl::to_pddl(d);
    EXPECT_EQ(p, pddl::parse_problem(pddl::to_pddl(p), d2)) << pddl::to_pddl(p);
  }
}
