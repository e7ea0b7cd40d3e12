#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lmrecog/landmarks.hpp"
#include "lmrecog/model.hpp"

namespace lmrecog {

enum class Heuristic { gc, uniq };

inline std::string_view to_string(Heuristic h) { return h == Heuristic::gc ? "gc" : "uniq"; }
inline std::optional<Heuristic> parse_heuristic(std::string_view s) {
  if (s == "gc") return Heuristic::gc;
  if (s == "uniq") return Heuristic::uniq;
  return std::nullopt;
}

// Observations may include actions that grounding pruned, so they are held
// by value rather than as ids into the task.
struct RecognitionProblem {
  std::shared_ptr<const Task> task;
  State init;
  std::vector<FactSet> hypotheses;
  std::vector<Action> observations;
  std::size_t real_goal = 0;

  PlanningInstance instance_for(std::size_t hypothesis) const { return {task, init, hypotheses.at(hypothesis)}; }
};

struct RecognitionConfig {
  Heuristic heuristic = Heuristic::gc;
  int theta = 0;  // percent, [0, 100]
  Extractor extractor = Extractor::exhaust;
};

struct GoalScore {
  std::size_t goal = 0;
  std::vector<Landmark> achieved;
  LandmarkSet total;
  double score = 0.0;
  // Set when the hypothesis could not be scored (unreachable goal or empty
  // landmark mass); the score is then 0.
  bool flagged = false;
  std::string diagnostic;
};

struct RecognitionResult {
  std::vector<GoalScore> scores;
  std::vector<std::size_t> recognized;  // ascending
  double elapsed = 0.0;                 // seconds, extraction included

  bool is_recognized(std::size_t goal) const {
    return std::find(recognized.begin(), recognized.end(), goal) != recognized.end();
  }
};

// A landmark counts as achieved when one of its facts is initially true or
// appears in the precondition or add list of an observed action.
inline std::vector<Landmark> achieved_landmarks(const State& init, std::span<const Action> observations,
                                                const LandmarkSet& landmarks) {
  FactSet seen = init.facts;
  for (const auto& o : observations) {
    for (FactId f : o.pre) seen.set(f);
    for (FactId f : o.add) seen.set(f);
  }
  std::vector<Landmark> out;
  for (const auto& l : landmarks.landmarks)
    if (l.holds_in(seen)) out.push_back(l);
  return out;
}

struct Score {
  double value = 0.0;
  bool flagged = false;
};

inline Score score_gc(std::size_t achieved, std::size_t total) {
  if (total == 0) return {0.0, true};
  return {static_cast<double>(achieved) / static_cast<double>(total), false};
}

// Achieved uniqueness mass over the goal's total uniqueness mass.
inline Score score_uniq(std::span<const Landmark> achieved, const LandmarkSet& total,
                        const std::map<Landmark, double>& uniqueness) {
  double num = 0.0, den = 0.0;
  for (const auto& l : achieved) num += uniqueness.at(l);
  for (const auto& l : total.landmarks) den += uniqueness.at(l);
  if (den <= 0.0) return {0.0, true};
  return {std::min(1.0, num / den), false};
}

// Goals whose score lies within theta percentage points of the best score.
inline std::vector<std::size_t> theta_filter(std::span<const double> scores, int theta) {
  std::vector<std::size_t> out;
  if (scores.empty()) return out;
  const double best = *std::max_element(scores.begin(), scores.end());
  const double floor = best - static_cast<double>(theta) / 100.0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] >= floor - 1e-9) out.push_back(i);
  return out;
}

struct Extraction {
  std::optional<LandmarkSet> landmarks;  // empty when the hypothesis is unreachable
  std::string diagnostic;
};

// Per-problem recognizer that extracts each hypothesis' landmarks once per
// extractor and reuses them across heuristics and thresholds.
class Recognizer {
 public:
  explicit Recognizer(const RecognitionProblem& problem, ExtractOptions options = {})
      : problem_(problem), options_(options) {}

  struct Cached {
    std::vector<Extraction> per_goal;
    double seconds = 0.0;
  };

  const Cached& landmarks(Extractor e) {
    auto it = cache_.find(e);
    if (it != cache_.end()) return it->second;
    const auto start = std::chrono::steady_clock::now();
    Cached c;
    for (std::size_t g = 0; g < problem_.hypotheses.size(); ++g) {
      Extraction x;
      try {
        x.landmarks = extract(problem_.instance_for(g), e, options_);
      } catch (const UnsolvableInstanceError& err) {
        x.diagnostic = err.what();
      }
      c.per_goal.push_back(std::move(x));
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return cache_.emplace(e, std::move(c)).first->second;
  }

  RecognitionResult run(const RecognitionConfig& config) {
    if (problem_.hypotheses.empty()) throw Error("recognition problem has no goal hypotheses");
    if (config.theta < 0 || config.theta > 100) throw Error("theta must lie in [0, 100]");
    const Cached& lms = landmarks(config.extractor);
    const auto start = std::chrono::steady_clock::now();

    std::map<Landmark, double> uniqueness;
    if (config.heuristic == Heuristic::uniq) {
      std::vector<const LandmarkSet*> sets;
      for (const auto& x : lms.per_goal)
        if (x.landmarks) sets.push_back(&*x.landmarks);
      if (!sets.empty()) uniqueness = compute_uniqueness(sets);
    }

    RecognitionResult result;
    std::vector<double> values;
    for (std::size_t g = 0; g < lms.per_goal.size(); ++g) {
      const auto& x = lms.per_goal[g];
      GoalScore s;
      s.goal = g;
      if (!x.landmarks) {
        s.flagged = true;
        s.diagnostic = x.diagnostic;
      } else {
        s.total = *x.landmarks;
        s.achieved = achieved_landmarks(problem_.init, problem_.observations, s.total);
        Score sc = config.heuristic == Heuristic::gc ? score_gc(s.achieved.size(), s.total.size())
                                                     : score_uniq(s.achieved, s.total, uniqueness);
        s.score = sc.value;
        if (sc.flagged) {
          s.flagged = true;
          s.diagnostic = "empty landmark set";
        }
      }
      values.push_back(s.score);
      result.scores.push_back(std::move(s));
    }
    result.recognized = theta_filter(values, config.theta);
    result.elapsed =
        lms.seconds + std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }

 private:
  const RecognitionProblem& problem_;
  ExtractOptions options_;
  std::map<Extractor, Cached> cache_;
};

inline RecognitionResult recognize(const RecognitionProblem& problem, const RecognitionConfig& config) {
  Recognizer r(problem);
  return r.run(config);
}

// One line per hypothesis: index, score, achieved/total, recognized flag.
inline std::string format_result(const RecognitionResult& result) {
  std::string out = "goal score achieved total recognized\n";
  char buf[128];
  for (const auto& s : result.scores) {
    std::snprintf(buf, sizeof buf, "%zu %.6f %zu %zu %d\n", s.goal, s.score, s.achieved.size(), s.total.size(),
                  result.is_recognized(s.goal) ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace lmrecog
