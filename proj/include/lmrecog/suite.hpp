#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "lmrecog/bundle.hpp"
#include "lmrecog/log.hpp"
#include "lmrecog/recognize.hpp"

namespace lmrecog {

struct MetricsRecord {
  std::string bundle;
  std::string domain;
  int observability = 100;
  bool noisy = false;
  Extractor extractor = Extractor::exhaust;
  Heuristic heuristic = Heuristic::gc;
  int theta = 0;
  double time_s = 0.0;
  bool correct = false;
  std::size_t spread = 0;
  double landmarks_mean = 0.0;       // |L| per hypothesis, all landmark kinds
  double fact_landmarks_mean = 0.0;  // single-fact landmarks only

  bool operator==(const MetricsRecord&) const = default;
};

struct SuiteRow {
  std::string domain;
  int observability = 100;
  bool noisy = false;
  Extractor extractor = Extractor::exhaust;
  Heuristic heuristic = Heuristic::gc;
  int theta = 0;
  std::size_t bundles = 0;
  double time_s = 0.0;
  double accuracy = 0.0;  // percent
  double spread = 0.0;
  double ratio = 0.0;  // accuracy / spread
  double extraction_pct = 0.0;

  bool operator==(const SuiteRow&) const = default;
};

struct SuiteFailure {
  std::string bundle;
  std::string message;
};

struct SuiteResult {
  std::vector<MetricsRecord> records;
  std::vector<SuiteRow> rows;
  std::vector<SuiteFailure> failures;
};

struct SuiteOptions {
  std::vector<Extractor> extractors{std::begin(kAllExtractors), std::end(kAllExtractors)};
  std::vector<Heuristic> heuristics{Heuristic::gc, Heuristic::uniq};
  std::vector<int> thetas{0, 10};
  unsigned jobs = 1;
  // Report every time as zero, for byte-comparable outputs.
  bool record_time = true;
  GroundOptions ground;
  ExtractOptions extract;
};

// Values stored in records are exactly what `%.6f` prints, so aggregation
// over parsed CSV reproduces in-memory aggregation bit for bit.
inline double round6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return std::strtod(buf, nullptr);
}

inline std::vector<MetricsRecord> evaluate_bundle(const LoadedBundle& bundle, const SuiteOptions& options) {
  Recognizer rec(bundle.problem, options.extract);
  std::vector<MetricsRecord> out;
  for (auto e : options.extractors) {
    const auto& lms = rec.landmarks(e);
    double total = 0.0, facts = 0.0;
    for (const auto& x : lms.per_goal)
      if (x.landmarks) {
        total += static_cast<double>(x.landmarks->size());
        facts += static_cast<double>(x.landmarks->num_fact_landmarks());
      }
    const double n = static_cast<double>(lms.per_goal.size());
    for (auto h : options.heuristics)
      for (int theta : options.thetas) {
        auto result = rec.run({h, theta, e});
        MetricsRecord r;
        r.bundle = bundle.meta.id;
        r.domain = bundle.meta.domain;
        r.observability = bundle.meta.observability;
        r.noisy = bundle.meta.noisy;
        r.extractor = e;
        r.heuristic = h;
        r.theta = theta;
        r.time_s = options.record_time ? round6(result.elapsed) : 0.0;
        r.correct = result.is_recognized(bundle.problem.real_goal);
        r.spread = result.recognized.size();
        r.landmarks_mean = round6(total / n);
        r.fact_landmarks_mean = round6(facts / n);
        out.push_back(std::move(r));
      }
  }
  return out;
}

namespace detail {

inline int extractor_rank(Extractor e) { return static_cast<int>(e); }

inline auto record_key(const MetricsRecord& r) {
  return std::make_tuple(r.domain, r.observability, r.noisy, extractor_rank(r.extractor), static_cast<int>(r.heuristic),
                         r.theta, r.bundle);
}

}  // namespace detail

// Groups by (domain, observability, noise, extractor, heuristic, theta).
// Sums run in bundle-id order so the result does not depend on how records
// were produced. Extraction percentage compares single-fact landmark counts
// against the exhaustive rows of the same group.
inline std::vector<SuiteRow> aggregate(std::vector<MetricsRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const MetricsRecord& a, const MetricsRecord& b) { return detail::record_key(a) < detail::record_key(b); });
  std::vector<SuiteRow> rows;
  std::vector<double> fact_sums;
  for (std::size_t i = 0; i < records.size();) {
    const auto& r = records[i];
    SuiteRow row{r.domain, r.observability, r.noisy, r.extractor, r.heuristic, r.theta};
    double time = 0.0, correct = 0.0, spread = 0.0, facts = 0.0;
    std::size_t j = i;
    for (; j < records.size(); ++j) {
      const auto& s = records[j];
      if (std::tie(s.domain, s.observability, s.noisy, s.extractor, s.heuristic, s.theta) !=
          std::tie(r.domain, r.observability, r.noisy, r.extractor, r.heuristic, r.theta))
        break;
      time += s.time_s;
      correct += s.correct ? 1.0 : 0.0;
      spread += static_cast<double>(s.spread);
      facts += s.fact_landmarks_mean;
    }
    const double n = static_cast<double>(j - i);
    row.bundles = j - i;
    row.time_s = time / n;
    row.accuracy = 100.0 * correct / n;
    row.spread = spread / n;
    row.ratio = row.spread > 0.0 ? row.accuracy / row.spread : 0.0;
    rows.push_back(row);
    fact_sums.push_back(facts);
    i = j;
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].extractor == Extractor::exhaust) {
      rows[k].extraction_pct = 100.0;
      continue;
    }
    for (std::size_t b = 0; b < rows.size(); ++b) {
      const auto& x = rows[b];
      if (x.extractor == Extractor::exhaust && x.domain == rows[k].domain &&
          x.observability == rows[k].observability && x.noisy == rows[k].noisy && x.heuristic == rows[k].heuristic &&
          x.theta == rows[k].theta) {
        rows[k].extraction_pct = fact_sums[b] > 0.0 ? 100.0 * fact_sums[k] / fact_sums[b] : 0.0;
        break;
      }
    }
  }
  return rows;
}

// Directories under `root` (recursively) that contain a hyps.dat file,
// sorted by path.
inline std::vector<std::filesystem::path> discover_bundles(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw BundleError("suite root " + root.string() + " is not a directory");
  std::vector<fs::path> out;
  if (fs::exists(root / "hyps.dat")) out.push_back(root);
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_directory() && fs::exists(e.path() / "hyps.dat")) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

inline SuiteResult run_suite(const std::vector<std::filesystem::path>& bundles, SuiteOptions options) {
  // The extraction percentage needs the exhaustive baseline in every group.
  if (std::find(options.extractors.begin(), options.extractors.end(), Extractor::exhaust) == options.extractors.end())
    options.extractors.insert(options.extractors.begin(), Extractor::exhaust);

  struct Slot {
    std::vector<MetricsRecord> records;
    std::optional<SuiteFailure> failure;
  };
  std::vector<Slot> slots(bundles.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < bundles.size(); i = next++) {
      try {
        auto b = load_bundle(bundles[i], options.ground);
        log::debug("bundle " + b.meta.id + ": " + std::to_string(b.problem.hypotheses.size()) + " hypotheses, " +
                   std::to_string(b.problem.observations.size()) + " observations");
        slots[i].records = evaluate_bundle(b, options);
      } catch (const std::exception& e) {
        slots[i].failure = SuiteFailure{bundles[i].string(), e.what()};
      }
    }
  };
  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }

  SuiteResult result;
  for (auto& s : slots) {
    if (s.failure) {
      log::error("bundle failed: " + s.failure->bundle + ": " + s.failure->message);
      result.failures.push_back(std::move(*s.failure));
    }
    std::move(s.records.begin(), s.records.end(), std::back_inserter(result.records));
  }
  std::sort(result.records.begin(), result.records.end(), [](const MetricsRecord& a, const MetricsRecord& b) {
    return std::make_tuple(a.bundle, a.domain, a.observability, a.noisy, detail::extractor_rank(a.extractor),
                           static_cast<int>(a.heuristic), a.theta) <
           std::make_tuple(b.bundle, b.domain, b.observability, b.noisy, detail::extractor_rank(b.extractor),
                           static_cast<int>(b.heuristic), b.theta);
  });
  result.rows = aggregate(result.records);
  return result;
}

inline constexpr std::string_view kRecordsHeader =
    "bundle,domain,observability,noise,extractor,heuristic,theta,time_s,correct,spread,landmarks_mean,"
    "fact_landmarks_mean";
inline constexpr std::string_view kSummaryHeader =
    "domain,observability,noise,extractor,heuristic,theta,bundles,time_s,accuracy,spread,ratio,extraction_pct";

inline std::string records_csv(const std::vector<MetricsRecord>& records) {
  std::string out(kRecordsHeader);
  out += '\n';
  char buf[512];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%s,%s,%d,%d,%s,%s,%d,%.6f,%d,%zu,%.6f,%.6f\n", r.bundle.c_str(), r.domain.c_str(),
                  r.observability, r.noisy ? 1 : 0, std::string(to_string(r.extractor)).c_str(),
                  std::string(to_string(r.heuristic)).c_str(), r.theta, r.time_s, r.correct ? 1 : 0, r.spread,
                  r.landmarks_mean, r.fact_landmarks_mean);
    out += buf;
  }
  return out;
}

inline std::string summary_csv(const std::vector<SuiteRow>& rows) {
  std::string out(kSummaryHeader);
  out += '\n';
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%s,%s,%d,%zu,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.domain.c_str(),
                  r.observability, r.noisy ? 1 : 0, std::string(to_string(r.extractor)).c_str(),
                  std::string(to_string(r.heuristic)).c_str(), r.theta, r.bundles, r.time_s, r.accuracy, r.spread,
                  r.ratio, r.extraction_pct);
    out += buf;
  }
  return out;
}

inline std::vector<MetricsRecord> parse_records_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kRecordsHeader) throw Error("records.csv: unexpected header");
  std::vector<MetricsRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 12) throw Error("records.csv:" + std::to_string(lineno) + ": expected 12 fields");
    MetricsRecord r;
    r.bundle = f[0];
    r.domain = f[1];
    r.observability = std::stoi(f[2]);
    r.noisy = f[3] == "1";
    auto e = parse_extractor(f[4]);
    auto h = parse_heuristic(f[5]);
    if (!e || !h) throw Error("records.csv:" + std::to_string(lineno) + ": unknown extractor or heuristic");
    r.extractor = *e;
    r.heuristic = *h;
    r.theta = std::stoi(f[6]);
    r.time_s = std::strtod(f[7].c_str(), nullptr);
    r.correct = f[8] == "1";
    r.spread = static_cast<std::size_t>(std::stoul(f[9]));
    r.landmarks_mean = std::strtod(f[10].c_str(), nullptr);
    r.fact_landmarks_mean = std::strtod(f[11].c_str(), nullptr);
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

}  // namespace lmrecog
