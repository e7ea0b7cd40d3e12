#pragma once

// Recognition problem bundles: one directory holding domain.pddl,
// template.pddl, hyps.dat, obs.dat and real_hyp.dat.
//
// The bundle directory name carries its metadata:
//   <domain>_<problem...>_<observability>[_noisy]
// e.g. `blocks-world_p03_30` or `logistics_p01_75_noisy`. A path component
// containing "noisy" also marks the bundle as noisy.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lmrecog/grounding.hpp"
#include "lmrecog/pddl.hpp"
#include "lmrecog/recognize.hpp"

namespace lmrecog {

inline constexpr std::string_view kHypothesisPlaceholder = "<hypothesis>";

struct BundleMeta {
  std::string id;
  std::string domain;
  int observability = 100;
  bool noisy = false;
};

struct LoadedBundle {
  BundleMeta meta;
  RecognitionProblem problem;
  std::vector<std::string> hypothesis_lines;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw BundleError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::vector<std::string> nonempty_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    auto t = trim(line);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

// `(on a b),(clear c)` -> atoms
inline std::vector<pddl::Atom> parse_atom_list(const std::string& line, const std::string& file) {
  std::string wrapped = "(" + line + ")";
  std::replace(wrapped.begin(), wrapped.end(), ',', ' ');
  pddl::SExpr e = pddl::read_sexpr(wrapped, file);
  std::vector<pddl::Atom> out;
  for (const auto& item : e.items) {
    if (!item.is_list || item.items.empty() || item.items[0].is_list)
      throw ParseError(file, item.line, item.column, "expected a ground atom");
    pddl::Atom a{item.items[0].atom, {}};
    for (std::size_t i = 1; i < item.items.size(); ++i) {
      if (item.items[i].is_list) throw ParseError(file, item.line, item.column, "nested term in ground atom");
      a.terms.push_back(item.items[i].atom);
    }
    out.push_back(std::move(a));
  }
  if (out.empty()) throw BundleError(file + ": empty hypothesis");
  return out;
}

inline std::string atoms_to_pddl(const std::vector<pddl::Atom>& atoms) {
  std::string out;
  for (const auto& a : atoms) {
    out += "(" + a.predicate;
    for (const auto& t : a.terms) out += " " + t;
    out += ") ";
  }
  return out;
}

inline bool allowed_level(int level, bool noisy) {
  static constexpr int kMissing[] = {10, 30, 50, 70, 100};
  static constexpr int kNoisy[] = {25, 50, 75, 100};
  if (noisy) return std::find(std::begin(kNoisy), std::end(kNoisy), level) != std::end(kNoisy);
  return std::find(std::begin(kMissing), std::end(kMissing), level) != std::end(kMissing);
}

}  // namespace detail

inline BundleMeta parse_bundle_meta(const std::filesystem::path& dir) {
  auto norm = dir.lexically_normal();
  std::string name = norm.filename().string();
  if (name.empty()) name = norm.parent_path().filename().string();
  BundleMeta m;
  m.id = name;
  std::vector<std::string> tokens;
  std::stringstream ss(name);
  for (std::string t; std::getline(ss, t, '_');)
    if (!t.empty()) tokens.push_back(t);
  if (tokens.size() < 2) throw BundleError("bundle name " + name + " does not follow <domain>_..._<observability>");
  m.domain = tokens.front();
  for (const auto& part : norm)
    if (detail::lower(part.string()).find("noisy") != std::string::npos) m.noisy = true;
  bool found = false;
  for (auto it = tokens.rbegin(); it != tokens.rend() - 1; ++it) {
    const auto& t = *it;
    if (t == "full") {
      m.observability = 100;
      found = true;
      break;
    }
    if (!t.empty() && std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })) {
      m.observability = std::stoi(t);
      found = true;
      break;
    }
  }
  if (!found) throw BundleError("bundle name " + name + " carries no observability level");
  if (!detail::allowed_level(m.observability, m.noisy))
    throw BundleError("bundle " + name + ": observability " + std::to_string(m.observability) +
                      (m.noisy ? " is not a noisy level (25/50/75/100)" : " is not a level (10/30/50/70/100)"));
  return m;
}

inline LoadedBundle load_bundle(const std::filesystem::path& dir, const GroundOptions& options = {}) {
  namespace fs = std::filesystem;
  LoadedBundle out;
  out.meta = parse_bundle_meta(dir);

  const auto domain_path = dir / "domain.pddl";
  const auto template_path = dir / "template.pddl";
  const auto hyps_path = dir / "hyps.dat";
  const auto obs_path = dir / "obs.dat";
  const auto real_path = dir / "real_hyp.dat";

  auto domain = pddl::parse_domain(read_file(domain_path), domain_path.string());

  out.hypothesis_lines = detail::nonempty_lines(read_file(hyps_path));
  if (out.hypothesis_lines.empty()) throw BundleError(hyps_path.string() + ": no goal hypotheses");
  std::vector<std::vector<pddl::Atom>> hyps;
  std::vector<pddl::Atom> all_atoms;
  for (const auto& line : out.hypothesis_lines) {
    hyps.push_back(detail::parse_atom_list(line, hyps_path.string()));
    all_atoms.insert(all_atoms.end(), hyps.back().begin(), hyps.back().end());
  }

  // Every hypothesis atom joins the goal so that grounding places it in the
  // fact universe; each hypothesis then selects its own subset.
  std::string tmpl = read_file(template_path);
  std::string lowered = detail::lower(tmpl);
  auto pos = lowered.find(kHypothesisPlaceholder);
  if (pos != std::string::npos) tmpl.replace(pos, kHypothesisPlaceholder.size(), detail::atoms_to_pddl(all_atoms));
  auto problem = pddl::parse_problem(tmpl, domain, template_path.string());
  if (pos == std::string::npos) problem.goal.insert(problem.goal.end(), all_atoms.begin(), all_atoms.end());

  PlanningInstance inst = ground(domain, problem, options);
  out.problem.task = inst.task;
  out.problem.init = inst.init;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    FactSet g = inst.task->empty_set();
    for (const auto& a : hyps[i]) {
      auto id = inst.task->find_fact(Fact{a.predicate, a.terms});
      if (!id) throw BundleError(hyps_path.string() + ":" + std::to_string(i + 1) + ": atom outside the fact universe");
      g.set(*id);
    }
    out.problem.hypotheses.push_back(std::move(g));
  }

  auto real_lines = detail::nonempty_lines(read_file(real_path));
  if (real_lines.size() != 1) throw BundleError(real_path.string() + ": expected exactly one goal line");
  auto same_atoms = [](std::vector<pddl::Atom> a, std::vector<pddl::Atom> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return a == b;
  };
  auto real_atoms = detail::parse_atom_list(real_lines.front(), real_path.string());
  bool matched = false;
  for (std::size_t i = 0; i < hyps.size() && !matched; ++i)
    if (same_atoms(hyps[i], real_atoms)) {
      out.problem.real_goal = i;
      matched = true;
    }
  if (!matched) throw BundleError(real_path.string() + ": real goal is not among the hypotheses");

  if (fs::exists(obs_path)) {
    std::size_t lineno = 0;
    for (const auto& line : detail::nonempty_lines(read_file(obs_path))) {
      ++lineno;
      pddl::SExpr e = pddl::read_sexpr(line, obs_path.string());
      if (!e.is_list || e.items.empty())
        throw BundleError(obs_path.string() + ":" + std::to_string(lineno) + ": expected (action args...)");
      std::vector<std::string> parts;
      for (const auto& it : e.items) {
        if (it.is_list) throw BundleError(obs_path.string() + ":" + std::to_string(lineno) + ": nested term");
        parts.push_back(it.atom);
      }
      std::string sig = "(" + parts[0];
      for (std::size_t i = 1; i < parts.size(); ++i) sig += " " + parts[i];
      sig += ")";
      if (auto id = inst.task->find_action(sig)) {
        out.problem.observations.push_back(inst.task->action(*id));
        continue;
      }
      std::vector<std::string> args(parts.begin() + 1, parts.end());
      auto act = instantiate(domain, problem, *inst.task, parts[0], args);
      if (!act)
        throw BundleError(obs_path.string() + ":" + std::to_string(lineno) + ": " + sig + " is not a ground action");
      out.problem.observations.push_back(std::move(*act));
    }
  } else {
    throw BundleError("cannot read " + obs_path.string());
  }
  return out;
}

}  // namespace lmrecog
