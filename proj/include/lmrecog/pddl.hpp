#pragma once

// Typed STRIPS subset of PDDL: :strips, :typing, :equality.

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lmrecog/errors.hpp"

namespace lmrecog::pddl {

inline constexpr std::string_view kRootType = "object";

struct SExpr {
  bool is_list = false;
  std::string atom;  // lower-cased symbol when !is_list
  std::vector<SExpr> items;
  std::size_t line = 0;
  std::size_t column = 0;

  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
  // `(head ...)` where head is the symbol s.
  bool has_head(std::string_view s) const { return is_list && !items.empty() && items[0].is_atom(s); }
};

namespace detail {

class Reader {
 public:
  Reader(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  SExpr read_document() {
    skip_space();
    if (pos_ >= text_.size()) fail("empty input");
    SExpr root = read();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected trailing input");
    return root;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(file_, line_, col_, msg); }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    SExpr node;
    node.line = line_;
    node.column = col_;
    char c = text_[pos_];
    if (c == '(') {
      node.is_list = true;
      advance();
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError(file_, node.line, node.column, "unbalanced '('");
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        node.items.push_back(read());
      }
      return node;
    }
    if (c == ')') fail("unexpected ')'");
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      node.atom += static_cast<char>(std::tolower(static_cast<unsigned char>(d)));
      advance();
    }
    return node;
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace detail

inline SExpr read_sexpr(std::string_view text, const std::string& file = "<input>") {
  return detail::Reader(text, file).read_document();
}

struct TypedName {
  std::string name;
  std::string type{kRootType};
  bool operator==(const TypedName&) const = default;
};

// Predicate applied to terms; terms starting with '?' are variables.
struct Atom {
  std::string predicate;
  std::vector<std::string> terms;
  bool operator==(const Atom&) const = default;
  auto operator<=>(const Atom&) const = default;
};

struct EqualityConstraint {
  std::string lhs;
  std::string rhs;
  bool negated = false;
  bool operator==(const EqualityConstraint&) const = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;
  bool operator==(const PredicateDecl&) const = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<Atom> pre;
  std::vector<EqualityConstraint> equalities;
  std::vector<Atom> add;
  std::vector<Atom> del;
  bool operator==(const ActionSchema&) const = default;
};

struct DomainAst {
  std::string name;
  std::vector<std::string> requirements;
  // type -> supertype, declaration order preserved.
  std::vector<std::pair<std::string, std::string>> types;
  std::vector<TypedName> constants;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> actions;

  bool operator==(const DomainAst&) const = default;

  const PredicateDecl* find_predicate(std::string_view n) const {
    for (const auto& p : predicates)
      if (p.name == n) return &p;
    return nullptr;
  }
  const ActionSchema* find_action(std::string_view n) const {
    for (const auto& a : actions)
      if (a.name == n) return &a;
    return nullptr;
  }
  bool has_type(std::string_view t) const {
    if (t == kRootType) return true;
    return std::any_of(types.begin(), types.end(), [&](const auto& p) { return p.first == t; });
  }
  // Reflexive-transitive subtype test.
  bool is_subtype(std::string t, std::string_view ancestor) const {
    for (std::size_t guard = 0; guard <= types.size() + 1; ++guard) {
      if (t == ancestor || ancestor == kRootType) return true;
      auto it = std::find_if(types.begin(), types.end(), [&](const auto& p) { return p.first == t; });
      if (it == types.end()) return false;
      t = it->second;
    }
    return false;
  }
};

struct ProblemAst {
  std::string name;
  std::string domain;
  std::vector<TypedName> objects;
  std::vector<Atom> init;
  std::vector<Atom> goal;
  bool operator==(const ProblemAst&) const = default;
};

namespace detail {

inline const std::set<std::string, std::less<>>& supported_requirements() {
  static const std::set<std::string, std::less<>> kSupported{":strips", ":typing", ":equality"};
  return kSupported;
}

class AstBuilder {
 public:
  explicit AstBuilder(std::string file) : file_(std::move(file)) {}

  [[noreturn]] void fail(const SExpr& at, const std::string& msg) const {
    throw ParseError(file_, at.line, at.column, msg);
  }
  [[noreturn]] void unsupported(const SExpr& at, const std::string& requirement) const {
    throw UnsupportedFeatureError(file_, at.line, at.column, "unsupported feature: requirement " + requirement);
  }

  const std::string& symbol(const SExpr& e, const char* what) const {
    if (e.is_list) fail(e, std::string("expected ") + what);
    return e.atom;
  }
  const SExpr& list(const SExpr& e, const char* what) const {
    if (!e.is_list) fail(e, std::string("expected ") + what);
    return e;
  }

  // `a b - t c` ; untyped tail defaults to the root type.
  std::vector<TypedName> typed_list(const std::vector<SExpr>& items, std::size_t from) const {
    std::vector<TypedName> out;
    std::vector<std::string> pending;
    for (std::size_t i = from; i < items.size(); ++i) {
      const SExpr& e = items[i];
      if (e.is_atom("-")) {
        if (i + 1 >= items.size()) fail(e, "missing type after '-'");
        const SExpr& t = items[i + 1];
        if (t.has_head("either")) unsupported(t, ":typing (either types)");
        const auto& type = symbol(t, "type name");
        if (pending.empty()) fail(e, "'-' without preceding names");
        for (auto& n : pending) out.push_back({std::move(n), type});
        pending.clear();
        ++i;
      } else {
        pending.push_back(symbol(e, "name"));
      }
    }
    for (auto& n : pending) out.push_back({std::move(n), std::string(kRootType)});
    return out;
  }

  Atom atom(const SExpr& e) const {
    const auto& l = list(e, "atom");
    if (l.items.empty()) fail(e, "empty atom");
    Atom a;
    a.predicate = symbol(l.items[0], "predicate name");
    for (std::size_t i = 1; i < l.items.size(); ++i) a.terms.push_back(symbol(l.items[i], "term"));
    return a;
  }

  void precondition(const SExpr& e, ActionSchema& out) const {
    if (!e.is_list) fail(e, "expected precondition formula");
    if (e.items.empty()) return;  // `()` is the empty conjunction
    if (e.has_head("and")) {
      for (std::size_t i = 1; i < e.items.size(); ++i) precondition(e.items[i], out);
      return;
    }
    if (e.has_head("=")) {
      if (e.items.size() != 3) fail(e, "'=' takes two terms");
      out.equalities.push_back({symbol(e.items[1], "term"), symbol(e.items[2], "term"), false});
      return;
    }
    if (e.has_head("not")) {
      if (e.items.size() != 2) fail(e, "'not' takes one formula");
      const SExpr& inner = e.items[1];
      if (inner.has_head("=")) {
        if (inner.items.size() != 3) fail(inner, "'=' takes two terms");
        out.equalities.push_back({symbol(inner.items[1], "term"), symbol(inner.items[2], "term"), true});
        return;
      }
      unsupported(e, ":negative-preconditions");
    }
    if (e.has_head("or") || e.has_head("imply")) unsupported(e, ":disjunctive-preconditions");
    if (e.has_head("forall") || e.has_head("exists")) unsupported(e, ":quantified-preconditions");
    if (e.has_head("preference")) unsupported(e, ":preferences");
    if (!e.items[0].is_list && (e.items[0].atom == "<" || e.items[0].atom == ">" || e.items[0].atom == "<=" ||
                                e.items[0].atom == ">="))
      unsupported(e, ":numeric-fluents");
    out.pre.push_back(atom(e));
  }

  void effect(const SExpr& e, ActionSchema& out) const {
    if (!e.is_list) fail(e, "expected effect formula");
    if (e.items.empty()) return;
    if (e.has_head("and")) {
      for (std::size_t i = 1; i < e.items.size(); ++i) effect(e.items[i], out);
      return;
    }
    if (e.has_head("not")) {
      if (e.items.size() != 2) fail(e, "'not' takes one atom");
      out.del.push_back(atom(e.items[1]));
      return;
    }
    if (e.has_head("when") || e.has_head("forall")) unsupported(e, ":conditional-effects");
    if (e.has_head("increase") || e.has_head("decrease") || e.has_head("assign") || e.has_head("scale-up") ||
        e.has_head("scale-down"))
      unsupported(e, ":numeric-fluents");
    out.add.push_back(atom(e));
  }

  ActionSchema action(const SExpr& e) const {
    if (e.items.size() < 2) fail(e, "action without a name");
    ActionSchema a;
    a.name = symbol(e.items[1], "action name");
    for (std::size_t i = 2; i < e.items.size(); ++i) {
      const SExpr& key = e.items[i];
      const auto& k = symbol(key, "action keyword");
      if (i + 1 >= e.items.size()) fail(key, "missing value for " + k);
      const SExpr& val = e.items[++i];
      if (k == ":parameters") {
        a.params = typed_list(list(val, "parameter list").items, 0);
      } else if (k == ":precondition") {
        precondition(val, a);
      } else if (k == ":effect") {
        effect(val, a);
      } else {
        fail(key, "unknown action keyword " + k);
      }
    }
    return a;
  }

  std::string file_;
};

inline void check_atom(const AstBuilder& b, const SExpr& where, const DomainAst& d, const Atom& a) {
  const PredicateDecl* p = d.find_predicate(a.predicate);
  if (!p) b.fail(where, "undeclared predicate " + a.predicate);
  if (p->params.size() != a.terms.size())
    b.fail(where, "arity mismatch for " + a.predicate + ": expected " + std::to_string(p->params.size()) +
                      ", got " + std::to_string(a.terms.size()));
}

}  // namespace detail

inline DomainAst parse_domain(std::string_view text, const std::string& file = "<domain>") {
  SExpr root = read_sexpr(text, file);
  detail::AstBuilder b(file);
  if (!root.has_head("define")) b.fail(root, "expected (define ...)");
  DomainAst d;
  // Track where schemas came from so validation errors point at them.
  std::vector<const SExpr*> action_nodes;
  bool saw_name = false;
  for (std::size_t i = 1; i < root.items.size(); ++i) {
    const SExpr& sec = b.list(root.items[i], "domain section");
    if (sec.items.empty()) b.fail(sec, "empty section");
    const auto& head = b.symbol(sec.items[0], "section keyword");
    if (head == "domain") {
      if (sec.items.size() != 2) b.fail(sec, "expected (domain <name>)");
      d.name = b.symbol(sec.items[1], "domain name");
      saw_name = true;
    } else if (head == ":requirements") {
      for (std::size_t j = 1; j < sec.items.size(); ++j) {
        const auto& r = b.symbol(sec.items[j], "requirement");
        if (!detail::supported_requirements().contains(r)) b.unsupported(sec.items[j], r);
        d.requirements.push_back(r);
      }
    } else if (head == ":types") {
      for (auto& t : b.typed_list(sec.items, 1))
        if (t.name != kRootType) d.types.emplace_back(t.name, t.type);
    } else if (head == ":constants") {
      auto cs = b.typed_list(sec.items, 1);
      d.constants.insert(d.constants.end(), cs.begin(), cs.end());
    } else if (head == ":predicates") {
      for (std::size_t j = 1; j < sec.items.size(); ++j) {
        const SExpr& p = b.list(sec.items[j], "predicate declaration");
        if (p.items.empty()) b.fail(p, "empty predicate declaration");
        PredicateDecl decl{b.symbol(p.items[0], "predicate name"), b.typed_list(p.items, 1)};
        if (d.find_predicate(decl.name)) b.fail(p, "duplicate predicate " + decl.name);
        d.predicates.push_back(std::move(decl));
      }
    } else if (head == ":action") {
      d.actions.push_back(b.action(sec));
      action_nodes.push_back(&sec);
    } else if (head == ":functions") {
      b.unsupported(sec, ":numeric-fluents");
    } else if (head == ":derived") {
      b.unsupported(sec, ":derived-predicates");
    } else if (head == ":durative-action") {
      b.unsupported(sec, ":durative-actions");
    } else if (head == ":constraints") {
      b.unsupported(sec, ":constraints");
    } else {
      b.fail(sec, "unknown domain section " + head);
    }
  }
  if (!saw_name) b.fail(root, "missing (domain <name>)");

  // Supertypes used without their own declaration hang off the root type.
  for (std::size_t i = 0; i < d.types.size(); ++i) {
    std::string super = d.types[i].second;
    if (!d.has_type(super)) d.types.emplace_back(std::move(super), std::string(kRootType));
  }
  auto check_type = [&](const SExpr& where, const std::string& t) {
    if (!d.has_type(t)) b.fail(where, "undeclared type " + t);
  };
  for (const auto& c : d.constants) check_type(root, c.type);
  for (const auto& p : d.predicates)
    for (const auto& param : p.params) check_type(root, param.type);

  for (std::size_t i = 0; i < d.actions.size(); ++i) {
    const auto& a = d.actions[i];
    const SExpr& where = *action_nodes[i];
    std::set<std::string> vars;
    for (const auto& p : a.params) {
      if (p.name.empty() || p.name[0] != '?') b.fail(where, "parameter " + p.name + " is not a variable");
      check_type(where, p.type);
      vars.insert(p.name);
    }
    auto check_term = [&](const std::string& t) {
      if (t[0] == '?') {
        if (!vars.contains(t)) b.fail(where, "unbound variable " + t + " in action " + a.name);
      } else if (std::none_of(d.constants.begin(), d.constants.end(), [&](const auto& c) { return c.name == t; })) {
        b.fail(where, "undeclared constant " + t + " in action " + a.name);
      }
    };
    for (const auto* atoms : {&a.pre, &a.add, &a.del})
      for (const auto& at : *atoms) {
        detail::check_atom(b, where, d, at);
        for (const auto& t : at.terms) check_term(t);
      }
    for (const auto& eq : a.equalities) {
      check_term(eq.lhs);
      check_term(eq.rhs);
    }
  }
  return d;
}

inline ProblemAst parse_problem(std::string_view text, const DomainAst& domain,
                                const std::string& file = "<problem>") {
  SExpr root = read_sexpr(text, file);
  detail::AstBuilder b(file);
  if (!root.has_head("define")) b.fail(root, "expected (define ...)");
  ProblemAst p;
  const SExpr* goal_node = nullptr;
  const SExpr* init_node = nullptr;
  bool saw_domain = false;
  for (std::size_t i = 1; i < root.items.size(); ++i) {
    const SExpr& sec = b.list(root.items[i], "problem section");
    if (sec.items.empty()) b.fail(sec, "empty section");
    const auto& head = b.symbol(sec.items[0], "section keyword");
    if (head == "problem") {
      if (sec.items.size() != 2) b.fail(sec, "expected (problem <name>)");
      p.name = b.symbol(sec.items[1], "problem name");
    } else if (head == ":domain") {
      if (sec.items.size() != 2) b.fail(sec, "expected (:domain <name>)");
      p.domain = b.symbol(sec.items[1], "domain name");
      if (p.domain != domain.name)
        b.fail(sec.items[1], "problem is for domain " + p.domain + ", not " + domain.name);
      saw_domain = true;
    } else if (head == ":requirements") {
      for (std::size_t j = 1; j < sec.items.size(); ++j) {
        const auto& r = b.symbol(sec.items[j], "requirement");
        if (!detail::supported_requirements().contains(r)) b.unsupported(sec.items[j], r);
      }
    } else if (head == ":objects") {
      auto objs = b.typed_list(sec.items, 1);
      p.objects.insert(p.objects.end(), objs.begin(), objs.end());
    } else if (head == ":init") {
      init_node = &sec;
      for (std::size_t j = 1; j < sec.items.size(); ++j) {
        const SExpr& f = sec.items[j];
        if (f.has_head("=")) b.unsupported(f, ":numeric-fluents");
        if (f.has_head("not")) b.fail(f, "negative literals are not allowed in :init");
        p.init.push_back(b.atom(f));
      }
    } else if (head == ":goal") {
      if (sec.items.size() != 2) b.fail(sec, "expected (:goal <formula>)");
      goal_node = &sec;
      ActionSchema scratch;
      b.precondition(sec.items[1], scratch);
      if (!scratch.equalities.empty()) b.fail(sec, "equality atoms are not allowed in :goal");
      p.goal = std::move(scratch.pre);
    } else if (head == ":metric") {
      b.unsupported(sec, ":action-costs");
    } else {
      b.fail(sec, "unknown problem section " + head);
    }
  }
  if (!saw_domain) b.fail(root, "missing (:domain <name>)");
  if (!goal_node) b.fail(root, "missing (:goal ...)");
  if (p.goal.empty()) b.fail(*goal_node, "empty goal");

  std::set<std::string> names;
  for (const auto& c : domain.constants) names.insert(c.name);
  for (const auto& o : p.objects) {
    if (!domain.has_type(o.type)) b.fail(root, "object " + o.name + " has undeclared type " + o.type);
    names.insert(o.name);
  }
  auto check = [&](const SExpr& where, const Atom& a) {
    detail::check_atom(b, where, domain, a);
    for (const auto& t : a.terms) {
      if (t[0] == '?') b.fail(where, "variable " + t + " in ground atom");
      if (!names.contains(t)) b.fail(where, "undeclared object " + t);
    }
  };
  for (const auto& a : p.init) check(*init_node, a);
  for (const auto& a : p.goal) check(*goal_node, a);
  return p;
}

namespace detail {

inline void print_typed(std::ostream& os, const std::vector<TypedName>& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) os << ' ';
    os << xs[i].name << " - " << xs[i].type;
  }
}

inline void print_atom(std::ostream& os, const Atom& a, bool negated = false) {
  if (negated) os << "(not ";
  os << '(' << a.predicate;
  for (const auto& t : a.terms) os << ' ' << t;
  os << ')';
  if (negated) os << ')';
}

}  // namespace detail

inline std::string to_pddl(const DomainAst& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    os << "  (:requirements";
    for (const auto& r : d.requirements) os << ' ' << r;
    os << ")\n";
  }
  if (!d.types.empty()) {
    os << "  (:types";
    for (const auto& [t, s] : d.types) os << ' ' << t << " - " << s;
    os << ")\n";
  }
  if (!d.constants.empty()) {
    os << "  (:constants ";
    detail::print_typed(os, d.constants);
    os << ")\n";
  }
  os << "  (:predicates";
  for (const auto& p : d.predicates) {
    os << " (" << p.name;
    if (!p.params.empty()) os << ' ';
    detail::print_typed(os, p.params);
    os << ')';
  }
  os << ")\n";
  for (const auto& a : d.actions) {
    os << "  (:action " << a.name << "\n    :parameters (";
    detail::print_typed(os, a.params);
    os << ")\n    :precondition (and";
    for (const auto& p : a.pre) {
      os << ' ';
      detail::print_atom(os, p);
    }
    for (const auto& eq : a.equalities) {
      os << ' ' << (eq.negated ? "(not (= " : "(= ") << eq.lhs << ' ' << eq.rhs << (eq.negated ? "))" : ")");
    }
    os << ")\n    :effect (and";
    for (const auto& e : a.add) {
      os << ' ';
      detail::print_atom(os, e);
    }
    for (const auto& e : a.del) {
      os << ' ';
      detail::print_atom(os, e, true);
    }
    os << "))\n";
  }
  os << ")\n";
  return os.str();
}

inline std::string to_pddl(const ProblemAst& p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n  (:domain " << p.domain << ")\n  (:objects ";
  detail::print_typed(os, p.objects);
  os << ")\n  (:init";
  for (const auto& a : p.init) {
    os << ' ';
    detail::print_atom(os, a);
  }
  os << ")\n  (:goal (and";
  for (const auto& a : p.goal) {
    os << ' ';
    detail::print_atom(os, a);
  }
  os << ")))\n";
  return os.str();
}

}  // namespace lmrecog::pddl
