#pragma once
// Problem files: a line-oriented task DSL over polynomial data.  Parsing is
// validating (declaration before use, exactly one ideal, b >= 1) and printing
// the parsed form back is a fixpoint of parse.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "desing/error.hpp"
#include "desing/family.hpp"
#include "desing/poly.hpp"
#include "desing/poly_parse.hpp"
#include "desing/resolve.hpp"

namespace desing {

enum class TaskKind {
  Resolve,
  Principalize,
  Desingularize,
  Tau,
  Stratify,
  CheckAE,
  CheckTau,
  CheckThm23,
};

inline const char* task_name(TaskKind k) {
  switch (k) {
    case TaskKind::Resolve: return "resolve";
    case TaskKind::Principalize: return "principalize";
    case TaskKind::Desingularize: return "desingularize";
    case TaskKind::Tau: return "tau";
    case TaskKind::Stratify: return "stratify";
    case TaskKind::CheckAE: return "check-ae";
    case TaskKind::CheckTau: return "check-tau";
    case TaskKind::CheckThm23: return "check-thm23";
  }
  return "?";
}

struct TaskSpec {
  TaskKind kind = TaskKind::Resolve;
  std::vector<std::vector<Rat>> points;  // parenthesized tuples, file order

  bool operator==(const TaskSpec& o) const { return kind == o.kind && points == o.points; }
};

struct ProblemFile {
  std::vector<std::string> vars;
  std::vector<std::string> params;
  Context ctx;  // vars then params
  std::vector<std::pair<std::string, Poly>> divisors;
  std::vector<Poly> ideal;
  int b = 1;
  std::vector<TaskSpec> tasks;
};

inline bool operator==(const ProblemFile& a, const ProblemFile& b) {
  if (a.vars != b.vars || a.params != b.params || a.b != b.b || !(a.tasks == b.tasks))
    return false;
  if (a.divisors.size() != b.divisors.size() || a.ideal.size() != b.ideal.size()) return false;
  // polynomials live in per-file contexts; equal names make str() canonical
  for (size_t i = 0; i < a.divisors.size(); ++i)
    if (a.divisors[i].first != b.divisors[i].first ||
        a.divisors[i].second.str() != b.divisors[i].second.str())
      return false;
  for (size_t i = 0; i < a.ideal.size(); ++i)
    if (a.ideal[i].str() != b.ideal[i].str()) return false;
  return true;
}

namespace detail {

inline bool is_keyword(const std::string& s) {
  return s == "vars" || s == "params" || s == "divisor" || s == "ideal" || s == "b" ||
         s == "task";
}

inline bool known_task(const std::string& s, TaskKind* k) {
  static const std::pair<const char*, TaskKind> table[] = {
      {"resolve", TaskKind::Resolve},       {"principalize", TaskKind::Principalize},
      {"desingularize", TaskKind::Desingularize}, {"tau", TaskKind::Tau},
      {"stratify", TaskKind::Stratify},     {"check-ae", TaskKind::CheckAE},
      {"check-tau", TaskKind::CheckTau},    {"check-thm23", TaskKind::CheckThm23},
  };
  for (const auto& e : table)
    if (s == e.first) {
      *k = e.second;
      return true;
    }
  return false;
}

}  // namespace detail

inline ProblemFile parse_problem(const std::string& text) {
  ProblemFile p;
  Lexer lex(text);
  std::vector<std::string> names;  // vars ++ params ++ divisor names, for duplicates
  bool decls_closed = false;       // set once a polynomial has been parsed
  bool have_ideal = false, have_b = false;

  auto declare = [&](const std::string& id) {
    if (detail::is_keyword(id)) lex.error("reserved word '" + id + "'");
    if (std::find(names.begin(), names.end(), id) != names.end())
      lex.error("duplicate declaration of '" + id + "'");
    names.push_back(id);
  };
  auto context_now = [&]() {
    if (p.vars.empty() && p.params.empty()) lex.error("no variables declared");
    if (!p.ctx) {
      std::vector<std::string> all = p.vars;
      all.insert(all.end(), p.params.begin(), p.params.end());
      p.ctx = make_context(std::move(all));
    }
    decls_closed = true;
    return p.ctx;
  };
  auto expect_punct = [&](const char* s) {
    if (!(lex.peek().kind == Token::Punct && lex.peek().text == s))
      lex.error(std::string("expected '") + s + "'");
    lex.next();
  };
  auto parse_group = [&]() {
    expect_punct("(");
    std::vector<Rat> tup{parse_rat_token(lex)};
    while (lex.peek().kind == Token::Punct && lex.peek().text == ",") {
      lex.next();
      tup.push_back(parse_rat_token(lex));
    }
    expect_punct(")");
    return tup;
  };

  while (lex.peek().kind != Token::End) {
    if (lex.peek().kind != Token::Ident) lex.error("expected statement keyword");
    std::string kw = lex.next().text;
    if (kw == "vars" || kw == "params") {
      if (decls_closed)
        lex.error("declarations must precede divisor and ideal statements");
      std::vector<std::string>& dst = kw == "vars" ? p.vars : p.params;
      size_t before = dst.size();
      while (lex.peek().kind == Token::Ident && !detail::is_keyword(lex.peek().text)) {
        declare(lex.peek().text);
        dst.push_back(lex.next().text);
      }
      if (dst.size() == before) lex.error("expected identifier");
    } else if (kw == "divisor") {
      if (lex.peek().kind != Token::Ident) lex.error("expected divisor name");
      std::string name = lex.peek().text;
      if (detail::is_keyword(name)) lex.error("reserved word '" + name + "'");
      if (std::find(names.begin(), names.end(), name) != names.end())
        lex.error("duplicate declaration of '" + name + "'");
      lex.next();
      expect_punct("=");
      PolyParser pp(lex, context_now());
      Poly eq = pp.parse_expr();
      names.push_back(name);
      p.divisors.push_back({name, std::move(eq)});
    } else if (kw == "ideal") {
      if (have_ideal) lex.error("duplicate declaration of the ideal");
      have_ideal = true;
      PolyParser pp(lex, context_now());
      p.ideal.push_back(pp.parse_expr());
      while (lex.peek().kind == Token::Punct && lex.peek().text == ",") {
        lex.next();
        p.ideal.push_back(pp.parse_expr());
      }
    } else if (kw == "b") {
      if (have_b) lex.error("duplicate declaration of 'b'");
      have_b = true;
      expect_punct("=");
      if (lex.peek().kind != Token::Integer) lex.error("expected integer");
      p.b = std::stoi(lex.next().text);
      if (p.b < 1) lex.error("b must be at least 1");
    } else if (kw == "task") {
      if (lex.peek().kind != Token::Ident) lex.error("expected task name");
      TaskSpec t;
      if (!detail::known_task(lex.peek().text, &t.kind))
        lex.error("unknown task '" + lex.peek().text + "'");
      lex.next();
      if (t.kind == TaskKind::Tau) {
        t.points.push_back(parse_group());
      } else if (t.kind != TaskKind::Resolve && t.kind != TaskKind::Principalize &&
                 t.kind != TaskKind::Desingularize) {
        t.points.push_back(parse_group());
        while (lex.peek().kind == Token::Punct && lex.peek().text == ",") {
          lex.next();
          t.points.push_back(parse_group());
        }
      }
      p.tasks.push_back(std::move(t));
    } else {
      lex.error("expected statement keyword");
    }
  }
  if (!have_ideal) fail(Errc::ParseError, "missing ideal statement");
  bool all_zero = true;
  for (const Poly& g : p.ideal) all_zero = all_zero && g.is_zero();
  if (all_zero) fail(Errc::ZeroIdeal, "the ideal statement declares the zero ideal");
  return p;
}

inline std::string print_problem(const ProblemFile& p) {
  std::string out;
  auto words = [&](const char* kw, const std::vector<std::string>& xs) {
    out += kw;
    for (const std::string& x : xs) out += " " + x;
    out += "\n";
  };
  words("vars", p.vars);
  if (!p.params.empty()) words("params", p.params);
  for (const auto& d : p.divisors) out += "divisor " + d.first + " = " + d.second.str() + "\n";
  out += "ideal ";
  for (size_t i = 0; i < p.ideal.size(); ++i)
    out += (i ? ", " : "") + p.ideal[i].str();
  out += "\nb = " + std::to_string(p.b) + "\n";
  for (const TaskSpec& t : p.tasks) {
    out += std::string("task ") + task_name(t.kind);
    for (size_t i = 0; i < t.points.size(); ++i) {
      out += i ? ", (" : " (";
      for (size_t j = 0; j < t.points[i].size(); ++j)
        out += (j ? ", " : "") + to_string(t.points[i][j]);
      out += ")";
    }
    out += "\n";
  }
  return out;
}

// Engine input over the full context (parameters, when present, enter as
// ordinary variables: the total-space view).
inline ProblemInput problem_input(const ProblemFile& p) {
  ProblemInput in;
  in.ctx = p.ctx;
  in.gens = p.ideal;
  in.b = p.b;
  for (const auto& d : p.divisors) in.divisors.push_back({d.first, d.second});
  return in;
}

inline FamilySpec family_spec(const ProblemFile& p) {
  ensure(!p.params.empty(), Errc::ParseError, "family task on a file without params");
  FamilySpec F;
  F.ctx = p.ctx;
  F.nfiber = static_cast<int>(p.vars.size());
  F.gens = p.ideal;
  for (const auto& d : p.divisors) F.divisors.push_back(d.second);
  return F;
}

// Sample tuples for an m-parameter family; a single over-long tuple in a
// one-parameter file abbreviates a list of scalar samples.
inline std::vector<std::vector<Rat>> sample_tuples(const TaskSpec& t, int m) {
  std::vector<std::vector<Rat>> out;
  for (const std::vector<Rat>& g : t.points) {
    if (static_cast<int>(g.size()) == m) {
      out.push_back(g);
    } else if (m == 1) {
      for (const Rat& r : g) out.push_back({r});
    } else {
      fail(Errc::ParseError, "point arity does not match the parameter count");
    }
  }
  return out;
}

}  // namespace desing
