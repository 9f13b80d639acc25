#include "desing/problem.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace desing;

TEST_CASE("minimal problem file parses") {
  ProblemFile p = parse_problem("vars x y\nideal x^2 - y^3\nb = 2\ntask resolve\n");
  CHECK(p.vars == std::vector<std::string>{"x", "y"});
  CHECK(p.params.empty());
  REQUIRE(p.ideal.size() == 1);
  CHECK(p.ideal[0] == parse_poly("x^2 - y^3", p.ctx));
  CHECK(p.b == 2);
  REQUIRE(p.tasks.size() == 1);
  CHECK(p.tasks[0].kind == TaskKind::Resolve);
}

TEST_CASE("print then parse is a fixpoint") {
  const char* files[] = {
      "vars x y\nideal x^2 - y^3\nb = 2\ntask resolve\n",
      "vars x y\nparams t\nideal x^2 - y^2*(y + t)\ntask stratify (0, 1, -1, 2)\n",
      "vars x y z\ndivisor H = z\nideal x, y\nb = 1\ntask resolve\ntask principalize\n",
      "vars x y\nparams s t\nideal x^2 - s*y^3 - t\ntask check-ae (0, 0), (1, 1/2)\n",
      "vars x y\nparams t\nideal x^2 - y^3\ntask tau (-3/2)\ntask check-tau (0), (1, 1)\n",
  };
  for (const char* f : files) {
    ProblemFile p = parse_problem(f);
    std::string printed = print_problem(p);
    ProblemFile q = parse_problem(printed);
    CHECK(p == q);
    CHECK(print_problem(q) == printed);
  }
}

TEST_CASE("comments and free-form whitespace are accepted") {
  ProblemFile p = parse_problem(
      "# header comment\nvars x y  # trailing\n\n\nideal   x^2-y^3\nb=1\ntask resolve");
  CHECK(p.b == 1);
  CHECK(p.ideal[0] == parse_poly("x^2 - y^3", p.ctx));
}

TEST_CASE("defaults: b is one when omitted") {
  ProblemFile p = parse_problem("vars x\nideal x^2\ntask resolve\n");
  CHECK(p.b == 1);
  CHECK(print_problem(p).find("b = 1\n") != std::string::npos);
}

TEST_CASE("stray token errors name the position") {
  try {
    parse_problem("vars x y\nideal x^2 - y^3\n??\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("column 1") != std::string::npos);
  }
}

TEST_CASE("undeclared identifiers are rejected inside polynomials") {
  CHECK_THROWS_AS(parse_problem("vars x\nideal x^2 - y^3\ntask resolve\n"), Error);
  try {
    parse_problem("vars x\nideal x - w\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("undeclared identifier 'w'") != std::string::npos);
  }
}

TEST_CASE("structural validation: duplicates, missing ideal, zero ideal, bad b") {
  CHECK_THROWS_AS(parse_problem("vars x x\nideal x\n"), Error);
  CHECK_THROWS_AS(parse_problem("vars x\nparams x\nideal x\n"), Error);
  CHECK_THROWS_AS(parse_problem("vars x\nideal x\nideal x\n"), Error);
  CHECK_THROWS_AS(parse_problem("vars x\ntask resolve\n"), Error);
  CHECK_THROWS_AS(parse_problem("vars x\nideal x\nb = 0\n"), Error);
  CHECK_THROWS_AS(parse_problem("vars x\nideal x\nb = 1\nb = 2\n"), Error);
  CHECK_THROWS_AS(parse_problem("vars x\nideal x\nvars y\n"), Error);
  try {
    parse_problem("vars x\nideal x - x\n");
    FAIL("expected the zero-ideal error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroIdeal);
  }
}

TEST_CASE("task arguments parse as rational tuples") {
  ProblemFile p = parse_problem(
      "vars x y\nparams t\nideal x^2 - y^3\ntask stratify (0, 1/2), (-1, 2)\ntask tau (3)\n");
  REQUIRE(p.tasks.size() == 2);
  CHECK(p.tasks[0].points == std::vector<std::vector<Rat>>{{Rat(0), Rat(1, 2)}, {Rat(-1), Rat(2)}});
  CHECK(p.tasks[1].points == std::vector<std::vector<Rat>>{{Rat(3)}});
  CHECK_THROWS_AS(parse_problem("vars x\nideal x\ntask walk\n"), Error);
  CHECK_THROWS_AS(parse_problem("vars x\nideal x\ntask tau\n"), Error);
}

TEST_CASE("sample tuples expand the one-parameter abbreviation") {
  TaskSpec t;
  t.kind = TaskKind::Stratify;
  t.points = {{Rat(0), Rat(1), Rat(-1)}};
  auto s1 = sample_tuples(t, 1);
  REQUIRE(s1.size() == 3);
  CHECK(s1[1] == std::vector<Rat>{Rat(1)});
  t.points = {{Rat(0), Rat(1)}};
  auto s2 = sample_tuples(t, 2);
  REQUIRE(s2.size() == 1);
  CHECK_THROWS_AS(sample_tuples(t, 3), Error);
}

TEST_CASE("bridges to engine and family inputs") {
  ProblemFile p = parse_problem(
      "vars x y\nparams t\ndivisor H = x\nideal x^2 - y^3\nb = 2\ntask resolve\n");
  ProblemInput in = problem_input(p);
  CHECK(in.ctx->size() == 3);
  CHECK(in.b == 2);
  REQUIRE(in.divisors.size() == 1);
  CHECK(in.divisors[0].name == "H");
  FamilySpec F = family_spec(p);
  CHECK(F.nfiber == 2);
  CHECK(param_count(F) == 1);
  ProblemFile q = parse_problem("vars x\nideal x^2\ntask resolve\n");
  CHECK_THROWS_AS(family_spec(q), Error);
}
