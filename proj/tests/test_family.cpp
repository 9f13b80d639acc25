#include "desing/family.hpp"
#include "desing/poly_parse.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace desing;

namespace {

Poly P(const Context& c, const std::string& s) { return parse_poly(s, c); }

FamilySpec fam(const Context& ctx, int nfiber, const std::vector<std::string>& gens,
               const std::vector<std::string>& divs = {}) {
  FamilySpec f;
  f.ctx = ctx;
  f.nfiber = nfiber;
  for (const auto& g : gens) f.gens.push_back(P(ctx, g));
  for (const auto& d : divs) f.divisors.push_back(P(ctx, d));
  return f;
}

Context xyt() { return make_context({"x", "y", "t"}); }

std::vector<Rat> at(long long v) { return {Rat(v)}; }

}  // namespace

TEST_CASE("fibers substitute parameters and validate the result") {
  auto c = xyt();
  FamilySpec prod = fam(c, 2, {"x^2 - y^3"});
  ProblemInput f1 = fiber(prod, at(5));
  REQUIRE(f1.gens.size() == 1);
  CHECK(f1.gens[0] == P(f1.ctx, "x^2 - y^3").normalized());
  CHECK(f1.ctx->size() == 2);

  FamilySpec node = fam(c, 2, {"x^2 - y^2*(y + t)"});
  ProblemInput f2 = fiber(node, at(1));
  CHECK(f2.gens[0] == P(f2.ctx, "x^2 - y^3 - y^2").normalized());

  // zero fiber ideal
  FamilySpec degen = fam(c, 2, {"t*x"});
  CHECK_THROWS_AS(fiber(degen, at(0)), Error);
  try {
    fiber(degen, at(0));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidFiber);
  }
  CHECK_NOTHROW(fiber(degen, at(1)));

  // wrong parameter dimension
  CHECK_THROWS_AS(fiber(prod, {Rat(1), Rat(2)}), Error);

  // a divisor that degenerates at t = 0
  FamilySpec dd = fam(c, 2, {"x^2 - y^3"}, {"x + t*y - t"});
  CHECK_NOTHROW(fiber(dd, at(1)));
  // divisors colliding at t = 0
  FamilySpec coll = fam(c, 2, {"x^2 - y^3"}, {"x", "x + t*y"});
  CHECK_THROWS_AS(fiber(coll, at(0)), Error);
  CHECK_NOTHROW(fiber(coll, at(1)));
}

TEST_CASE("tau on the trivial product family is sample independent") {
  auto c = xyt();
  FamilySpec prod = fam(c, 2, {"x^2 - y^3"});
  TauInvariant t0 = tau(prod, at(0));
  TauInvariant t1 = tau(prod, at(1));
  TauInvariant t2 = tau(prod, at(-1));
  TauInvariant t3 = tau(prod, at(7));
  CHECK(compare(t0, t1) == 0);
  CHECK(compare(t0, t2) == 0);
  CHECK(compare(t0, t3) == 0);
  CHECK(t0.steps >= 1);
  CHECK(t0.entries.size() == static_cast<size_t>(t0.steps) + 1);
  // cusp fiber centers are points or irreducible curves
  for (const TauEntry& e : t0.entries)
    if (e.c != 0) CHECK(e.c == 1);
}

TEST_CASE("tau separates the cusp fiber from the node fibers") {
  auto c = xyt();
  FamilySpec node = fam(c, 2, {"x^2 - y^2*(y + t)"});
  TauInvariant t0 = tau(node, at(0));
  TauInvariant t1 = tau(node, at(1));
  CHECK(compare(t0, t1) != 0);
  // semicontinuity: the special fiber ranks higher
  CHECK(compare(t0, t1) > 0);
}

TEST_CASE("tau is invariant under parameter translation") {
  auto c = xyt();
  FamilySpec node = fam(c, 2, {"x^2 - y^2*(y + t)"});
  FamilySpec shifted = fam(c, 2, {"x^2 - y^2*(y + t + 1)"});
  CHECK(compare(tau(shifted, at(0)), tau(node, at(1))) == 0);
  CHECK(compare(tau(shifted, at(-1)), tau(node, at(0))) == 0);
}

TEST_CASE("stratification groups samples by exact tau") {
  auto c = xyt();
  FamilySpec node = fam(c, 2, {"x^2 - y^2*(y + t)"});
  StratifyResult sr = stratify(node, {at(0), at(1), at(-1), at(2)});
  REQUIRE(sr.strata.size() == 2);
  // decreasing tau: the cusp stratum {0} comes first
  REQUIRE(sr.strata[0].members.size() == 1);
  CHECK(sr.strata[0].members[0] == at(0));
  CHECK(sr.strata[1].members.size() == 3);
  CHECK(compare(sr.strata[0].tau, sr.strata[1].tau) > 0);
  CHECK(sr.rejected.empty());
  // partition: disjoint and covering
  size_t total = 0;
  for (const auto& st : sr.strata) total += st.members.size();
  CHECK(total == 4);

  FamilySpec prod = fam(c, 2, {"x^2 - y^3"});
  StratifyResult one = stratify(prod, {at(0), at(3), at(-2)});
  CHECK(one.strata.size() == 1);

  StratifyResult empty = stratify(prod, {});
  CHECK(empty.strata.empty());
  CHECK(empty.rejected.empty());

  // invalid fibers are listed separately, not dropped
  FamilySpec degen = fam(c, 2, {"t*x^2 - t*y^3"});
  StratifyResult rej = stratify(degen, {at(0), at(1)});
  CHECK(rej.strata.size() == 1);
  REQUIRE(rej.rejected.size() == 1);
  CHECK(rej.rejected[0] == at(0));
}

TEST_CASE("condition AE holds for the product family") {
  auto c = xyt();
  FamilySpec prod = fam(c, 2, {"x^2 - y^3"});
  AEReport rep = check_AE(prod, {at(0), at(1), at(-1)});
  CHECK(rep.holds);
  CHECK(rep.failing_step == -1);
  CHECK(rep.steps_checked >= 1);
}

TEST_CASE("condition AE fails for the node/cusp family") {
  auto c = xyt();
  FamilySpec node = fam(c, 2, {"x^2 - y^2*(y + t)"});
  AEReport rep = check_AE(node, {at(0), at(1)});
  CHECK(!rep.holds);
  CHECK(rep.failing_step >= 0);
  CHECK(!rep.notes.empty());
}

TEST_CASE("theorem consistency: both sides agree on both families") {
  auto c = xyt();
  FamilySpec prod = fam(c, 2, {"x^2 - y^3"});
  Theorem23Report good = check_theorem23(prod, {at(0), at(1), at(-1)});
  CHECK(good.ae);
  CHECK(good.tau_constant);
  CHECK(good.consistent);
  CHECK(good.restriction_verified);

  FamilySpec node = fam(c, 2, {"x^2 - y^2*(y + t)"});
  Theorem23Report bad = check_theorem23(node, {at(0), at(1)});
  CHECK(!bad.ae);
  CHECK(!bad.tau_constant);
  CHECK(bad.consistent);
  CHECK(!bad.restriction_verified);

  CHECK_THROWS_AS(check_theorem23(prod, {at(0)}), Error);
}

TEST_CASE("fiber inequality: equality with transversality on the product family") {
  auto c = xyt();
  FamilySpec prod = fam(c, 2, {"x^2 - y^3"});
  std::vector<Point> pts{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}, {Rat(0), Rat(2)}};
  auto cmps = check_fiber_inequality(prod, at(1), 0, pts);
  REQUIRE(cmps.size() == 3);
  for (const FiberComparison& fc : cmps) {
    REQUIRE(fc.lifted);
    CHECK(fc.holds);
    CHECK(!fc.strict);
    CHECK(fc.transversal);
    CHECK(fc.matches_64b);
  }
}

TEST_CASE("fiber inequality: strict drop at the special point of the node family") {
  auto c = xyt();
  FamilySpec node = fam(c, 2, {"x^2 - y^2*(y + t)"});
  std::vector<Point> pts{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}, {Rat(2), Rat(0)}};
  auto cmps = check_fiber_inequality(node, at(0), 0, pts);
  REQUIRE(cmps.size() == 3);
  bool any_strict = false;
  for (const FiberComparison& fc : cmps) {
    REQUIRE(fc.lifted);
    CHECK(fc.holds);
    CHECK(fc.matches_64b);
    any_strict = any_strict || fc.strict;
  }
  CHECK(any_strict);
  // the origin carries the strict drop and fails transversality
  CHECK(cmps[0].strict);
  CHECK(!cmps[0].transversal);
  // smooth curve point: equality, transversal
  CHECK(!cmps[1].strict);
  CHECK(cmps[1].transversal);
}
