#include "desing/groebner.hpp"
#include "desing/poly_parse.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace desing;

namespace {
Context xyz() { return make_context({"x", "y", "z"}); }
Poly P(const Context& c, const std::string& s) { return parse_poly(s, c); }
}  // namespace

TEST_CASE("normal form reduces to zero exactly on ideal members") {
  auto c = xyz();
  std::vector<Poly> gb = groebner({P(c, "x^2 - y"), P(c, "x*y - z")});
  // members: random combinations
  Poly m = P(c, "(x^2 - y)*(y + 3) + (x*y - z)*x^2");
  CHECK(in_ideal_gb(m, gb));
  CHECK(in_ideal_gb(Poly::zero(c), gb));
  // non-members
  CHECK_FALSE(in_ideal_gb(P(c, "x"), gb));
  CHECK_FALSE(in_ideal_gb(P(c, "1"), gb));
  // x^3 = x*(x^2 - y) + (x*y - z) + z, so x^3 - z is a member
  CHECK(in_ideal_gb(P(c, "x^3 - z"), gb));
}

TEST_CASE("groebner basis is deterministic under generator permutation") {
  auto c = xyz();
  std::vector<Poly> g1 = groebner({P(c, "x^2 - y"), P(c, "x*y - z"), P(c, "y^2 - x*z")});
  std::vector<Poly> g2 = groebner({P(c, "y^2 - x*z"), P(c, "x^2 - y"), P(c, "x*y - z")});
  REQUIRE(g1.size() == g2.size());
  CHECK(g1 == g2);
}

TEST_CASE("unit ideal detection") {
  auto c = xyz();
  CHECK(is_unit_ideal({P(c, "x"), P(c, "x - 1")}));
  CHECK(is_unit_ideal({P(c, "x*y + 1"), P(c, "y")}));
  CHECK_FALSE(is_unit_ideal({P(c, "x"), P(c, "y")}));
  CHECK_FALSE(is_unit_ideal({P(c, "x^2 - y^3")}));
  // cusp x-chart certificate: x*y^3 + (1 - x*y^3) = 1
  CHECK(is_unit_ideal({P(c, "x"), P(c, "1 - x*y^3")}));
}

TEST_CASE("elimination computes intersection with subring") {
  // twisted cubic: x = t, y = t^2, z = t^3 in ctx (t, x, y, z); eliminate t
  auto c = make_context({"t", "x", "y", "z"});
  std::vector<Poly> elim = eliminate_front(
      {P(c, "x - t"), P(c, "y - t^2"), P(c, "z - t^3")}, 1);
  std::vector<Poly> gb_elim = groebner(elim);
  // the eliminated ideal is (y - x^2, z - x^3) up to basis choice
  CHECK(in_ideal_gb(P(c, "y - x^2"), gb_elim));
  CHECK(in_ideal_gb(P(c, "z - x^3"), gb_elim));
  CHECK(in_ideal_gb(P(c, "x*z - y^2"), gb_elim));
  CHECK_FALSE(in_ideal_gb(P(c, "x - t"), gb_elim));
  for (const Poly& g : elim) CHECK_FALSE(g.depends_on(0));
}

TEST_CASE("saturation removes a component") {
  auto c = xyz();
  // (x*y, x*z) : x^inf = (y, z)
  std::vector<Poly> s = saturate({P(c, "x*y"), P(c, "x*z")}, P(c, "x"));
  std::vector<Poly> gb = groebner(s);
  CHECK(in_ideal_gb(P(c, "y"), gb));
  CHECK(in_ideal_gb(P(c, "z"), gb));
  CHECK_FALSE(in_ideal_gb(P(c, "x"), gb));
  // strict transform of the cusp under x = x, y = x*y (x-chart):
  // total transform x^2 - x^3*y^3 = x^2*(1 - x*y^3); saturating by x leaves the unit
  std::vector<Poly> s2 = saturate({P(c, "x^2 - x^3*y^3")}, P(c, "x"));
  CHECK(is_unit_ideal_gb(groebner(s2)) == false);
  CHECK(in_ideal_gb(P(c, "1 - x*y^3"), groebner(s2)));
}

TEST_CASE("radical membership via locus containment") {
  auto c = xyz();
  // V(x^2) ⊆ V(x) and conversely
  CHECK(locus_contained({P(c, "x^2")}, P(c, "x")));
  CHECK(locus_contained({P(c, "x")}, P(c, "x^2")));
  CHECK_FALSE(locus_contained({P(c, "x")}, P(c, "y")));
  // V(x^2 - y^3, y) = origin ⊆ V(x)
  CHECK(locus_contained({P(c, "x^2 - y^3"), P(c, "y")}, P(c, "x")));
  // the singular locus of the Whitney umbrella x^2 - z*y^2 is the z-axis
  std::vector<Poly> jac{P(c, "x^2 - z*y^2"), P(c, "2*x"), P(c, "2*z*y"), P(c, "y^2")};
  CHECK(locus_equal(jac, {P(c, "x"), P(c, "y")}));
}

TEST_CASE("ideal equality distinguishes radical-equal ideals") {
  auto c = xyz();
  CHECK(ideal_equal({P(c, "x^2 - y"), P(c, "y")}, {P(c, "x^2"), P(c, "y")}));
  CHECK_FALSE(ideal_equal({P(c, "x^2")}, {P(c, "x")}));
  CHECK(locus_equal({P(c, "x^2")}, {P(c, "x")}));
}

TEST_CASE("dimension of standard examples") {
  auto c = xyz();
  CHECK(gb_dimension({P(c, "x")}) == 2);             // plane in A^3
  CHECK(gb_dimension({P(c, "x"), P(c, "y")}) == 1);  // line
  CHECK(gb_dimension({P(c, "x"), P(c, "y"), P(c, "z")}) == 0);
  CHECK(gb_dimension({P(c, "x"), P(c, "x - 1")}) == -1);  // empty
  CHECK(gb_dimension({P(c, "x^2 - y^3")}) == 2);          // cusp surface cylinder
  CHECK(gb_dimension(std::vector<Poly>{Poly::zero(c)}) == 3);
  CHECK(gb_dimension({P(c, "x^2 + y^2")}) == 2);  // over Q still a hypersurface
}
