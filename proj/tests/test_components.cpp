#include "desing/components.hpp"
#include "desing/poly_parse.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace desing;

namespace {
Poly P(const Context& c, const std::string& s) { return parse_poly(s, c); }
}  // namespace

TEST_CASE("rational roots split off and leave the irrational core") {
  auto ctx = make_context({"x", "y"});
  RationalRoots r1 = rational_roots(P(ctx, "x^2 - 1"), 0);
  REQUIRE(r1.roots.size() == 2);
  CHECK(r1.leftover.is_constant());
  RationalRoots r2 = rational_roots(P(ctx, "x^2 + 1"), 0);
  CHECK(r2.roots.empty());
  CHECK(r2.leftover == P(ctx, "x^2 + 1").normalized());
  RationalRoots r3 = rational_roots(P(ctx, "(x - 1)^2 * (x^2 + 2)"), 0);
  REQUIRE(r3.roots.size() == 1);
  CHECK(r3.roots[0] == Rat(1));
  CHECK(r3.leftover == P(ctx, "x^2 + 2").normalized());
  RationalRoots r4 = rational_roots(P(ctx, "2*x^3 - x^2"), 0);
  CHECK(r4.roots.size() == 2);  // 0 and 1/2
  CHECK(r4.leftover.is_constant());
}

TEST_CASE("aligned piece counts: subspaces, conjugate clusters, wide residuals") {
  auto ctx = make_context({"x", "y", "z"});
  Center sub{{0, 1}, Poly::zero(ctx)};
  ComponentCount c1 = count_aligned_piece(sub, ctx);
  CHECK(c1.count == 1);
  CHECK(c1.exact);
  // conjugate point pair: two geometric components, certified by degree
  Center conj{{0, 1}, P(ctx, "z^2 + 1")};
  ComponentCount c2 = count_aligned_piece(conj, ctx);
  CHECK(c2.count == 2);
  CHECK(c2.exact);
  // multiplicities do not inflate the count
  Center dbl{{0, 1}, P(ctx, "(z - 1)^2")};
  ComponentCount c3 = count_aligned_piece(dbl, ctx);
  CHECK(c3.count == 1);
  CHECK(c3.exact);
  // residual touching two variables is only a flagged lower bound
  Center wide{{0}, P(ctx, "y^2 + z^2 - 1")};
  ComponentCount c4 = count_aligned_piece(wide, ctx);
  CHECK(c4.count == 1);
  CHECK(!c4.exact);
}

TEST_CASE("same fiber point seen from two standard charts merges to one") {
  ChartTree tree;
  auto ctx = make_context({"x", "y"});
  int root = make_root_chart(tree, ctx);
  auto kids = blowup_std(tree, root, {0, 1}, 1);
  // direction y/x = 2: (x=0, y=2) in the x-chart, (x=1/2, y=0) in the y-chart
  CenterPiece a{kids[0], {P(ctx, "x"), P(ctx, "y - 2")}, Center{{0}, P(ctx, "y - 2")}};
  CenterPiece b{kids[1], {P(ctx, "y"), P(ctx, "2*x - 1")}, Center{{1}, P(ctx, "2*x - 1")}};
  ComponentCount cc = count_center_components(tree, {a, b});
  CHECK(cc.count == 1);
  CHECK(cc.exact);
}

TEST_CASE("distinct pieces in one chart stay distinct") {
  ChartTree tree;
  auto ctx = make_context({"x", "y"});
  int root = make_root_chart(tree, ctx);
  auto kids = blowup_std(tree, root, {0, 1}, 1);
  CenterPiece a{kids[0], {P(ctx, "x"), P(ctx, "y - 1")}, Center{{0}, P(ctx, "y - 1")}};
  CenterPiece b{kids[0], {P(ctx, "x"), P(ctx, "y - 2")}, Center{{0}, P(ctx, "y - 2")}};
  ComponentCount cc = count_center_components(tree, {a, b});
  CHECK(cc.count == 2);
  CHECK(cc.exact);
}

TEST_CASE("conjugate fiber cluster seen from both charts uses the reciprocal rule") {
  ChartTree tree;
  auto ctx = make_context({"x", "y"});
  int root = make_root_chart(tree, ctx);
  auto kids = blowup_std(tree, root, {0, 1}, 1);
  // directions y/x = +-sqrt(2); the y-chart sees x/y = +-1/sqrt(2)
  CenterPiece a{kids[0], {P(ctx, "x"), P(ctx, "y^2 - 2")}, Center{{0}, P(ctx, "y^2 - 2")}};
  CenterPiece b{kids[1], {P(ctx, "y"), P(ctx, "2*x^2 - 1")}, Center{{1}, P(ctx, "2*x^2 - 1")}};
  ComponentCount cc = count_center_components(tree, {a, b});
  CHECK(cc.count == 2);
  CHECK(cc.exact);

  // with the direction y/x = 0 added on one side, the union gains one point
  CenterPiece a3{kids[0], {P(ctx, "x"), P(ctx, "y^3 - 2*y")}, Center{{0}, P(ctx, "y^3 - 2*y")}};
  ComponentCount cc3 = count_center_components(tree, {a3, b});
  CHECK(cc3.count == 3);
  CHECK(cc3.exact);
}

TEST_CASE("non-matching conjugate clusters are flagged, never merged silently") {
  ChartTree tree;
  auto ctx = make_context({"x", "y"});
  int root = make_root_chart(tree, ctx);
  auto kids = blowup_std(tree, root, {0, 1}, 1);
  // +-sqrt(2) directions in both charts name four distinct fiber points, but
  // the reciprocal test cannot certify that, so the count comes back inexact
  CenterPiece a{kids[0], {P(ctx, "x"), P(ctx, "y^2 - 2")}, Center{{0}, P(ctx, "y^2 - 2")}};
  CenterPiece b{kids[1], {P(ctx, "y"), P(ctx, "x^2 - 2")}, Center{{1}, P(ctx, "x^2 - 2")}};
  ComponentCount cc = count_center_components(tree, {a, b});
  CHECK(cc.count == 4);
  CHECK(!cc.exact);
}

TEST_CASE("root images push chart loci back to source coordinates") {
  ChartTree tree;
  auto ctx = make_context({"x", "y"});
  int root = make_root_chart(tree, ctx);
  auto kids = blowup_std(tree, root, {0, 1}, 1);
  // any point of the exceptional fiber contracts to the blown-up origin
  std::vector<Poly> img = root_image(tree, kids[0], {P(ctx, "x"), P(ctx, "y - 2")});
  CHECK(locus_equal(img, {P(ctx, "x"), P(ctx, "y")}));
  // the strict transform of the cusp maps onto the cusp
  std::vector<Poly> curve = root_image(tree, kids[1], {P(ctx, "x^2 - y")});
  CHECK(locus_equal(curve, {P(ctx, "x^2 - y^3")}));
  // root chart images are the identity
  std::vector<Poly> same = root_image(tree, root, {P(ctx, "x - 1")});
  REQUIRE(same.size() == 1);
  CHECK(same[0] == P(ctx, "x - 1").normalized());
}

TEST_CASE("empty center lists count zero components") {
  ChartTree tree;
  auto ctx = make_context({"x", "y"});
  make_root_chart(tree, ctx);
  ComponentCount cc = count_center_components(tree, {});
  CHECK(cc.count == 0);
  CHECK(cc.exact);
}
