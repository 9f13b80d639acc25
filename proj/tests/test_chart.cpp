#include "desing/blowup.hpp"
#include "desing/chart.hpp"
#include "desing/poly_parse.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace desing;

namespace {
Poly P(const Context& c, const std::string& s) { return parse_poly(s, c); }
}  // namespace

TEST_CASE("push and lift through a standard blow-up") {
  ChartTree tree;
  auto ctx = make_context({"x", "y"});
  int root = make_root_chart(tree, ctx);
  auto charts = blowup_std(tree, root, {0, 1}, 1);
  REQUIRE(charts.size() == 2);
  int cx = charts[0], cy = charts[1];  // pivots x, y

  // x-chart: (x, y) -> (x, x*y)
  Point p{rat(2), rat(3)};
  Point down = push_to_root(tree, cx, p);
  CHECK(down == Point{rat(2), rat(6)});
  auto up = lift_once(tree, cx, down);
  REQUIRE(up.has_value());
  CHECK(*up == p);

  // points over the center do not lift
  CHECK_FALSE(lift_once(tree, cx, Point{rat(0), rat(0)}).has_value());
  CHECK_FALSE(lift_once(tree, cy, Point{rat(0), rat(0)}).has_value());

  // y-chart lift of (2, 6): x/y = 1/3
  auto upy = lift_once(tree, cy, down);
  REQUIRE(upy.has_value());
  CHECK(*upy == Point{rat(1, 3), rat(6)});
}

TEST_CASE("sibling cross map glues the exceptional fiber projectively") {
  ChartTree tree;
  auto ctx = make_context({"x", "y"});
  int root = make_root_chart(tree, ctx);
  auto charts = blowup_std(tree, root, {0, 1}, 1);
  int cx = charts[0], cy = charts[1];

  // direction [1 : 2] seen in the x-chart as (0, 2), in the y-chart as (1/2, 0)
  auto q = cross_sibling(tree.at(cx), Point{rat(0), rat(2)}, tree.at(cy));
  REQUIRE(q.has_value());
  CHECK(*q == Point{rat(1, 2), rat(0)});
  // direction [1 : 0] is invisible in the y-chart
  CHECK_FALSE(cross_sibling(tree.at(cx), Point{rat(0), rat(0)}, tree.at(cy)).has_value());
  // off the fiber the maps agree with plain lifting
  auto q2 = cross_sibling(tree.at(cx), Point{rat(2), rat(3)}, tree.at(cy));
  REQUIRE(q2.has_value());
  CHECK(*q2 == Point{rat(1, 3), rat(6)});

  CHECK(same_point(tree, cx, {rat(0), rat(2)}, cy, {rat(1, 2), rat(0)}) == Trilean::True);
  CHECK(same_point(tree, cx, {rat(0), rat(2)}, cy, {rat(1), rat(0)}) == Trilean::False);
  CHECK(same_point(tree, cx, {rat(0), rat(0)}, cy, {rat(0), rat(0)}) == Trilean::False);
  CHECK(same_point(tree, cx, {rat(2), rat(3)}, cy, {rat(1, 3), rat(6)}) == Trilean::True);
  // (1,1) in both charts is the same geometric point: base (1,1) off the center
  CHECK(same_point(tree, cx, {rat(1), rat(1)}, cy, {rat(1), rat(1)}) == Trilean::True);
  // distinct base points are definitely different
  CHECK(same_point(tree, cx, {rat(1), rat(2)}, cy, {rat(1), rat(1)}) == Trilean::False);
}

TEST_CASE("transfer through align charts and longer paths") {
  ChartTree tree;
  auto ctx = make_context({"x", "y"});
  int root = make_root_chart(tree, ctx);
  // align the center V(x - 1, y - 2): shifts both variables
  auto ar = align_center(tree, root, {P(ctx, "x - 1"), P(ctx, "y - 2")});
  REQUIRE(ar.center.vars == std::vector<int>{0, 1});
  CHECK_FALSE(ar.center.has_extra());
  int ac = ar.chart_id;
  REQUIRE(ac != root);

  // the center's origin corresponds to (1, 2) in the root chart
  CHECK(push_to_root(tree, ac, {rat(0), rat(0)}) == Point{rat(1), rat(2)});
  Point lifted;
  REQUIRE(transfer_point(tree, root, {rat(1), rat(2)}, ac, &lifted) == Transfer::Ok);
  CHECK(lifted == Point{rat(0), rat(0)});

  // blow up the aligned center and walk a point through both levels
  auto charts = blowup_std(tree, ac, ar.center.vars, 1);
  Point p{rat(3), rat(4)};  // in the x-pivot chart
  Point base = push_to_root(tree, charts[0], p);
  CHECK(base == Point{rat(4), rat(14)});  // x = 3+1, y = 3*4+2
  Point back;
  REQUIRE(transfer_point(tree, root, base, charts[0], &back) == Transfer::Ok);
  CHECK(back == p);
}

TEST_CASE("rees chart substitutes the residual generator") {
  ChartTree tree;
  auto ctx = make_context({"x", "y"});
  int root = make_root_chart(tree, ctx);
  // center V(y, x^2 + 1): conjugate point pair, not alignable over Q
  auto ar = align_center(tree, root, {P(ctx, "y"), P(ctx, "x^2 + 1")});
  CHECK(ar.chart_id == root);
  CHECK(ar.center.vars == std::vector<int>{1});
  REQUIRE(ar.center.has_extra());
  CHECK(ar.center.extra == P(ctx, "x^2 + 1"));

  int rc = blowup_rees(tree, root, ar.center.vars, ar.center.extra, 1);
  CHECK(exceptional_view(tree.at(rc)) == P(ctx, "x^2 + 1"));
  // y -> (x^2+1)*y, x -> x
  CHECK(pullback(tree, rc, P(ctx, "y")) == P(ctx, "(x^2 + 1)*y"));
  Point p{rat(1), rat(5)};
  CHECK(push_to_root(tree, rc, p) == Point{rat(1), rat(10)});
  auto up = lift_once(tree, rc, Point{rat(1), rat(10)});
  REQUIRE(up.has_value());
  CHECK(*up == p);
  CHECK(lift_once(tree, rc, Point{rat(0), rat(0)}).has_value());  // g(0,0) = 1, lift defined
}

TEST_CASE("alignment failures are diagnosed") {
  ChartTree tree;
  auto ctx = make_context({"x", "y", "z"});
  int root = make_root_chart(tree, ctx);
  // the cusp curve is singular: no alignment, no smooth residual
  CHECK_THROWS_AS(align_center(tree, root, {P(ctx, "x^2 - y^3")}), Error);
  // two residual generators after variable extraction
  CHECK_THROWS_AS(align_center(tree, root, {P(ctx, "x^2 + 1"), P(ctx, "y^2 + 1")}), Error);
  // empty center
  CHECK_THROWS_AS(align_center(tree, root, {P(ctx, "x"), P(ctx, "x - 1")}), Error);
}

TEST_CASE("alignment extracts nonlinear graphs triangularly") {
  ChartTree tree;
  auto ctx = make_context({"x", "y", "z"});
  int root = make_root_chart(tree, ctx);
  // V(x - y^2, z - x*y) is a smooth curve (a graph over y)
  auto ar = align_center(tree, root, {P(ctx, "x - y^2"), P(ctx, "z - x*y")});
  CHECK(ar.center.vars == std::vector<int>{0, 2});
  CHECK_FALSE(ar.center.has_extra());
  // points of the curve (t^2, t, t^3) map to the aligned subspace x = z = 0
  for (int t : {0, 1, 2, -1}) {
    Point base{rat(t) * rat(t), rat(t), rat(t) * rat(t) * rat(t)};
    Point cur = base;
    // lift through the align chain
    std::vector<int> pathv = tree.path(ar.chart_id);
    bool ok = true;
    for (size_t i = 1; i < pathv.size(); ++i) {
      auto up = lift_once(tree, pathv[i], cur);
      REQUIRE(up.has_value());
      cur = *up;
    }
    CHECK(cur[0] == 0);
    CHECK(cur[2] == 0);
    CHECK(ok);
  }
}
