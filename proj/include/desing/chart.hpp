#pragma once

// Affine charts of the blow-up tower.  Charts form a tree; each non-root
// chart stores the substitution expressing its parent's coordinates in its
// own.  Rational points move along the tree: pushing down to an ancestor is
// evaluation, lifting up is division by the pivot (defined away from the
// center), and sibling charts of one blow-up are glued by the projective
// cross map on the exceptional fiber.

#include "desing/error.hpp"
#include "desing/poly.hpp"

#include <optional>
#include <vector>

namespace desing {

using Point = std::vector<Rat>;

enum class ChartKind { Root, Align, BlowStd, BlowRees, Register };

struct Chart {
  int id = 0;
  int parent = -1;
  int birth_step = -1;
  Context ctx;
  ChartKind kind = ChartKind::Root;
  std::vector<Poly> subst;      // parent var i as a polynomial in this chart
  std::vector<Poly> inv_subst;  // Align only: this chart's var j in parent coords
  std::vector<int> center_vars;  // BlowStd/BlowRees: substituted variable indices
  int pivot = -1;                // BlowStd: index of the pivot variable
  Poly rees_g;                   // BlowRees: the smooth non-variable generator
};

struct ChartTree {
  std::vector<Chart> charts;

  int add(Chart c) {
    c.id = static_cast<int>(charts.size());
    charts.push_back(std::move(c));
    return charts.back().id;
  }

  const Chart& at(int id) const { return charts[static_cast<size_t>(id)]; }

  std::vector<int> path(int id) const {  // root first
    std::vector<int> p;
    for (int cur = id; cur >= 0; cur = at(cur).parent) p.push_back(cur);
    std::reverse(p.begin(), p.end());
    return p;
  }
};

inline int make_root_chart(ChartTree& tree, Context ctx) {
  Chart c;
  c.ctx = std::move(ctx);
  c.kind = ChartKind::Root;
  c.birth_step = 0;
  return tree.add(c);
}

// One step down: the point's image in the parent chart.
inline Point push_once(const ChartTree& tree, int chart_id, const Point& p) {
  const Chart& c = tree.at(chart_id);
  ensure(c.parent >= 0, Errc::Internal, "push from root chart");
  Point out(c.subst.size());
  for (size_t i = 0; i < c.subst.size(); ++i) out[i] = c.subst[i].eval(p);
  return out;
}

// Image in the given ancestor chart (ancestor_id on the root path).
inline Point push_to(const ChartTree& tree, int chart_id, Point p, int ancestor_id) {
  int cur = chart_id;
  while (cur != ancestor_id) {
    p = push_once(tree, cur, p);
    cur = tree.at(cur).parent;
    ensure(cur >= 0 || cur == ancestor_id, Errc::Internal, "not an ancestor chart");
  }
  return p;
}

inline Point push_to_root(const ChartTree& tree, int chart_id, Point p) {
  int cur = chart_id;
  while (tree.at(cur).parent >= 0) {
    p = push_once(tree, cur, p);
    cur = tree.at(cur).parent;
  }
  return p;
}

// One step up: the unique preimage in the child chart, when it exists.
inline std::optional<Point> lift_once(const ChartTree& tree, int child_id, const Point& p) {
  const Chart& c = tree.at(child_id);
  switch (c.kind) {
    case ChartKind::Root:
      fail(Errc::Internal, "lift into root chart");
    case ChartKind::Register:
      return p;
    case ChartKind::Align: {
      Point out(c.inv_subst.size());
      for (size_t j = 0; j < c.inv_subst.size(); ++j) out[j] = c.inv_subst[j].eval(p);
      return out;
    }
    case ChartKind::BlowStd: {
      Rat v = p[static_cast<size_t>(c.pivot)];
      if (v == 0) return std::nullopt;  // on the center / exceptional fiber
      Point out = p;
      for (int j : c.center_vars)
        if (j != c.pivot) out[static_cast<size_t>(j)] = p[static_cast<size_t>(j)] / v;
      return out;
    }
    case ChartKind::BlowRees: {
      Rat gv = c.rees_g.eval(p);
      if (gv == 0) return std::nullopt;
      Point out = p;
      for (int j : c.center_vars) out[static_cast<size_t>(j)] = p[static_cast<size_t>(j)] / gv;
      return out;
    }
  }
  return std::nullopt;
}

inline bool std_siblings(const Chart& a, const Chart& b) {
  return a.kind == ChartKind::BlowStd && b.kind == ChartKind::BlowStd &&
         a.parent == b.parent && a.birth_step == b.birth_step &&
         a.center_vars == b.center_vars && a.pivot != b.pivot;
}

// Glue between sibling charts of one blow-up: coordinates are the projective
// ratios normalized by the respective pivots.  Defined iff the target pivot
// ratio is nonzero; otherwise the point is invisible in the target chart.
inline std::optional<Point> cross_sibling(const Chart& from, const Point& p, const Chart& to) {
  assert(std_siblings(from, to));
  int k = from.pivot, l = to.pivot;
  Rat pl = p[static_cast<size_t>(l)];
  if (pl == 0) return std::nullopt;
  Point q = p;
  q[static_cast<size_t>(l)] = p[static_cast<size_t>(k)] * pl;
  q[static_cast<size_t>(k)] = Rat(1) / pl;
  for (int j : from.center_vars)
    if (j != k && j != l) q[static_cast<size_t>(j)] = p[static_cast<size_t>(j)] / pl;
  return q;
}

enum class Transfer { Ok, Outside, Undecided };

// Re-express a point of chart `from` in the coordinates of chart `to`.
// Outside: the point provably does not lie in the target chart's image.
inline Transfer transfer_point(const ChartTree& tree, int from, const Point& p, int to,
                               Point* out) {
  if (from == to) {
    *out = p;
    return Transfer::Ok;
  }
  std::vector<int> pf = tree.path(from), pt = tree.path(to);
  size_t L = 0;
  while (L < pf.size() && L < pt.size() && pf[L] == pt[L]) ++L;
  ensure(L >= 1, Errc::Internal, "charts in different trees");
  // representations of p along the from-path, downward
  std::vector<Point> reps(pf.size());
  reps[pf.size() - 1] = p;
  for (size_t i = pf.size() - 1; i > L - 1; --i)
    reps[i - 1] = push_once(tree, pf[i], reps[i]);
  Point cur = reps[L - 1];
  for (size_t i = L; i < pt.size(); ++i) {
    auto lifted = lift_once(tree, pt[i], cur);
    if (!lifted) {
      if (i == L && L < pf.size() && std_siblings(tree.at(pf[L]), tree.at(pt[L]))) {
        auto crossed = cross_sibling(tree.at(pf[L]), reps[L], tree.at(pt[L]));
        if (!crossed) return Transfer::Outside;
        cur = *crossed;
        continue;
      }
      return Transfer::Undecided;
    }
    cur = *lifted;
  }
  *out = cur;
  return Transfer::Ok;
}

enum class Trilean { True, False, Unknown };

inline Trilean same_point(const ChartTree& tree, int c1, const Point& p1, int c2,
                          const Point& p2) {
  if (c1 == c2) return p1 == p2 ? Trilean::True : Trilean::False;
  if (push_to_root(tree, c1, p1) != push_to_root(tree, c2, p2)) return Trilean::False;
  Point q;
  switch (transfer_point(tree, c1, p1, c2, &q)) {
    case Transfer::Ok: return q == p2 ? Trilean::True : Trilean::False;
    case Transfer::Outside: return Trilean::False;
    case Transfer::Undecided: break;
  }
  switch (transfer_point(tree, c2, p2, c1, &q)) {
    case Transfer::Ok: return q == p1 ? Trilean::True : Trilean::False;
    case Transfer::Outside: return Trilean::False;
    case Transfer::Undecided: return Trilean::Unknown;
  }
  return Trilean::Unknown;
}

}  // namespace desing
