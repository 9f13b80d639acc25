#pragma once
// Geometric component counting for blowup centers, with cross-chart
// deduplication.  Counts are over the algebraic closure; a piece whose
// component structure cannot be certified is flagged inexact rather than
// guessed.

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "blowup.hpp"
#include "chart.hpp"
#include "error.hpp"
#include "gcd.hpp"
#include "groebner.hpp"
#include "ideal.hpp"
#include "poly.hpp"

namespace desing {

struct ComponentCount {
  long long count = 1;
  bool exact = true;
};

// One chart-local slice of a center: the ideal as aligned by align_center,
// kept together with the chart it lives in.  Pieces sharing a nonnegative
// group id are chart views of one global locus whose component count may be
// certified structurally (group_count) rather than geometrically.
struct CenterPiece {
  int chart = 0;
  std::vector<Poly> gens;    // chart-local ideal of the piece
  Center aligned;            // coordinate form: vars + optional smooth residual
  int group = -1;
  ComponentCount group_count{0, false};
};

// Image of a chart-local closed set in root coordinates, by eliminating the
// chart variables from the graph of the chart-to-root substitution.
inline std::vector<Poly> root_image(const ChartTree& tree, int chart,
                                    const std::vector<Poly>& gens) {
  const Context root_ctx = tree.at(tree.path(chart).front()).ctx;
  if (tree.at(chart).parent < 0) {
    std::vector<Poly> out;
    for (const Poly& g : gens) out.push_back(g.normalized());
    return out;
  }
  // Root var i written in chart coordinates.
  std::vector<int> path = tree.path(chart);
  std::vector<Poly> expr;
  for (size_t i = 0; i < root_ctx->size(); ++i)
    expr.push_back(Poly::variable(root_ctx, static_cast<int>(i)));
  for (size_t step = 1; step < path.size(); ++step) {
    const Chart& c = tree.at(path[step]);
    for (Poly& e : expr) e = e.substitute(c.ctx, c.subst);
  }
  const Context cctx = tree.at(chart).ctx;
  size_t n = cctx->size();
  std::vector<std::string> names;
  for (const std::string& v : *cctx) names.push_back("_c" + v);
  for (const std::string& v : *root_ctx) names.push_back(v);
  Context big = make_context(std::move(names));
  std::vector<Poly> sys;
  for (const Poly& g : gens) sys.push_back(embed_shift(g, big, 0));
  for (size_t i = 0; i < root_ctx->size(); ++i) {
    Poly rv = Poly::variable(big, static_cast<int>(n + i));
    sys.push_back(rv - embed_shift(expr[i], big, 0));
  }
  std::vector<Poly> elim = eliminate_front(sys, static_cast<int>(n));
  std::vector<Poly> out;
  for (const Poly& g : elim) {
    Poly p = project_shift(g, root_ctx, static_cast<int>(n)).normalized();
    if (!p.is_zero()) out.push_back(p);
  }
  return out;
}

// Rational roots of a univariate polynomial (in variable v), with the
// unfactored remainder.  Uses the rational root bound on integer-normalized
// coefficients.
struct RationalRoots {
  std::vector<Rat> roots;    // with multiplicity collapsed (distinct roots)
  Poly leftover;             // product of irrational factors (or constant)
};

inline RationalRoots rational_roots(Poly g, int v) {
  RationalRoots rr{{}, g};
  if (g.is_zero() || g.is_constant()) return rr;
  Poly x = Poly::variable(g.ctx(), v);
  for (;;) {
    g = g.normalized();  // integer coprime coefficients
    int d = g.degree_in(v);
    if (d <= 0) break;
    std::vector<Rat> coef(static_cast<size_t>(d) + 1, Rat(0));
    for (const Term& t : g.terms()) coef[static_cast<size_t>(t.mono[static_cast<size_t>(v)])] = t.coeff;
    Int a0 = numerator(coef[0]);
    Int ad = numerator(coef[static_cast<size_t>(d)]);
    std::vector<Rat> cands;
    if (a0 == 0) {
      cands.push_back(Rat(0));
    } else {
      Int aa = a0 < 0 ? Int(-a0) : a0, bb = ad < 0 ? Int(-ad) : ad;
      if (aa > 100000 || bb > 100000) break;  // give up, keep the leftover
      for (Int p = 1; p <= aa; ++p) {
        if (aa % p != 0) continue;
        for (Int q = 1; q <= bb; ++q) {
          if (bb % q != 0) continue;
          cands.push_back(Rat(p, q));
          cands.push_back(Rat(-p, q));
        }
      }
    }
    Rat root;
    bool hit = false;
    for (const Rat& r : cands) {
      Point pt(g.nvars(), Rat(0));
      pt[static_cast<size_t>(v)] = r;
      if (g.eval(pt) == 0) {
        root = r;
        hit = true;
        break;
      }
    }
    if (!hit) break;
    rr.roots.push_back(root);
    Poly lin = x - Poly::constant(g.ctx(), root);
    // divide out the full multiplicity of this root
    for (;;) {
      auto q = g.divide_exact(lin);
      if (!q) break;
      g = *q;
    }
  }
  rr.leftover = g.normalized();
  return rr;
}

// Absolute irreducibility certificate.  A polynomial of total degree one,
// or of degree one in some variable whose coefficient and remainder are
// coprime, is irreducible over every field extension.  Returning false is
// not a claim of reducibility, only the absence of a certificate.
inline bool certified_absolutely_irreducible(const Poly& f) {
  if (f.is_zero() || f.is_constant()) return false;
  if (f.degree() == 1) return true;
  for (size_t v = 0; v < f.ctx()->size(); ++v) {
    int vv = static_cast<int>(v);
    if (f.degree_in(vv) != 1) continue;
    Poly a = f.derivative(vv);
    Poly b = f - a * Poly::variable(f.ctx(), vv);
    if (poly_gcd(a, b).is_constant()) return true;
  }
  return false;
}

// Component count of a single aligned piece.  Coordinate subspace: one
// component.  One smooth residual equation depending on a single variable:
// its distinct roots (degree of the squarefree part).  A wider residual with
// an irreducibility certificate: one component.  Anything else is a flagged
// lower bound.
inline ComponentCount count_aligned_piece(const Center& c, const Context& ctx) {
  if (!c.has_extra()) return {1, true};
  int used = -1, nused = 0;
  for (size_t v = 0; v < ctx->size(); ++v)
    if (c.extra.depends_on(static_cast<int>(v))) {
      used = static_cast<int>(v);
      ++nused;
    }
  if (nused == 0) return {1, true};
  if (nused == 1) {
    Poly sf = squarefree_part(c.extra);
    return {static_cast<long long>(sf.degree_in(used)), true};
  }
  if (certified_absolutely_irreducible(squarefree_part(c.extra))) return {1, true};
  return {1, false};
}

namespace detail {

// Rational points of a zero-dimensional aligned piece, when every root is
// rational; nullopt when an irrational factor remains.
inline std::optional<std::vector<Point>> piece_points(const CenterPiece& pc,
                                                      const Context& ctx) {
  size_t n = ctx->size();
  if (!pc.aligned.has_extra()) {
    if (pc.aligned.vars.size() != n) return std::nullopt;
    return std::vector<Point>{Point(n, Rat(0))};
  }
  if (pc.aligned.vars.size() + 1 != n) return std::nullopt;
  int freev = -1;
  std::vector<bool> fixed(n, false);
  for (int v : pc.aligned.vars) fixed[static_cast<size_t>(v)] = true;
  for (size_t v = 0; v < n; ++v)
    if (!fixed[v]) freev = static_cast<int>(v);
  if (freev < 0 || !pc.aligned.extra.depends_on(freev)) return std::nullopt;
  RationalRoots rr = rational_roots(pc.aligned.extra, freev);
  if (!rr.leftover.is_constant()) return std::nullopt;
  std::vector<Point> pts;
  for (const Rat& r : rr.roots) {
    Point p(n, Rat(0));
    p[static_cast<size_t>(freev)] = r;
    pts.push_back(std::move(p));
  }
  return pts;
}

// Reciprocal comparison for pieces on the exceptional fiber seen from two
// standard sibling charts: fiber coordinates are related by u -> 1/u.
// Returns the size of the union when decidable.
inline std::optional<long long> reciprocal_union(const Poly& ga, int va,
                                                 const Poly& gb, int vb) {
  Poly a = squarefree_part(ga), b = squarefree_part(gb);
  int da = a.degree_in(va), db = b.degree_in(vb);
  if (da <= 0 || db <= 0) return std::nullopt;
  std::vector<Rat> ca(static_cast<size_t>(da) + 1, Rat(0));
  std::vector<Rat> cb(static_cast<size_t>(db) + 1, Rat(0));
  for (const Term& t : a.terms()) ca[static_cast<size_t>(t.mono[static_cast<size_t>(va)])] = t.coeff;
  for (const Term& t : b.terms()) cb[static_cast<size_t>(t.mono[static_cast<size_t>(vb)])] = t.coeff;
  // strip roots at 0 (the point the sibling chart sees at infinity)
  size_t sa = 0, sb = 0;
  while (sa < ca.size() && ca[sa] == 0) ++sa;
  while (sb < cb.size() && cb[sb] == 0) ++sb;
  std::vector<Rat> a0(ca.begin() + static_cast<long>(sa), ca.end());
  std::vector<Rat> b0(cb.begin() + static_cast<long>(sb), cb.end());
  std::vector<Rat> arev(a0.rbegin(), a0.rend());
  // proportional?
  if (arev.size() != b0.size()) return std::nullopt;
  Rat scale;
  bool have = false;
  for (size_t i = 0; i < b0.size(); ++i) {
    if ((arev[i] == 0) != (b0[i] == 0)) return std::nullopt;
    if (b0[i] == 0) continue;
    Rat s = arev[i] / b0[i];
    if (!have) {
      scale = s;
      have = true;
    } else if (s != scale) {
      return std::nullopt;
    }
  }
  if (!have) return std::nullopt;
  long long core = static_cast<long long>(a0.size()) - 1;
  return core + (sa > 0 ? 1 : 0) + (sb > 0 ? 1 : 0);
}

}  // namespace detail

// Count the geometric components of a center presented as chart-local
// pieces, deduplicating pieces that describe the same locus from different
// charts.  Throws nothing; undecidable identifications flag the result.
inline ComponentCount count_center_components(const ChartTree& tree,
                                              const std::vector<CenterPiece>& pieces) {
  size_t n = pieces.size();
  if (n == 0) return {0, true};
  std::vector<ComponentCount> local;
  std::vector<std::vector<Poly>> roots;
  for (const CenterPiece& pc : pieces) {
    local.push_back(count_aligned_piece(pc.aligned, tree.at(pc.chart).ctx));
    roots.push_back(root_image(tree, pc.chart, pc.gens));
  }
  std::vector<size_t> group(n);
  for (size_t i = 0; i < n; ++i) group[i] = i;
  bool exact = true;

  auto merge = [&](size_t i, size_t j) {
    size_t gi = group[i], gj = group[j];
    for (size_t k = 0; k < n; ++k)
      if (group[k] == gj) group[k] = gi;
  };

  // structurally tagged pieces are views of one locus by construction
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (pieces[i].group >= 0 && pieces[i].group == pieces[j].group) merge(i, j);

  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      if (group[i] == group[j]) continue;
      const CenterPiece& a = pieces[i];
      const CenterPiece& b = pieces[j];
      if (a.chart == b.chart) {
        if (locus_equal(a.gens, b.gens)) merge(i, j);
        continue;
      }
      bool root_eq = locus_equal(roots[i], roots[j]);
      if (!root_eq) {
        // disjoint or genuinely different; overlap without equality is not
        // decidable as a clean merge
        std::vector<Poly> both = roots[i];
        both.insert(both.end(), roots[j].begin(), roots[j].end());
        if (!is_unit_ideal(both)) exact = false;
        continue;
      }
      // same root image: equal pieces, or distinct pieces contracted to the
      // same image; decide by points when rational, by the reciprocal rule
      // for sibling fiber pieces, otherwise flag
      auto pa = detail::piece_points(a, tree.at(a.chart).ctx);
      auto pb = detail::piece_points(b, tree.at(b.chart).ctx);
      if (pa && pb) {
        bool all_same = pa->size() == pb->size();
        bool any_unknown = false;
        if (all_same) {
          for (const Point& p : *pa) {
            bool hit = false;
            for (const Point& q : *pb) {
              Trilean t = same_point(tree, a.chart, p, b.chart, q);
              if (t == Trilean::Unknown) any_unknown = true;
              if (t == Trilean::True) {
                hit = true;
                break;
              }
            }
            if (!hit) all_same = false;
          }
        }
        if (any_unknown) {
          exact = false;
        } else if (all_same) {
          merge(i, j);
        }
        continue;
      }
      // Positive-dimensional pieces: two certified-irreducible pieces in
      // different charts that map onto the same locus without dropping
      // dimension are views of one component, because chart-to-root maps
      // are isomorphisms off the exceptional locus and exceptional pieces
      // always lose dimension.
      if (local[i].exact && local[i].count == 1 && local[j].exact &&
          local[j].count == 1) {
        int da = gb_dimension(a.gens);
        int db = gb_dimension(b.gens);
        int dr = roots[i].empty()
                     ? static_cast<int>(tree.at(tree.path(a.chart).front()).ctx->size())
                     : gb_dimension(roots[i]);
        if (da >= 1 && da == db && da == dr) {
          merge(i, j);
          continue;
        }
      }
      const Chart& ca = tree.at(a.chart);
      const Chart& cb = tree.at(b.chart);
      if (std_siblings(ca, cb) && a.aligned.has_extra() && b.aligned.has_extra()) {
        int va = -1, vb = -1, cnta = 0, cntb = 0;
        for (size_t v = 0; v < ca.ctx->size(); ++v) {
          if (a.aligned.extra.depends_on(static_cast<int>(v))) {
            va = static_cast<int>(v);
            ++cnta;
          }
          if (b.aligned.extra.depends_on(static_cast<int>(v))) {
            vb = static_cast<int>(v);
            ++cntb;
          }
        }
        if (cnta == 1 && cntb == 1 && va == cb.pivot && vb == ca.pivot) {
          auto u = detail::reciprocal_union(a.aligned.extra, va, b.aligned.extra, vb);
          if (u) {
            // treat as one merged group with the union count attached to i
            merge(i, j);
            local[i] = {*u, local[i].exact && local[j].exact};
            local[j] = {0, true};
            continue;
          }
        }
      }
      exact = false;
    }

  long long total = 0;
  std::vector<bool> seen(n, false);
  for (size_t i = 0; i < n; ++i) {
    if (seen[group[i]]) continue;
    seen[group[i]] = true;
    const ComponentCount* certified = nullptr;
    for (size_t j = 0; j < n; ++j)
      if (group[j] == group[i] && pieces[j].group_count.exact)
        certified = &pieces[j].group_count;
    if (certified) {
      total += certified->count;
      continue;
    }
    long long best = 0;
    size_t members = 0, tagged = 0;
    for (size_t j = 0; j < n; ++j)
      if (group[j] == group[i]) {
        best = std::max(best, local[j].count);
        exact = exact && local[j].exact;
        ++members;
        if (pieces[j].group >= 0) ++tagged;
      }
    // a tag-only merge never verified that every chart sees every component
    if (members > 1 && tagged > 1) exact = false;
    total += best;
  }
  return {total, exact};
}

}  // namespace desing
