#pragma once

// Center alignment and blow-up chart construction.
//
// A permissible center is brought to the form V(x_i : i in vars) or
// V(x_i ... , g) with g smooth and independent of the aligned variables, by a
// triangular polynomial change of coordinates recorded as an Align chart.
// Standard blow-ups then create one chart per aligned variable; centers with
// a residual generator g get the single Rees chart with pivot g (the variable
// pivots of that blow-up are not polynomial charts over the same variables,
// which we accept and flag: later centers never meet the missed directions).

#include "desing/chart.hpp"
#include "desing/error.hpp"
#include "desing/groebner.hpp"
#include "desing/ideal.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

namespace desing {

struct Center {
  std::vector<int> vars;  // aligned variable indices, ascending
  Poly extra;             // optional residual smooth generator (zero if none)

  bool has_extra() const { return !extra.is_zero(); }
  int codim() const { return static_cast<int>(vars.size()) + (has_extra() ? 1 : 0); }
};

struct AlignResult {
  int chart_id;   // chart in which the center is aligned (new Align chart or input)
  Center center;  // aligned form there
};

namespace detail {

// f = c*x_i + h with h free of x_i: returns (i, h/c)'s data.
struct LinearPivot {
  int var;
  Poly shift;  // h/c, free of var
  bool pure;   // h == 0
};

inline std::optional<LinearPivot> find_linear_pivot(const Poly& f,
                                                    const std::vector<bool>& banned,
                                                    const std::vector<bool>& preferred) {
  std::optional<LinearPivot> fallback;
  for (size_t i = 0; i < f.nvars(); ++i) {
    if (banned[i]) continue;
    Poly d = f.derivative(static_cast<int>(i));
    if (d.is_zero() || !d.is_constant()) continue;
    Rat c = d.terms()[0].coeff;
    Poly h = f - c * Poly::variable(f.ctx(), static_cast<int>(i));
    if (h.depends_on(static_cast<int>(i))) continue;
    LinearPivot p{static_cast<int>(i), (Rat(1) / c) * h, h.is_zero()};
    if (p.pure) return p;  // f is this variable up to scale: best case
    if (!fallback || (preferred[i] && !preferred[static_cast<size_t>(fallback->var)]))
      fallback = p;
  }
  return fallback;
}

}  // namespace detail

// Aligns V(center_gens) inside the given chart.  prefer_untouched lists
// variables whose rewriting we avoid when a choice exists (divisor view
// variables).  Throws NotAlignable when the locus is not a coordinate
// subspace optionally cut by one further smooth generator.
inline AlignResult align_center(ChartTree& tree, int chart_id,
                                const std::vector<Poly>& center_gens,
                                const std::vector<int>& prefer_untouched = {}) {
  Context ctx = tree.at(chart_id).ctx;  // copy: tree.add may reallocate
  size_t n = ctx->size();
  std::vector<bool> banned(n, false);
  std::vector<bool> preferred(n, true);
  for (int v : prefer_untouched) preferred[static_cast<size_t>(v)] = false;

  int cur_chart = chart_id;
  std::vector<Poly> gens = groebner(center_gens);
  ensure(!is_unit_ideal_gb(gens), Errc::PermissibilityViolation, "empty center");
  std::vector<int> vars;

  for (;;) {
    // pick the best pivot over all generators: pure first, then preferred
    std::optional<detail::LinearPivot> best;
    size_t best_gen = 0;
    for (size_t gi = 0; gi < gens.size(); ++gi) {
      auto p = detail::find_linear_pivot(gens[gi], banned, preferred);
      if (!p) continue;
      bool better = !best || (p->pure && !best->pure) ||
                    (p->pure == best->pure &&
                     preferred[static_cast<size_t>(p->var)] &&
                     !preferred[static_cast<size_t>(best->var)]);
      if (better) {
        best = p;
        best_gen = gi;
      }
    }
    if (!best) break;

    if (!best->pure) {
      // triangular change: new x_v = old x_v + shift, i.e. parent x_v = x_v - shift
      Chart ac;
      ac.parent = cur_chart;
      ac.birth_step = tree.at(cur_chart).birth_step;
      ac.ctx = ctx;
      ac.kind = ChartKind::Align;
      ac.subst.reserve(n);
      ac.inv_subst.reserve(n);
      for (size_t i = 0; i < n; ++i) {
        Poly xi = Poly::variable(ctx, static_cast<int>(i));
        if (static_cast<int>(i) == best->var) {
          ac.subst.push_back(xi - best->shift);
          ac.inv_subst.push_back(xi + best->shift);
        } else {
          ac.subst.push_back(xi);
          ac.inv_subst.push_back(xi);
        }
      }
      int new_chart = tree.add(std::move(ac));
      const std::vector<Poly>& sub = tree.at(new_chart).subst;
      for (Poly& g : gens) g = g.substitute(ctx, sub);
      cur_chart = new_chart;
    }

    vars.push_back(best->var);
    banned[static_cast<size_t>(best->var)] = true;
    // reduce the remaining generators modulo the extracted variable
    std::vector<Poly> next;
    for (size_t gi = 0; gi < gens.size(); ++gi) {
      if (gi == best_gen && best->pure) continue;
      std::vector<Poly> images;
      images.reserve(n);
      for (size_t i = 0; i < n; ++i)
        images.push_back(static_cast<int>(i) == best->var ? Poly::zero(ctx)
                                                          : Poly::variable(ctx, static_cast<int>(i)));
      Poly r = gens[gi].substitute(ctx, images);
      if (!r.is_zero() && !(r.is_constant())) next.push_back(r);
      ensure(!(r.is_constant() && !r.is_zero()), Errc::Internal,
             "center became empty during alignment");
    }
    gens = groebner(next);
    if (gens.empty()) break;
  }

  std::sort(vars.begin(), vars.end());
  Center center{vars, Poly()};
  if (!gens.empty()) {
    ensure(gens.size() == 1, Errc::NotAlignable,
           "center is not a coordinate subspace with at most one residual generator");
    Poly g = gens[0].normalized();
    for (int v : vars)
      ensure(!g.depends_on(v), Errc::Internal, "residual generator meets aligned variable");
    // g must cut a smooth hypersurface along the center:
    // V(vars, g, grad g) = ∅
    std::vector<Poly> sys;
    for (int v : vars) sys.push_back(Poly::variable(ctx, v));
    sys.push_back(g);
    bool has_grad = false;
    for (size_t i = 0; i < n; ++i) {
      Poly d = g.derivative(static_cast<int>(i));
      if (!d.is_zero()) {
        sys.push_back(d);
        has_grad = true;
      }
    }
    ensure(has_grad && is_unit_ideal(sys), Errc::NotAlignable,
           "residual generator not smooth on center");
    center.extra = g;
  }
  ensure(!center.vars.empty() || center.has_extra(), Errc::PermissibilityViolation,
         "center is the whole chart");
  return AlignResult{cur_chart, center};
}

// Standard blow-up at V(vars): one chart per pivot variable.
inline std::vector<int> blowup_std(ChartTree& tree, int chart_id,
                                   const std::vector<int>& center_vars, int step) {
  Context ctx = tree.at(chart_id).ctx;  // copy: tree.add may reallocate
  size_t n = ctx->size();
  std::vector<int> out;
  for (int k : center_vars) {
    Chart c;
    c.parent = chart_id;
    c.birth_step = step;
    c.ctx = ctx;
    c.kind = ChartKind::BlowStd;
    c.center_vars = center_vars;
    c.pivot = k;
    c.subst.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      Poly xi = Poly::variable(ctx, static_cast<int>(i));
      bool in_center = std::find(center_vars.begin(), center_vars.end(), static_cast<int>(i)) !=
                       center_vars.end();
      if (in_center && static_cast<int>(i) != k)
        c.subst.push_back(Poly::variable(ctx, k) * xi);
      else
        c.subst.push_back(xi);
    }
    out.push_back(tree.add(std::move(c)));
  }
  return out;
}

// Rees chart with pivot g for the center V(vars, g).
inline int blowup_rees(ChartTree& tree, int chart_id, const std::vector<int>& center_vars,
                       const Poly& g, int step) {
  Context ctx = tree.at(chart_id).ctx;  // copy: tree.add may reallocate
  size_t n = ctx->size();
  for (int v : center_vars)
    ensure(!g.depends_on(v), Errc::Internal, "rees pivot depends on center variable");
  Chart c;
  c.parent = chart_id;
  c.birth_step = step;
  c.ctx = ctx;
  c.kind = ChartKind::BlowRees;
  c.center_vars = center_vars;
  c.rees_g = g;
  c.subst.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    Poly xi = Poly::variable(ctx, static_cast<int>(i));
    bool in_center = std::find(center_vars.begin(), center_vars.end(), static_cast<int>(i)) !=
                     center_vars.end();
    c.subst.push_back(in_center ? Poly(g * xi) : xi);
  }
  return tree.add(std::move(c));
}

// The equation of the new exceptional divisor in a blow-up chart.
inline Poly exceptional_view(const Chart& c) {
  switch (c.kind) {
    case ChartKind::BlowStd: return Poly::variable(c.ctx, c.pivot);
    case ChartKind::BlowRees: return c.rees_g;
    default: fail(Errc::Internal, "chart has no exceptional divisor");
  }
}

inline Poly pullback(const ChartTree& tree, int child_id, const Poly& f) {
  const Chart& c = tree.at(child_id);
  return f.substitute(c.ctx, c.subst);
}

inline Ideal pullback_ideal(const ChartTree& tree, int child_id, const Ideal& I) {
  std::vector<Poly> gens;
  gens.reserve(I.gens.size());
  for (const Poly& g : I.gens) gens.push_back(pullback(tree, child_id, g));
  return make_ideal(tree.at(child_id).ctx, std::move(gens));
}

// J = h^a * J' with a maximal (generator-wise minimum of multiplicities).
inline int factor_out(Ideal& J, const Poly& h) {
  if (J.is_zero() || h.is_constant()) return 0;
  int a = -1;
  for (const Poly& g : J.gens) {
    a = (a < 0) ? g.factor_multiplicity(h) : std::min(a, g.factor_multiplicity(h));
    if (a == 0) return 0;
  }
  if (a <= 0) return 0;
  Poly ha = h.pow(a);
  for (Poly& g : J.gens) g = g.divide_exact(ha)->normalized();
  return a;
}

// Controlled division J / h^b; exact by permissibility, else diagnosed.
inline Ideal controlled_divide(const Ideal& J, const Poly& h, int b) {
  Poly hb = h.pow(b);
  std::vector<Poly> out;
  out.reserve(J.gens.size());
  for (const Poly& g : J.gens) {
    auto q = g.divide_exact(hb);
    ensure(q.has_value(), Errc::PermissibilityViolation,
           "controlled transform not divisible by the exceptional power");
    out.push_back(q->normalized());
  }
  return make_ideal(J.ctx, std::move(out));
}

// J = prod views[j]^a[j] * residual, exponents maximal, views pairwise
// non-associate.  Constant views contribute exponent 0.
struct MonomialDecomposition {
  std::vector<int> exponents;
  Ideal residual;
};

inline MonomialDecomposition monomial_decompose(Ideal J, const std::vector<Poly>& views) {
  MonomialDecomposition d{std::vector<int>(views.size(), 0), J};
  for (size_t j = 0; j < views.size(); ++j) {
    if (views[j].is_constant()) continue;
    d.exponents[j] = factor_out(d.residual, views[j]);
  }
  return d;
}

}  // namespace desing
