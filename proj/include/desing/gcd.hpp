#pragma once

// Multivariate polynomial gcd over Q via the primitive PRS, recursing on the
// highest variable that actually occurs.  Results are Z-primitive with
// positive leading coefficient.

#include "desing/poly.hpp"

#include <vector>

namespace desing {

inline Poly coeff_in_var(const Poly& f, int v, int k) {
  std::vector<Term> out;
  for (const Term& t : f.terms()) {
    if (t.mono[v] != k) continue;
    Monomial m = t.mono;
    m[v] = 0;
    out.push_back({std::move(m), t.coeff});
  }
  return Poly::from_terms(f.ctx(), std::move(out));
}

inline Poly shift_in_var(const Poly& f, int v, int k) {
  std::vector<Term> out;
  for (const Term& t : f.terms()) {
    Monomial m = t.mono;
    m[v] += k;
    out.push_back({std::move(m), t.coeff});
  }
  return Poly::from_terms(f.ctx(), std::move(out));
}

inline int highest_var(const Poly& f) {
  int best = -1;
  for (const Term& t : f.terms())
    for (size_t i = 0; i < t.mono.size(); ++i)
      if (t.mono[i] > 0) best = std::max(best, static_cast<int>(i));
  return best;
}

Poly poly_gcd(const Poly& f, const Poly& g);

// gcd of the coefficients of f viewed as univariate in v.
inline Poly content_in_var(const Poly& f, int v) {
  Poly acc = Poly::zero(f.ctx());
  for (int k = 0; k <= f.degree_in(v); ++k) {
    Poly c = coeff_in_var(f, v, k);
    if (!c.is_zero()) acc = poly_gcd(acc, c);
    if (acc.is_constant() && !acc.is_zero()) break;
  }
  return acc;
}

// Pseudo-remainder of f by g with respect to variable v.
inline Poly pseudo_rem(Poly f, const Poly& g, int v) {
  int dg = g.degree_in(v);
  Poly lcg = coeff_in_var(g, v, dg);
  while (!f.is_zero() && f.degree_in(v) >= dg) {
    int df = f.degree_in(v);
    Poly lcf = coeff_in_var(f, v, df);
    f = lcg * f - shift_in_var(lcf, v, df - dg) * g;
  }
  return f;
}

inline Poly poly_gcd(const Poly& f, const Poly& g) {
  if (f.is_zero()) return g.normalized();
  if (g.is_zero()) return f.normalized();
  if (f.is_constant() || g.is_constant()) return Poly::constant(f.ctx(), Rat(1));
  int v = std::max(highest_var(f), highest_var(g));
  if (!f.depends_on(v) || !g.depends_on(v)) {
    // v occurs in only one of them: gcd divides the content of that one.
    const Poly& with = f.depends_on(v) ? f : g;
    const Poly& without = f.depends_on(v) ? g : f;
    return poly_gcd(content_in_var(with, v), without);
  }
  Poly cf = content_in_var(f, v);
  Poly cg = content_in_var(g, v);
  Poly a = *f.divide_exact(cf);
  Poly b = *g.divide_exact(cg);
  if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);
  while (!b.is_zero()) {
    Poly r = pseudo_rem(a, b, v);
    a = std::move(b);
    if (r.is_zero()) {
      b = r;
    } else {
      Poly cr = content_in_var(r, v);
      b = *r.divide_exact(cr);
      b = b.normalized();
    }
  }
  if (a.degree_in(v) == 0) a = Poly::constant(f.ctx(), Rat(1));
  return (poly_gcd(cf, cg) * a.normalized()).normalized();
}

inline Poly poly_gcd_many(const std::vector<Poly>& fs) {
  Poly acc = fs.empty() ? Poly() : Poly::zero(fs[0].ctx());
  for (const Poly& f : fs) {
    acc = poly_gcd(acc, f);
    if (acc.is_constant() && !acc.is_zero()) break;
  }
  return acc;
}

// Product of the distinct irreducible factors (characteristic zero).
inline Poly squarefree_part(const Poly& f) {
  if (f.is_zero() || f.is_constant()) return f.normalized();
  Poly rep = f;
  for (size_t i = 0; i < f.nvars(); ++i) {
    Poly d = f.derivative(static_cast<int>(i));
    rep = poly_gcd(rep, d);
    if (rep.is_constant()) break;
  }
  // rep = product of p_i^(e_i - 1)
  if (rep.is_constant()) return f.normalized();
  return f.divide_exact(rep)->normalized();
}

}  // namespace desing
