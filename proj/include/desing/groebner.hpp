#pragma once

// Buchberger-based toolkit: normal forms, reduced Groebner bases, elimination,
// saturation, radical membership, and Krull dimension of the quotient.
// Inputs are small (few variables, modest degrees), so the plain algorithm
// with the coprimality criterion is enough.

#include "desing/error.hpp"
#include "desing/poly.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <vector>

namespace desing {

// Grevlex, optionally preceded by an elimination block on the first `elim`
// variables (any monomial using a block variable is greater).
struct TermOrder {
  int elim = 0;

  bool greater(const Monomial& a, const Monomial& b) const {
    if (elim > 0) {
      int da = 0, db = 0;
      for (int i = 0; i < elim; ++i) da += a[i], db += b[i];
      if (da != db) return da > db;
      for (int i = elim; i-- > 0;) {
        int d = a[i] - b[i];
        if (d != 0) return d < 0;
      }
    }
    return grevlex_greater(a, b);
  }
};

inline size_t leading_index(const Poly& f, const TermOrder& ord) {
  assert(!f.is_zero());
  if (ord.elim == 0) return 0;  // stored order is grevlex
  size_t best = 0;
  for (size_t i = 1; i < f.terms().size(); ++i)
    if (ord.greater(f.terms()[i].mono, f.terms()[best].mono)) best = i;
  return best;
}

inline const Term& leading_term(const Poly& f, const TermOrder& ord) {
  return f.terms()[leading_index(f, ord)];
}

inline Poly normal_form(Poly p, const std::vector<Poly>& basis, const TermOrder& ord) {
  if (basis.empty()) return p;
  std::vector<Term> remainder;
  while (!p.is_zero()) {
    size_t li = leading_index(p, ord);
    const Term& lt = p.terms()[li];
    bool reduced = false;
    for (const Poly& g : basis) {
      const Term& lg = leading_term(g, ord);
      if (!monomial_divides(lg.mono, lt.mono)) continue;
      Poly factor = Poly::monomial(p.ctx(), monomial_div(lt.mono, lg.mono), lt.coeff / lg.coeff);
      p = p - factor * g;
      reduced = true;
      break;
    }
    if (!reduced) {
      remainder.push_back(lt);
      Poly drop = Poly::monomial(p.ctx(), lt.mono, lt.coeff);
      p = p - drop;
    }
  }
  return Poly::from_terms(p.ctx(), std::move(remainder));
}

inline Poly s_poly(const Poly& f, const Poly& g, const TermOrder& ord) {
  const Term& lf = leading_term(f, ord);
  const Term& lg = leading_term(g, ord);
  Monomial l = monomial_lcm(lf.mono, lg.mono);
  Poly a = Poly::monomial(f.ctx(), monomial_div(l, lf.mono), Rat(1) / lf.coeff);
  Poly b = Poly::monomial(g.ctx(), monomial_div(l, lg.mono), Rat(1) / lg.coeff);
  return a * f - b * g;
}

// Reduced Groebner basis, monic, sorted by decreasing leading monomial.
// Reduced bases are unique for a fixed order, so the result is deterministic.
inline std::vector<Poly> groebner(const std::vector<Poly>& gens, const TermOrder& ord = {}) {
  std::vector<Poly> basis;
  for (const Poly& f : gens)
    if (!f.is_zero()) basis.push_back(f.monic());
  std::deque<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = i + 1; j < basis.size(); ++j) pairs.emplace_back(i, j);
  while (!pairs.empty()) {
    auto [i, j] = pairs.front();
    pairs.pop_front();
    const Term& li = leading_term(basis[i], ord);
    const Term& lj = leading_term(basis[j], ord);
    if (monomial_lcm(li.mono, lj.mono) == monomial_mul(li.mono, lj.mono)) continue;
    Poly r = normal_form(s_poly(basis[i], basis[j], ord), basis, ord);
    if (r.is_zero()) continue;
    r = r.monic();
    for (size_t k = 0; k < basis.size(); ++k) pairs.emplace_back(k, basis.size());
    basis.push_back(std::move(r));
  }
  // interreduce
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t i = 0; i < basis.size(); ++i) {
      std::vector<Poly> rest;
      rest.reserve(basis.size() - 1);
      for (size_t k = 0; k < basis.size(); ++k)
        if (k != i) rest.push_back(basis[k]);
      Poly r = normal_form(basis[i], rest, ord);
      if (r == basis[i]) continue;
      changed = true;
      if (r.is_zero()) {
        basis.erase(basis.begin() + static_cast<long>(i));
        --i;
      } else {
        basis[i] = r.monic();
      }
    }
  }
  std::sort(basis.begin(), basis.end(), [&](const Poly& a, const Poly& b) {
    return ord.greater(leading_term(a, ord).mono, leading_term(b, ord).mono);
  });
  return basis;
}

inline bool in_ideal_gb(const Poly& f, const std::vector<Poly>& gb, const TermOrder& ord = {}) {
  return normal_form(f, gb, ord).is_zero();
}

inline bool is_unit_ideal_gb(const std::vector<Poly>& gb) {
  return gb.size() == 1 && gb[0].is_constant() && !gb[0].is_zero();
}

inline bool is_unit_ideal(const std::vector<Poly>& gens) {
  return is_unit_ideal_gb(groebner(gens));
}

// --- context extension helpers -------------------------------------------

inline std::string fresh_var_name(const Context& ctx, const std::string& stem) {
  std::string name = stem;
  int n = 0;
  while (var_index(ctx, name) >= 0) name = stem + std::to_string(n++);
  return name;
}

// New context with `extra` names prepended; monomials shift right.
inline Context prepend_vars(const Context& ctx, const std::vector<std::string>& extra) {
  std::vector<std::string> names = extra;
  names.insert(names.end(), ctx->begin(), ctx->end());
  return make_context(std::move(names));
}

inline Poly embed_shift(const Poly& f, const Context& big, int shift) {
  std::vector<Term> out;
  for (const Term& t : f.terms()) {
    Monomial m(big->size(), 0);
    for (size_t i = 0; i < t.mono.size(); ++i) m[i + shift] = t.mono[i];
    out.push_back({std::move(m), t.coeff});
  }
  return Poly::from_terms(big, std::move(out));
}

// Inverse of embed_shift for polynomials free of the first `shift` variables.
inline Poly project_shift(const Poly& f, const Context& small, int shift) {
  std::vector<Term> out;
  for (const Term& t : f.terms()) {
    Monomial m(small->size(), 0);
    for (size_t i = 0; i < small->size(); ++i) m[i] = t.mono[i + shift];
    out.push_back({std::move(m), t.coeff});
  }
  return Poly::from_terms(small, std::move(out));
}

inline bool uses_front_vars(const Poly& f, int k) {
  for (const Term& t : f.terms())
    for (int i = 0; i < k; ++i)
      if (t.mono[i] > 0) return true;
  return false;
}

// Generators of I ∩ Q[x_k, ..., x_n] (eliminating the first k variables).
inline std::vector<Poly> eliminate_front(const std::vector<Poly>& gens, int k) {
  std::vector<Poly> gb = groebner(gens, TermOrder{k});
  std::vector<Poly> out;
  for (const Poly& g : gb)
    if (!uses_front_vars(g, k)) out.push_back(g);
  return out;
}

// V(gens) ⊆ V(f), i.e. f vanishes on the locus of gens (radical membership).
inline bool locus_contained(const std::vector<Poly>& gens, const Poly& f) {
  if (f.is_zero()) return true;
  const Context& ctx = gens.empty() ? f.ctx() : gens[0].ctx();
  Context big = prepend_vars(ctx, {fresh_var_name(ctx, "_r")});
  std::vector<Poly> sys;
  for (const Poly& g : gens) sys.push_back(embed_shift(g, big, 1));
  Poly t = Poly::variable(big, 0);
  sys.push_back(Poly::constant(big, Rat(1)) - t * embed_shift(f, big, 1));
  return is_unit_ideal(sys);
}

// V(a) ⊆ V(b) componentwise, then equality as sets.
inline bool locus_contained_in(const std::vector<Poly>& a, const std::vector<Poly>& b) {
  for (const Poly& g : b)
    if (!locus_contained(a, g)) return false;
  return true;
}

inline bool locus_equal(const std::vector<Poly>& a, const std::vector<Poly>& b) {
  return locus_contained_in(a, b) && locus_contained_in(b, a);
}

inline bool ideal_equal(const std::vector<Poly>& a, const std::vector<Poly>& b) {
  std::vector<Poly> ga = groebner(a), gb = groebner(b);
  return ga == gb;
}

// I ∩ J via the one-tag trick: eliminate t from t·I + (1-t)·J.
inline std::vector<Poly> ideal_intersect(const std::vector<Poly>& a,
                                         const std::vector<Poly>& b) {
  if (a.empty() || b.empty()) return {};
  const Context& ctx = a[0].ctx();
  Context big = prepend_vars(ctx, {fresh_var_name(ctx, "_i")});
  Poly t = Poly::variable(big, 0);
  Poly one_minus_t = Poly::constant(big, Rat(1)) - t;
  std::vector<Poly> sys;
  for (const Poly& g : a) sys.push_back(t * embed_shift(g, big, 1));
  for (const Poly& g : b) sys.push_back(one_minus_t * embed_shift(g, big, 1));
  std::vector<Poly> elim = eliminate_front(sys, 1);
  std::vector<Poly> out;
  for (const Poly& g : elim) out.push_back(project_shift(g, ctx, 1).normalized());
  return out;
}

// I : f^∞ via the Rabinowitsch trick and elimination.
inline std::vector<Poly> saturate(const std::vector<Poly>& gens, const Poly& f) {
  ensure(!f.is_zero(), Errc::Internal, "saturation by zero");
  const Context& ctx = f.ctx();
  Context big = prepend_vars(ctx, {fresh_var_name(ctx, "_s")});
  std::vector<Poly> sys;
  for (const Poly& g : gens) sys.push_back(embed_shift(g, big, 1));
  Poly t = Poly::variable(big, 0);
  sys.push_back(Poly::constant(big, Rat(1)) - t * embed_shift(f, big, 1));
  std::vector<Poly> elim = eliminate_front(sys, 1);
  std::vector<Poly> out;
  for (const Poly& g : elim) out.push_back(project_shift(g, ctx, 1).normalized());
  return out;
}

// Krull dimension of V(gens): largest independent variable subset modulo the
// leading-term ideal.  Returns -1 for the empty locus.
inline int gb_dimension(const std::vector<Poly>& gens) {
  std::vector<Poly> gb = groebner(gens);
  if (is_unit_ideal_gb(gb)) return -1;
  size_t n = gb.empty() ? (gens.empty() ? 0 : gens[0].nvars()) : gb[0].nvars();
  if (gb.empty()) return static_cast<int>(n);
  std::vector<Monomial> lms;
  for (const Poly& g : gb) lms.push_back(g.leading().mono);
  int best = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    int size = __builtin_popcount(mask);
    if (size <= best) continue;
    bool independent = true;
    for (const Monomial& m : lms) {
      bool inside = true;
      for (size_t i = 0; i < n && inside; ++i)
        if (m[i] > 0 && !(mask & (1u << i))) inside = false;
      if (inside) {
        independent = false;
        break;
      }
    }
    if (independent) best = size;
  }
  return best;
}

}  // namespace desing
