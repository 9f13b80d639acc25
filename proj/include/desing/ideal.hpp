#pragma once

// Ideals in an affine chart, the derivative operator Δ, and derived data:
// singular loci V(Δ^(b-1)J), maximal order of vanishing, generator gcd.

#include "desing/error.hpp"
#include "desing/gcd.hpp"
#include "desing/groebner.hpp"
#include "desing/poly.hpp"

#include <vector>

namespace desing {

struct Ideal {
  Context ctx;
  std::vector<Poly> gens;  // nonzero

  bool is_zero() const { return gens.empty(); }
};

inline Ideal make_ideal(Context ctx, std::vector<Poly> gens) {
  Ideal I{std::move(ctx), {}};
  for (Poly& g : gens)
    if (!g.is_zero()) I.gens.push_back(g.normalized());
  return I;
}

inline Ideal unit_ideal(Context ctx) {
  Ideal I{ctx, {Poly::constant(ctx, Rat(1))}};
  return I;
}

inline bool is_unit(const Ideal& I) {
  for (const Poly& g : I.gens)
    if (g.is_constant() && !g.is_zero()) return true;
  return is_unit_ideal(I.gens);
}

// ord_x(I) = min over generators of the vanishing order at x; -1 when I = 0.
inline int order_at(const Ideal& I, const std::vector<Rat>& point) {
  int best = -1;
  for (const Poly& g : I.gens) {
    int o = g.order_at(point);
    if (o >= 0 && (best < 0 || o < best)) best = o;
    if (best == 0) break;
  }
  return best;
}

// Order at the generic point of the coordinate subspace V(x_i : i in vars):
// minimal degree of the generators in those variables.
inline int order_in_vars(const Ideal& I, const std::vector<int>& vars) {
  int best = -1;
  for (const Poly& g : I.gens) {
    int o = g.order_in_vars(vars);
    if (o >= 0 && (best < 0 || o < best)) best = o;
    if (best == 0) break;
  }
  return best;
}

// Δ(I): I together with all first partials of its generators.
inline Ideal delta(const Ideal& I) {
  std::vector<Poly> out = I.gens;
  for (const Poly& g : I.gens)
    for (size_t v = 0; v < g.nvars(); ++v) {
      Poly d = g.derivative(static_cast<int>(v));
      if (!d.is_zero()) out.push_back(d.normalized());
    }
  return make_ideal(I.ctx, std::move(out));
}

// Δ^k with Groebner interreduction between steps to keep generators small.
inline Ideal delta_power(const Ideal& I, int k) {
  Ideal cur = I;
  for (int i = 0; i < k; ++i) {
    cur = delta(cur);
    cur.gens = groebner(cur.gens);
    if (is_unit_ideal_gb(cur.gens)) return unit_ideal(I.ctx);
  }
  return cur;
}

// Sing(J, b) = V(Δ^(b-1) J): points of order ≥ b.
inline Ideal sing_ideal(const Ideal& J, int b) {
  ensure(b >= 1, Errc::Internal, "sing_ideal needs b >= 1");
  return delta_power(J, b - 1);
}

// max over the chart of ord_x(J) = least k with Δ^k(J) = (1).
inline int max_order(const Ideal& J) {
  ensure(!J.is_zero(), Errc::ZeroIdeal, "max order of the zero ideal is infinite");
  Ideal cur = J;
  for (int k = 0;; ++k) {
    if (is_unit(cur)) return k;
    cur = delta(cur);
    cur.gens = groebner(cur.gens);
  }
}

inline Poly gcd_all(const Ideal& I) { return poly_gcd_many(I.gens); }

}  // namespace desing
