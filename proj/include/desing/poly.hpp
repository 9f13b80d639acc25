#pragma once

// Multivariate polynomials over Q with a fixed ordered variable context.
// Terms are kept sorted in descending graded reverse lexicographic order
// (leading term first); no zero coefficients, no duplicate monomials.

#include "desing/rational.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace desing {

using VarList = std::vector<std::string>;
using Context = std::shared_ptr<const VarList>;

inline Context make_context(std::vector<std::string> vars) {
  return std::make_shared<const VarList>(std::move(vars));
}

inline bool same_context(const Context& a, const Context& b) {
  return a == b || (a && b && *a == *b);
}

inline int var_index(const Context& ctx, const std::string& name) {
  for (size_t i = 0; i < ctx->size(); ++i)
    if ((*ctx)[i] == name) return static_cast<int>(i);
  return -1;
}

// Exponent vector; length equals the context size.
using Monomial = std::vector<int>;

inline int total_degree(const Monomial& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

// true when a > b in grevlex: higher total degree wins; on ties the last
// nonzero entry of a-b is negative.
inline bool grevlex_greater(const Monomial& a, const Monomial& b) {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  for (size_t i = a.size(); i-- > 0;) {
    int d = a[i] - b[i];
    if (d != 0) return d < 0;
  }
  return false;
}

inline bool monomial_divides(const Monomial& a, const Monomial& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Monomial monomial_div(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    r[i] = a[i] - b[i];
    assert(r[i] >= 0);
  }
  return r;
}

inline Monomial monomial_lcm(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

struct Term {
  Monomial mono;
  Rat coeff;
};

class Poly {
 public:
  Poly() = default;
  explicit Poly(Context ctx) : ctx_(std::move(ctx)) {}

  static Poly zero(Context ctx) { return Poly(std::move(ctx)); }

  static Poly constant(Context ctx, const Rat& c) {
    Poly p(std::move(ctx));
    if (c != 0) p.terms_.push_back({Monomial(p.nvars(), 0), c});
    return p;
  }

  static Poly variable(Context ctx, int i) {
    Poly p(std::move(ctx));
    Monomial m(p.nvars(), 0);
    m[i] = 1;
    p.terms_.push_back({std::move(m), Rat(1)});
    return p;
  }

  static Poly monomial(Context ctx, Monomial m, const Rat& c) {
    Poly p(std::move(ctx));
    if (c != 0) p.terms_.push_back({std::move(m), c});
    return p;
  }

  // terms must be combined and nonzero; sorts into canonical order.
  static Poly from_terms(Context ctx, std::vector<Term> terms) {
    Poly p(std::move(ctx));
    p.terms_ = std::move(terms);
    std::sort(p.terms_.begin(), p.terms_.end(), [](const Term& a, const Term& b) {
      return grevlex_greater(a.mono, b.mono);
    });
    return p;
  }

  const Context& ctx() const { return ctx_; }
  size_t nvars() const { return ctx_ ? ctx_->size() : 0; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_[0].mono) == 0);
  }

  bool is_variable(int* index = nullptr) const {
    if (terms_.size() != 1 || terms_[0].coeff != 1) return false;
    const Monomial& m = terms_[0].mono;
    int found = -1;
    for (size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 1 && found < 0)
        found = static_cast<int>(i);
      else if (m[i] != 0)
        return false;
    }
    if (found < 0) return false;
    if (index) *index = found;
    return true;
  }

  const Term& leading() const {
    assert(!terms_.empty());
    return terms_[0];
  }

  int degree() const { return terms_.empty() ? -1 : total_degree(terms_[0].mono); }

  // Smallest total degree among terms: the order of vanishing at the origin.
  int order_at_origin() const {
    if (terms_.empty()) return -1;  // callers treat -1 as infinite order
    int best = total_degree(terms_[0].mono);
    for (const Term& t : terms_) best = std::min(best, total_degree(t.mono));
    return best;
  }

  int degree_in(int var) const {
    int d = 0;
    for (const Term& t : terms_) d = std::max(d, t.mono[var]);
    return d;
  }

  bool depends_on(int var) const {
    for (const Term& t : terms_)
      if (t.mono[var] > 0) return true;
    return false;
  }

  friend Poly operator-(const Poly& a) {
    Poly r(a.ctx_);
    r.terms_.reserve(a.terms_.size());
    for (const Term& t : a.terms_) r.terms_.push_back({t.mono, -t.coeff});
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
  friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    assert(same_context(a.ctx_, b.ctx_));
    if (a.is_zero() || b.is_zero()) return Poly(a.ctx_ ? a.ctx_ : b.ctx_);
    std::map<Monomial, Rat, decltype([](const Monomial& x, const Monomial& y) {
               return grevlex_greater(x, y);
             })>
        acc;
    for (const Term& s : a.terms_)
      for (const Term& t : b.terms_) {
        Monomial m = monomial_mul(s.mono, t.mono);
        auto [it, fresh] = acc.try_emplace(std::move(m), Rat(0));
        it->second += s.coeff * t.coeff;
      }
    Poly r(a.ctx_);
    for (auto& [m, c] : acc)
      if (c != 0) r.terms_.push_back({m, c});
    return r;
  }

  friend Poly operator*(const Rat& c, const Poly& a) {
    Poly r(a.ctx_);
    if (c == 0) return r;
    r.terms_.reserve(a.terms_.size());
    for (const Term& t : a.terms_) r.terms_.push_back({t.mono, c * t.coeff});
    return r;
  }

  Poly pow(int e) const {
    assert(e >= 0);
    Poly r = Poly::constant(ctx_, Rat(1));
    Poly base = *this;
    while (e > 0) {
      if (e & 1) r = r * base;
      base = (e >>= 1) ? base * base : base;
    }
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coeff != b.terms_[i].coeff)
        return false;
    return true;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly derivative(int var) const {
    Poly r(ctx_);
    for (const Term& t : terms_) {
      if (t.mono[var] == 0) continue;
      Monomial m = t.mono;
      Rat c = t.coeff * m[var];
      m[var] -= 1;
      r.terms_.push_back({std::move(m), std::move(c)});
    }
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const Term& a, const Term& b) { return grevlex_greater(a.mono, b.mono); });
    return r;
  }

  Rat eval(const std::vector<Rat>& point) const {
    assert(point.size() == nvars());
    Rat acc(0);
    for (const Term& t : terms_) {
      Rat v = t.coeff;
      for (size_t i = 0; i < point.size(); ++i)
        for (int k = 0; k < t.mono[i]; ++k) v *= point[i];
      acc += v;
    }
    return acc;
  }

  // Maps variable i of this context to images[i], a polynomial in the target
  // context.  The result lives in the target context.
  Poly substitute(const Context& target, const std::vector<Poly>& images) const {
    assert(images.size() == nvars());
    Poly acc = Poly::zero(target);
    // cache of images[i]^k
    std::vector<std::vector<Poly>> powers(images.size());
    auto power = [&](size_t i, int k) -> const Poly& {
      auto& cache = powers[i];
      if (cache.empty()) cache.push_back(Poly::constant(target, Rat(1)));
      while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * images[i]);
      return cache[k];
    };
    for (const Term& t : terms_) {
      Poly v = Poly::constant(target, t.coeff);
      for (size_t i = 0; i < images.size(); ++i)
        if (t.mono[i] > 0) v = v * power(i, t.mono[i]);
      acc = acc + v;
    }
    return acc;
  }

  // x_i -> x_i + c_i within the same context.
  Poly translate(const std::vector<Rat>& shift) const {
    std::vector<Poly> images;
    images.reserve(nvars());
    for (size_t i = 0; i < nvars(); ++i)
      images.push_back(Poly::variable(ctx_, static_cast<int>(i)) +
                       Poly::constant(ctx_, shift[i]));
    return substitute(ctx_, images);
  }

  // Order of vanishing at a rational point; -1 for the zero polynomial.
  int order_at(const std::vector<Rat>& point) const {
    if (is_zero()) return -1;
    std::vector<Rat> neg(point.size());
    for (size_t i = 0; i < point.size(); ++i) neg[i] = point[i];
    return translate(neg).order_at_origin();
  }

  // Minimal total degree counting only the given variables: the order along
  // the aligned coordinate subspace V(vars).
  int order_in_vars(const std::vector<int>& vars) const {
    if (is_zero()) return -1;
    int best = -1;
    for (const Term& t : terms_) {
      int d = 0;
      for (int v : vars) d += t.mono[v];
      if (best < 0 || d < best) best = d;
    }
    return best;
  }

  // Exact division by a single polynomial; nullopt when not divisible.
  std::optional<Poly> divide_exact(const Poly& g) const {
    assert(!g.is_zero());
    Poly rem = *this;
    std::vector<Term> quot;
    while (!rem.is_zero()) {
      const Term& lt = rem.leading();
      if (!monomial_divides(g.leading().mono, lt.mono)) return std::nullopt;
      Term q{monomial_div(lt.mono, g.leading().mono), lt.coeff / g.leading().coeff};
      quot.push_back(q);
      rem = rem - Poly::monomial(ctx_, q.mono, q.coeff) * g;
    }
    return Poly::from_terms(ctx_, std::move(quot));
  }

  // Largest k with g^k dividing this (0 when coprime); this must be nonzero.
  int factor_multiplicity(const Poly& g, Poly* residual = nullptr) const {
    assert(!is_zero() && !g.is_zero() && !g.is_constant());
    int k = 0;
    Poly cur = *this;
    for (;;) {
      auto q = cur.divide_exact(g);
      if (!q) break;
      cur = *q;
      ++k;
    }
    if (residual) *residual = cur;
    return k;
  }

  // Scales to integer coprime coefficients with positive leading coefficient.
  Poly normalized() const {
    if (is_zero()) return *this;
    Int l(1), g(0);
    for (const Term& t : terms_) l = int_lcm(l, rat_den(t.coeff));
    for (const Term& t : terms_) g = int_gcd(g, rat_num(t.coeff) * (l / rat_den(t.coeff)));
    Rat scale(l, g);
    if (leading().coeff < 0) scale = -scale;
    return scale * *this;
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return (Rat(1) / leading().coeff) * *this;
  }

  std::string str() const;

 private:
  static Poly merge(const Poly& a, const Poly& b, bool subtract) {
    assert(same_context(a.ctx_, b.ctx_) || a.ctx_ == nullptr || b.ctx_ == nullptr);
    Poly r(a.ctx_ ? a.ctx_ : b.ctx_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() ||
          (i < a.terms_.size() && grevlex_greater(a.terms_[i].mono, b.terms_[j].mono))) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || grevlex_greater(b.terms_[j].mono, a.terms_[i].mono)) {
        Term t = b.terms_[j++];
        if (subtract) t.coeff = -t.coeff;
        r.terms_.push_back(std::move(t));
      } else {
        Rat c = subtract ? Rat(a.terms_[i].coeff - b.terms_[j].coeff)
                         : Rat(a.terms_[i].coeff + b.terms_[j].coeff);
        if (c != 0) r.terms_.push_back({a.terms_[i].mono, std::move(c)});
        ++i, ++j;
      }
    }
    return r;
  }

  Context ctx_;
  std::vector<Term> terms_;
};

// Canonical text form, grevlex descending: "2*x^2*y - 3/2*y + 1".
inline std::string Poly::str() const {
  if (is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const Term& t : terms_) {
    Rat c = t.coeff;
    if (first) {
      if (c < 0) {
        out += "-";
        c = -c;
      }
    } else {
      out += (c < 0) ? " - " : " + ";
      if (c < 0) c = -c;
    }
    first = false;
    std::string vars;
    for (size_t i = 0; i < t.mono.size(); ++i) {
      if (t.mono[i] == 0) continue;
      if (!vars.empty()) vars += "*";
      vars += (*ctx_)[i];
      if (t.mono[i] > 1) vars += "^" + std::to_string(t.mono[i]);
    }
    if (vars.empty()) {
      out += to_string(c);
    } else {
      if (c != 1) out += to_string(c) + "*";
      out += vars;
    }
  }
  return out;
}

}  // namespace desing
