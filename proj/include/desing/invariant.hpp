#pragma once

// Values of the resolution invariant: finite chains of heads compared
// lexicographically slot by slot.
//
//   t-head     (w, n)        w = w-ord, n = count of old divisors
//   gamma-head (-p, w, idx)  monomial stage; any t-head beats any gamma-head
//
// A chain may carry an explicit infinity tail: the slot after the last head
// reads as +inf, so a chain that resolves earlier dominates on the slot where
// the longer chain still shows a finite head.  Bottom sits below everything
// (value on empty loci).

#include "desing/rational.hpp"

#include <string>
#include <vector>

namespace desing {

struct Head {
  enum Kind { T, Gamma } kind = T;
  // T: (w, n)
  Rat w;
  long long n = 0;
  // Gamma: (-p, w, idx); idx holds divisor labels, descending
  long long p = 0;
  std::vector<int> idx;

  static Head t(Rat w_, long long n_) {
    Head h;
    h.kind = T;
    h.w = std::move(w_);
    h.n = n_;
    return h;
  }
  static Head gamma(long long p_, Rat w_, std::vector<int> idx_) {
    Head h;
    h.kind = Gamma;
    h.p = p_;
    h.w = std::move(w_);
    h.idx = std::move(idx_);
    return h;
  }
};

inline int compare(const Head& a, const Head& b) {
  if (a.kind != b.kind) return a.kind == Head::T ? 1 : -1;  // t-heads dominate
  if (a.kind == Head::T) {
    if (a.w != b.w) return a.w < b.w ? -1 : 1;
    if (a.n != b.n) return a.n < b.n ? -1 : 1;
    return 0;
  }
  if (a.p != b.p) return a.p > b.p ? -1 : 1;  // compare -p
  if (a.w != b.w) return a.w < b.w ? -1 : 1;
  if (a.idx != b.idx) return a.idx < b.idx ? -1 : 1;  // descending tuples, lex
  return 0;
}

inline bool operator==(const Head& a, const Head& b) { return compare(a, b) == 0; }

struct InvValue {
  bool bottom = true;
  std::vector<Head> heads;
  bool inf_tail = false;

  static InvValue make_bottom() { return InvValue{}; }
  static InvValue chain(std::vector<Head> hs, bool inf) {
    InvValue v;
    v.bottom = false;
    v.heads = std::move(hs);
    v.inf_tail = inf;
    return v;
  }
  bool is_bottom() const { return bottom; }
};

// Slot-wise comparison; past the last head a chain reads +inf when inf_tail
// is set, else nothing follows (gamma-terminated chains never tie against
// longer ones in practice; the tie-break below keeps the order total).
inline int compare(const InvValue& a, const InvValue& b) {
  if (a.bottom || b.bottom) {
    if (a.bottom && b.bottom) return 0;
    return a.bottom ? -1 : 1;
  }
  size_t n = std::max(a.heads.size(), b.heads.size());
  for (size_t i = 0; i < n; ++i) {
    bool ea = i >= a.heads.size(), eb = i >= b.heads.size();
    if (!ea && !eb) {
      int c = compare(a.heads[i], b.heads[i]);
      if (c != 0) return c;
      continue;
    }
    if (ea && eb) break;
    if (ea) return a.inf_tail ? 1 : -1;  // inf beats any head; bare end loses
    return b.inf_tail ? -1 : 1;
  }
  if (a.inf_tail != b.inf_tail) return a.inf_tail ? 1 : -1;
  return 0;
}

inline bool operator==(const InvValue& a, const InvValue& b) { return compare(a, b) == 0; }
inline bool operator!=(const InvValue& a, const InvValue& b) { return compare(a, b) != 0; }
inline bool operator<(const InvValue& a, const InvValue& b) { return compare(a, b) < 0; }
inline bool operator<=(const InvValue& a, const InvValue& b) { return compare(a, b) <= 0; }
inline bool operator>(const InvValue& a, const InvValue& b) { return compare(a, b) > 0; }
inline bool operator>=(const InvValue& a, const InvValue& b) { return compare(a, b) >= 0; }

// Re-tags a fiber invariant as a value for a larger ambient space.  The head
// sequences coincide (the codimension-one fallback fires in the base case in
// any dimension), so this is the identity on the data; it exists to mark the
// intent at call sites comparing across ambient dimensions.
inline InvValue lambda_embed(const InvValue& v, int /*ambient_dim*/) { return v; }

inline std::string to_string(const Head& h) {
  if (h.kind == Head::T) return "(" + to_string(h.w) + ", " + std::to_string(h.n) + ")";
  std::string s = "gamma(-" + std::to_string(h.p) + ", " + to_string(h.w) + "; ";
  for (size_t i = 0; i < h.idx.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(h.idx[i]);
  }
  return s + ")";
}

inline std::string to_string(const InvValue& v) {
  if (v.bottom) return "bottom";
  std::string s = "[";
  for (size_t i = 0; i < v.heads.size(); ++i) {
    if (i) s += ", ";
    s += to_string(v.heads[i]);
  }
  if (v.inf_tail) {
    if (!v.heads.empty()) s += ", ";
    s += "oo";
  }
  return s + "]";
}

}  // namespace desing
