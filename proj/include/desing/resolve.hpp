#pragma once
// Resolution engine for basic objects (W, (J, b), E) over Q.  A state is a
// front of affine charts carrying a tower of levels: level 0 is the input
// pair, level k+1 the coefficient object of level k on a maximal contact
// hypersurface.  Each step blows up the locus where the tower invariant is
// maximal; the invariant drops strictly until Sing(J, b) is empty.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "blowup.hpp"
#include "chart.hpp"
#include "components.hpp"
#include "error.hpp"
#include "gcd.hpp"
#include "groebner.hpp"
#include "ideal.hpp"
#include "invariant.hpp"
#include "poly.hpp"

namespace desing {

inline long long factorial(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// All products of e generators: generators of I^e.
inline Ideal pow_ideal(const Ideal& I, int e) {
  ensure(e >= 0, Errc::Internal, "negative ideal power");
  if (e == 0) return unit_ideal(I.ctx);
  if (e == 1) return I;
  size_t g = I.gens.size();
  std::vector<Poly> out;
  std::vector<size_t> idx(static_cast<size_t>(e), 0);  // nondecreasing tuples
  for (;;) {
    Poly p = I.gens[idx[0]];
    for (size_t i = 1; i < idx.size(); ++i) p = p * I.gens[idx[i]];
    out.push_back(std::move(p));
    ensure(out.size() <= 5000, Errc::Internal, "ideal power too large");
    // next nondecreasing tuple
    size_t i = idx.size();
    while (i > 0 && idx[i - 1] == g - 1) --i;
    if (i == 0) break;
    size_t v = ++idx[i - 1];
    for (size_t j = i; j < idx.size(); ++j) idx[j] = v;
  }
  return make_ideal(I.ctx, std::move(out));
}

// Strict transform of a single equation: divide out every power of e.
inline Poly strict_poly(const Poly& f, const Poly& e) {
  if (f.is_constant() || e.is_constant()) return f;
  Poly res;
  f.factor_multiplicity(e, &res);
  return res.normalized();
}

inline Ideal substitute_ideal(const Ideal& I, const std::vector<Poly>& images) {
  std::vector<Poly> gens;
  for (const Poly& g : I.gens) gens.push_back(g.substitute(I.ctx, images));
  return make_ideal(I.ctx, std::move(gens));
}

// Pull an ideal from the root chart all the way into a descendant chart.
inline Ideal pull_to_chart(const ChartTree& tree, int chart, const Ideal& I) {
  std::vector<int> path = tree.path(chart);
  Ideal cur = I;
  for (size_t i = 1; i < path.size(); ++i) cur = pullback_ideal(tree, path[i], cur);
  return cur;
}

// ---------------------------------------------------------------------------
// tower data

struct DivisorRec {
  int label = 0;
  std::string name;
  int birth = 0;  // state index at which the divisor joined this level
  long long components = 1;
  bool components_exact = true;
};

struct LevelChartData {
  Ideal J;
  std::vector<Poly> views;  // one per divisor of the level; constant = not visible here
  Poly zcut;                // equation cutting this level out of the level above
  int zpivot = -1;          // pivot variable of zcut (banned for deeper contacts)
};

struct LevelState {
  int b = 1;
  int anchor = 0;  // state index of (re)construction
  std::vector<int> patch_labels;
  Rat parent_w = Rat(-1);
  long long parent_n = -1;
  std::vector<DivisorRec> divisors;
  std::vector<Rat> maxw_history;  // entry per state since anchor
  std::map<int, LevelChartData> charts;

  const Poly* view_of(int chart, int label) const {
    auto it = charts.find(chart);
    if (it == charts.end()) return nullptr;
    for (size_t i = 0; i < divisors.size(); ++i)
      if (divisors[i].label == label) return &it->second.views[i];
    return nullptr;
  }
};

// Enclosing ambient data per chart: the cuts defining the current level's
// ambient inside the chart, and their pivot variables.
struct ZEnv {
  std::vector<Poly> cuts;
  std::vector<int> pivots;
};
using SupportMap = std::map<int, ZEnv>;

// ---------------------------------------------------------------------------
// level measurements

// Least m with Delta^m(jbar) + support = (1): the maximum order of jbar on
// V(support).  Sees all closed points, not only rational ones.
inline int restricted_max_order(const Ideal& jbar, const std::vector<Poly>& support) {
  ensure(!jbar.is_zero(), Errc::Internal, "restricted order of the zero ideal");
  int cap = 0;
  for (const Poly& g : jbar.gens) cap = std::max(cap, g.degree());
  Ideal cur = jbar;
  for (int m = 0; m <= cap + 1; ++m) {
    std::vector<Poly> probe = cur.gens;
    probe.insert(probe.end(), support.begin(), support.end());
    if (is_unit_ideal(probe)) return m;
    cur = make_ideal(cur.ctx, groebner(delta(cur).gens));
  }
  fail(Errc::Internal, "order search exceeded the degree bound");
}

struct WOrdData {
  Rat maxw = Rat(-1);  // -1: level empty everywhere
  int o = 0;           // b * maxw = restricted max order of jbar
  std::map<int, Ideal> jbar;
  std::map<int, std::vector<int>> exps;
  std::map<int, std::vector<Poly>> support;  // z cuts + Sing generators per live chart
  std::map<int, std::vector<Poly>> zonly;    // just the z cuts (clean center ideals)
  std::map<int, int> ord;
};

inline WOrdData w_ord_max(const LevelState& L, const SupportMap& sup) {
  WOrdData wd;
  for (const auto& entry : L.charts) {
    int c = entry.first;
    const LevelChartData& d = entry.second;
    std::vector<Poly> zonly;
    if (auto it = sup.find(c); it != sup.end()) zonly = it->second.cuts;
    if (!d.zcut.is_constant()) zonly.push_back(d.zcut);
    std::vector<Poly> supp = zonly;
    for (const Poly& g : sing_ideal(d.J, L.b).gens) supp.push_back(g);
    if (is_unit_ideal(supp)) continue;  // nothing singular in this chart
    MonomialDecomposition md = monomial_decompose(d.J, d.views);
    ensure(!md.residual.is_zero(), Errc::Internal, "zero residual ideal");
    int o = restricted_max_order(md.residual, supp);
    wd.jbar.emplace(c, std::move(md.residual));
    wd.exps.emplace(c, std::move(md.exponents));
    wd.support.emplace(c, std::move(supp));
    wd.zonly.emplace(c, std::move(zonly));
    wd.ord[c] = o;
    if (Rat(o, L.b) > wd.maxw) {
      wd.maxw = Rat(o, L.b);
      wd.o = o;
    }
  }
  return wd;
}

struct SplitE {
  int i0 = 0;
  std::vector<int> eminus, eplus;
};

// E^- holds the divisors born at or before the state where the current
// Max w-ord was first attained; maxw_history must already include the
// current state's value.
inline SplitE split_E(const LevelState& L) {
  const std::vector<Rat>& h = L.maxw_history;
  ensure(!h.empty(), Errc::Internal, "split before any order computation");
  size_t i = 0;
  while (h[i] != h.back()) ++i;
  SplitE s;
  s.i0 = L.anchor + static_cast<int>(i);
  for (const DivisorRec& d : L.divisors)
    (d.birth <= s.i0 ? s.eminus : s.eplus).push_back(d.label);
  return s;
}

struct Patch {
  std::vector<int> labels;  // subset of E^- met along the patch
  std::map<int, std::vector<Poly>> locus;
};

struct TMax {
  Rat w;
  long long n = 0;
  std::map<int, std::vector<Poly>> maxw_locus;
  std::vector<Patch> patches;
};

// Max t locus: points of the Max w-ord locus lying on the largest number of
// E^- divisors, stratified by which divisors those are.
inline TMax t_max_locus(const LevelState& L, const WOrdData& wd, const SplitE& se) {
  TMax tm;
  tm.w = wd.maxw;
  for (const auto& entry : wd.ord) {
    if (entry.second != wd.o) continue;
    int c = entry.first;
    std::vector<Poly> gens = delta_power(wd.jbar.at(c), wd.o - 1).gens;
    const std::vector<Poly>& supp = wd.support.at(c);
    gens.insert(gens.end(), supp.begin(), supp.end());
    tm.maxw_locus.emplace(c, std::move(gens));
  }
  ensure(se.eminus.size() <= 14, Errc::Internal, "divisor subset enumeration too large");
  int m = static_cast<int>(se.eminus.size());
  for (int sz = m; sz >= 0 && tm.patches.empty(); --sz) {
    std::vector<Patch> found;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      if (__builtin_popcount(mask) != sz) continue;
      Patch p;
      for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) p.labels.push_back(se.eminus[static_cast<size_t>(i)]);
      for (const auto& entry : tm.maxw_locus) {
        int c = entry.first;
        std::vector<Poly> gens = entry.second;
        bool visible = true;
        for (int lab : p.labels) {
          const Poly* v = L.view_of(c, lab);
          if (!v || v->is_constant()) {
            visible = false;
            break;
          }
          gens.push_back(*v);
        }
        if (visible && !is_unit_ideal(gens)) p.locus.emplace(c, std::move(gens));
      }
      if (!p.locus.empty()) found.push_back(std::move(p));
    }
    if (!found.empty()) {
      tm.n = sz;
      tm.patches = std::move(found);
    }
  }
  return tm;
}

// ---------------------------------------------------------------------------
// descent objects

struct PatchObj {
  int bpp = 1;  // b''
  std::map<int, Ideal> jpp;
};

// B': the companion object whose singular locus is the Max w-ord locus.
inline PatchObj build_Bprime(const LevelState& L, const WOrdData& wd, const Patch& patch) {
  PatchObj po;
  int b = L.b, o = wd.o;
  po.bpp = o >= b ? o : o * (b - o);
  for (const auto& entry : patch.locus) {
    int c = entry.first;
    const Ideal& jb = wd.jbar.at(c);
    if (o >= b) {
      po.jpp.emplace(c, jb);
      continue;
    }
    const LevelChartData& d = L.charts.at(c);
    const std::vector<int>& ex = wd.exps.at(c);
    Poly M = Poly::constant(d.J.ctx, Rat(1));
    for (size_t i = 0; i < d.views.size(); ++i)
      if (ex[i] > 0) M = M * d.views[i].pow(ex[i]);
    Ideal part = pow_ideal(jb, b - o);
    std::vector<Poly> gens = part.gens;
    gens.push_back(M.pow(o));
    po.jpp.emplace(c, make_ideal(d.J.ctx, std::move(gens)));
  }
  return po;
}

// B'': B' extended by the patch's own E^- divisors so that Sing becomes
// exactly the patch.
inline void build_Bdoubleprime(const LevelState& L, const Patch& patch, PatchObj& po) {
  for (auto& entry : po.jpp) {
    int c = entry.first;
    std::vector<Poly> gens = entry.second.gens;
    for (int lab : patch.labels) {
      const Poly* v = L.view_of(c, lab);
      ensure(v != nullptr, Errc::Internal, "patch divisor not visible");
      gens.push_back(v->pow(po.bpp));
    }
    entry.second = make_ideal(entry.second.ctx, std::move(gens));
  }
}

struct R1Result {
  bool fires = false;
  std::map<int, Poly> f;  // codimension-one equation per chart
};

// Codimension-one part of Sing(J'', b''): the squarefree part of the gcd of
// Delta^{b''-1}(J'').  Fires when it meets the level ambient; the locus must
// then be smooth.
inline R1Result r1_detect(const PatchObj& po, const std::map<int, std::vector<Poly>>& zonly) {
  R1Result r;
  for (const auto& entry : po.jpp) {
    int c = entry.first;
    Ideal dd = delta_power(entry.second, po.bpp - 1);
    Poly f = squarefree_part(gcd_all(dd));
    if (f.is_constant()) continue;
    std::vector<Poly> probe{f};
    auto zit = zonly.find(c);
    if (zit != zonly.end())
      probe.insert(probe.end(), zit->second.begin(), zit->second.end());
    if (is_unit_ideal(probe)) continue;  // misses this level's ambient
    std::vector<Poly> sm{f};
    for (size_t v = 0; v < f.nvars(); ++v) {
      Poly d = f.derivative(static_cast<int>(v));
      if (!d.is_zero()) sm.push_back(std::move(d));
    }
    if (zit != zonly.end()) sm.insert(sm.end(), zit->second.begin(), zit->second.end());
    ensure(is_unit_ideal(sm), Errc::PermissibilityViolation,
           "codimension-one singular locus is not smooth");
    r.f.emplace(c, f);
    r.fires = true;
  }
  return r;
}

// Coefficient ideal of (J'', b'') on the maximal contact V(zcut), presented
// in ambient coordinates with the pivot variable substituted away.
inline Ideal coeff_ideal(const Ideal& jpp, int bpp, const detail::LinearPivot& pv,
                         std::vector<std::string>* warnings) {
  std::vector<Poly> images;
  for (size_t i = 0; i < jpp.ctx->size(); ++i)
    images.push_back(Poly::variable(jpp.ctx, static_cast<int>(i)));
  images[static_cast<size_t>(pv.var)] = -(Rat(1) * pv.shift);
  if (bpp == 1) return substitute_ideal(jpp, images);
  ensure(bpp <= 6, Errc::Internal, "coefficient ideal beyond the supported range");
  if (bpp > 4 && warnings)
    warnings->push_back("coefficient ideal with b'' = " + std::to_string(bpp) +
                        " exceeds the degree comfort bound");
  long long fact = factorial(bpp);
  std::vector<Poly> gens;
  Ideal cur = jpp;
  for (int i = 0; i < bpp; ++i) {
    if (i > 0) cur = make_ideal(cur.ctx, groebner(delta(cur).gens));
    Ideal restr = substitute_ideal(cur, images);
    if (restr.is_zero()) continue;
    Ideal p = pow_ideal(restr, static_cast<int>(fact / (bpp - i)));
    gens.insert(gens.end(), p.gens.begin(), p.gens.end());
  }
  Ideal C = make_ideal(jpp.ctx, std::move(gens));
  ensure(!C.is_zero(), Errc::Internal, "zero coefficient ideal");
  return C;
}

struct GammaData {
  Head head;
  std::vector<CenterPiece> centers;
};

// Monomial case: J is supported on the level's divisors.  The head ranks
// first by fewest divisors needed to reach order b, then by the order
// reached, then by the label tuple.
inline std::optional<GammaData> gamma_head(const LevelState& L, const WOrdData& wd) {
  struct Best {
    int p = 0;
    Rat w;
    std::vector<int> idx;
    bool set = false;
  } best;
  for (const auto& entry : wd.exps) {
    int c = entry.first;
    const std::vector<int>& ex = entry.second;
    const LevelChartData& d = L.charts.at(c);
    std::vector<size_t> cand;
    for (size_t i = 0; i < ex.size(); ++i)
      if (ex[i] > 0 && !d.views[i].is_constant()) cand.push_back(i);
    ensure(cand.size() <= 20, Errc::Internal, "divisor subset enumeration too large");
    int m = static_cast<int>(cand.size());
    for (int sz = 1; sz <= m; ++sz) {
      if (best.set && sz > best.p) break;
      bool any = false;
      for (unsigned mask = 0; mask < (1u << m); ++mask) {
        if (__builtin_popcount(mask) != sz) continue;
        int sum = 0;
        std::vector<int> labels;
        std::vector<Poly> gens = wd.zonly.at(c);
        for (int i = 0; i < m; ++i)
          if (mask & (1u << i)) {
            sum += ex[cand[static_cast<size_t>(i)]];
            labels.push_back(L.divisors[cand[static_cast<size_t>(i)]].label);
            gens.push_back(d.views[cand[static_cast<size_t>(i)]]);
          }
        if (sum < L.b) continue;
        if (is_unit_ideal(gens)) continue;  // divisors do not actually meet
        any = true;
        Rat w = Rat(sum, L.b);
        std::sort(labels.rbegin(), labels.rend());
        bool better = !best.set || sz < best.p ||
                      (sz == best.p && (w > best.w || (w == best.w && labels > best.idx)));
        if (better) best = {sz, w, labels, true};
      }
      if (any) break;  // points with more divisors needed rank lower
    }
  }
  if (!best.set) return std::nullopt;
  GammaData gd{Head::gamma(best.p, best.w, best.idx), {}};
  // a single plain divisor label is a locus whose component count the divisor
  // ledger certifies, provided no chart that sees it is cut away
  bool plain = best.idx.size() == 1;
  if (plain)
    for (const auto& entry : wd.exps)
      if (!wd.zonly.at(entry.first).empty()) plain = false;
  for (const auto& entry : wd.exps) {
    int c = entry.first;
    const std::vector<int>& ex = entry.second;
    std::vector<Poly> gens = wd.zonly.at(c);
    bool visible = true;
    int sum = 0;
    for (int lab : best.idx) {
      const Poly* v = L.view_of(c, lab);
      if (!v || v->is_constant()) {
        visible = false;
        break;
      }
      for (size_t j = 0; j < L.divisors.size(); ++j)
        if (L.divisors[j].label == lab) sum += ex[j];
      gens.push_back(*v);
    }
    // the subset must reach order b in this chart, not merely be visible
    if (visible && sum >= L.b && !is_unit_ideal(gens))
      gd.centers.push_back({c, std::move(gens), Center{}});
    else if (visible)
      plain = false;
  }
  ensure(!gd.centers.empty(), Errc::Internal, "empty monomial center");
  if (plain)
    for (const DivisorRec& d : L.divisors)
      if (d.label == best.idx[0] && d.components_exact)
        for (CenterPiece& p : gd.centers) {
          p.group = 0;
          p.group_count = {d.components, true};
        }
  return gd;
}

// ---------------------------------------------------------------------------
// step records and the engine

struct StepRecord {
  int index = 0;
  InvValue max_g;
  Rat maxw;
  long long n = 0;
  std::vector<std::vector<int>> patch_keys;
  std::vector<CenterPiece> centers;  // aligned per-chart pieces
  std::map<int, std::vector<Poly>> center_root;
  std::vector<std::string> kinds;  // per blown chart: register | std | rees
  int new_label = 0;
  std::vector<int> new_charts;
  long long center_components = 1;
  bool components_exact = true;
  bool coeff_ok = true;
  std::vector<std::string> warnings;
  std::vector<int> front_after;
  std::vector<DivisorRec> divisors_after;
  std::map<int, LevelChartData> level0_after;
};

struct InitialDivisor {
  std::string name;
  Poly view;
};

struct ProblemInput {
  Context ctx;
  std::vector<Poly> gens;
  int b = 1;
  std::vector<InitialDivisor> divisors;
};

struct DescendResult {
  std::vector<Head> heads;
  bool inf = false;
  std::vector<CenterPiece> centers;
  bool coeff_ok = true;
  std::vector<std::string> warnings;
  std::vector<std::vector<int>> patch_keys;
};

// Inductive objects persist per stratum: each level keeps one child tower per
// divisor subset, and every stored tower transforms through every blowup.
struct LevelNode {
  LevelState state;
  std::map<std::vector<int>, LevelNode> kids;
};

class Engine {
 public:
  Engine(Context ctx, std::vector<Poly> gens, int b, std::vector<InitialDivisor> E) {
    Ideal J = make_ideal(ctx, std::move(gens));
    ensure(!J.is_zero(), Errc::ZeroIdeal, "cannot resolve the zero ideal");
    ensure(b >= 1, Errc::Internal, "b must be at least 1");
    make_root_chart(tree_, ctx);
    front_ = {0};
    LevelState L0;
    L0.b = b;
    L0.anchor = 0;
    LevelChartData d;
    d.J = std::move(J);
    d.zcut = Poly::constant(ctx, Rat(1));
    int lab = 1;
    for (const InitialDivisor& e : E) {
      ensure(!e.view.is_constant(), Errc::PermissibilityViolation,
             "initial divisor has a constant equation");
      std::vector<Poly> sm{e.view};
      for (size_t v = 0; v < e.view.nvars(); ++v) {
        Poly dv = e.view.derivative(static_cast<int>(v));
        if (!dv.is_zero()) sm.push_back(std::move(dv));
      }
      ensure(is_unit_ideal(sm), Errc::PermissibilityViolation, "initial divisor is singular");
      ComponentCount cc = count_aligned_piece(Center{{}, e.view}, ctx);
      L0.divisors.push_back({lab, e.name, 0, cc.count, cc.exact});
      d.views.push_back(e.view.normalized());
      ++lab;
    }
    next_label_ = lab;
    L0.charts.emplace(0, std::move(d));
    root_.state = std::move(L0);
  }

  explicit Engine(const ProblemInput& in) : Engine(in.ctx, in.gens, in.b, in.divisors) {}

  const ChartTree& tree() const { return tree_; }
  const std::vector<int>& front() const { return front_; }
  const std::vector<StepRecord>& records() const { return records_; }
  const LevelState& level0() const { return root_.state; }
  int state() const { return state_; }

  bool resolved() const {
    for (int c : front_) {
      const LevelChartData& d = root_.state.charts.at(c);
      if (!is_unit(sing_ideal(d.J, root_.state.b))) return false;
    }
    return true;
  }

  // Full invariant computation at the current state, no blowup.
  DescendResult probe() const {
    LevelNode scratch = root_;
    SupportMap sup;
    return descend(scratch, sup, 0);
  }

  StepRecord advance() {
    ensure(!resolved(), Errc::Internal, "advance called on a resolved state");
    SupportMap sup;
    DescendResult dr = descend(root_, sup, 0);
    InvValue g = InvValue::chain(dr.heads, dr.inf);
    if (!records_.empty()) {
      const StepRecord& prev = records_.back();
      ensure(compare(g, prev.max_g) < 0, Errc::Internal, "invariant failed to decrease");
      if (!dr.heads.empty() && !prev.max_g.heads.empty() && dr.heads[0].kind == Head::T &&
          prev.max_g.heads[0].kind == Head::T)
        ensure(compare(dr.heads[0], prev.max_g.heads[0]) <= 0, Errc::Internal,
               "t invariant increased");
    }

    StepRecord rec;
    rec.index = static_cast<int>(records_.size());
    rec.max_g = g;
    rec.maxw = !dr.heads.empty() && dr.heads[0].kind == Head::T ? dr.heads[0].w : Rat(0);
    rec.n = !dr.heads.empty() && dr.heads[0].kind == Head::T ? dr.heads[0].n : 0;
    rec.patch_keys = dr.patch_keys;
    rec.coeff_ok = dr.coeff_ok;
    rec.warnings = dr.warnings;

    std::map<int, std::vector<std::vector<Poly>>> per_chart;
    for (const CenterPiece& p : dr.centers) {
      std::vector<std::vector<Poly>>& ps = per_chart[p.chart];
      bool dup = false;
      for (const std::vector<Poly>& q : ps)
        if (locus_equal(q, p.gens)) {
          dup = true;
          break;
        }
      if (!dup) ps.push_back(p.gens);
    }
    ensure(!per_chart.empty(), Errc::Internal, "step selected no center");

    // a structurally certified count survives the per-chart regrouping only
    // when every selected piece carries the same one
    std::optional<ComponentCount> structural;
    if (dr.centers.front().group >= 0 && dr.centers.front().group_count.exact) {
      structural = dr.centers.front().group_count;
      for (const CenterPiece& p : dr.centers)
        if (structural && (p.group != dr.centers.front().group || !p.group_count.exact ||
                           p.group_count.count != structural->count))
          structural.reset();
    }

    int label = next_label_++;
    rec.new_label = label;
    append_divisor(root_, label, "E" + std::to_string(label), state_ + 1);

    std::vector<int> new_front;
    std::vector<CenterPiece> counted;
    for (int c : front_) {
      auto it = per_chart.find(c);
      if (it == per_chart.end()) {
        new_front.push_back(c);
        continue;
      }
      // distinct tied pieces in one chart must be disjoint; they are blown
      // one after another within this step, all feeding the same divisor
      for (size_t i = 0; i < it->second.size(); ++i)
        for (size_t j = i + 1; j < it->second.size(); ++j) {
          std::vector<Poly> both = it->second[i];
          both.insert(both.end(), it->second[j].begin(), it->second[j].end());
          ensure(is_unit_ideal(both), Errc::Internal, "tied center pieces overlap in a chart");
        }
      std::vector<std::pair<int, std::vector<std::vector<Poly>>>> work{{c, it->second}};
      for (size_t wi = 0; wi < work.size(); ++wi) {
        int cc = work[wi].first;
        std::vector<Poly> cur = work[wi].second.front();
        std::vector<std::vector<Poly>> rest(work[wi].second.begin() + 1, work[wi].second.end());
        ensure(locus_contained_in(cur, sing_ideal(root_.state.charts.at(cc).J,
                                                  root_.state.b).gens),
               Errc::PermissibilityViolation, "center leaves the singular locus");
        std::vector<int> prefer = vars_in_use(cc);
        AlignResult ar = align_center(tree_, cc, cur, prefer);
        int ac = ar.chart_id;
        if (ac != cc) {
          migrate_chart(root_, cc, ac);
          for (std::vector<Poly>& rp : rest)
            for (Poly& g : rp) g = pullback(tree_, ac, g);
        }
        const Center& cent = ar.center;
        Context actx = tree_.at(ac).ctx;
        std::vector<Poly> cgens;
        for (int v : cent.vars) cgens.push_back(Poly::variable(actx, v));
        if (cent.has_extra()) cgens.push_back(cent.extra);
        counted.push_back({ac, cgens, cent});
        if (structural) {
          counted.back().group = 0;
          counted.back().group_count = *structural;
        }
        rec.centers.push_back({ac, cgens, cent});
        {
          std::vector<Poly> ri = root_image(tree_, ac, cgens);
          auto [rit, inserted] = rec.center_root.emplace(ac, ri);
          if (!inserted) rit->second = ideal_intersect(rit->second, ri);
        }

        std::vector<int> kids;
        bool in_place = false;
        if (cent.codim() == 1) {
          // divisorial center: the blowup is an isomorphism, the divisor
          // joins the ledger and its multiplicity leaves the controlled
          // transform
          Poly f = cent.vars.empty() ? cent.extra : Poly::variable(actx, cent.vars[0]);
          transform_chart(root_, ac, ac, f.normalized(), true, cgens);
          kids = {ac};
          in_place = true;
          rec.kinds.push_back("register");
        } else if (cent.has_extra()) {
          int kid = blowup_rees(tree_, ac, cent.vars, cent.extra, rec.index);
          transform_chart(root_, ac, kid, exceptional_view(tree_.at(kid)), false, cgens);
          erase_chart(root_, ac);
          kids = {kid};
          rec.kinds.push_back("rees");
          rec.warnings.push_back("rees chart covers only the residual-pivot directions");
        } else {
          kids = blowup_std(tree_, ac, cent.vars, rec.index);
          for (int k : kids)
            transform_chart(root_, ac, k, exceptional_view(tree_.at(k)), false, cgens);
          erase_chart(root_, ac);
          rec.kinds.push_back("std");
        }
        for (int k : kids) {
          std::vector<std::vector<Poly>> surviving;
          for (const std::vector<Poly>& rp : rest) {
            std::vector<Poly> pb;
            for (const Poly& g : rp) pb.push_back(in_place ? g : pullback(tree_, k, g));
            pb = groebner(pb);
            if (!is_unit_ideal_gb(pb)) surviving.push_back(std::move(pb));
          }
          if (!surviving.empty()) {
            work.emplace_back(k, std::move(surviving));
          } else {
            new_front.push_back(k);
            if (!in_place) rec.new_charts.push_back(k);
          }
        }
      }
    }

    ComponentCount cc = count_center_components(tree_, counted);
    set_divisor_count(root_, label, cc.count, cc.exact);
    rec.center_components = cc.count;
    rec.components_exact = cc.exact;

    front_ = std::move(new_front);
    ++state_;
    rec.front_after = front_;
    rec.divisors_after = root_.state.divisors;
    for (int c : front_) rec.level0_after.emplace(c, root_.state.charts.at(c));
    records_.push_back(rec);
    return records_.back();
  }

  // Pointwise invariant at a rational point of a front chart; bottom when the
  // point is outside Sing(J, b).  Deep levels are rebuilt at the point.  When
  // stratum is given it receives the terminal local stratum piece through x
  // (chart coordinates; empty for the open bottom stratum).
  InvValue g_at_point(int chart, const Point& x, std::vector<Poly>* stratum = nullptr) const {
    const LevelState& L0 = root_.state;
    auto it = L0.charts.find(chart);
    ensure(it != L0.charts.end(), Errc::Internal, "chart not on the front");
    if (stratum) stratum->clear();
    std::vector<Poly> cuts;  // maximal contact equations, translated coords
    Point neg_x;
    for (const Rat& xi : x) neg_x.push_back(-xi);
    auto emit_stratum = [&](std::vector<Poly> gens) {
      if (!stratum) return;
      gens.insert(gens.end(), cuts.begin(), cuts.end());
      for (Poly& g : gens)
        if (!g.is_constant()) g = g.translate(neg_x).normalized();
      stratum->assign(gens.begin(), gens.end());
    };

    struct PointLevel {
      Ideal J;
      std::vector<Poly> views;
      std::vector<int> labels;
      std::vector<bool> eminus;
      int b;
    };
    PointLevel cur;
    {
      std::vector<Poly> tg;
      for (const Poly& g : it->second.J.gens) tg.push_back(g.translate(x));
      cur.J = make_ideal(it->second.J.ctx, std::move(tg));
      // the stored history ends at the previous state; append the current max
      LevelState probe0 = L0;
      SupportMap nosup;
      WOrdData wd0 = w_ord_max(probe0, nosup);
      SplitE se;
      if (wd0.maxw >= 0) {
        probe0.maxw_history.push_back(wd0.maxw);
        se = split_E(probe0);
      }
      std::set<int> em(se.eminus.begin(), se.eminus.end());
      for (size_t i = 0; i < L0.divisors.size(); ++i) {
        cur.views.push_back(it->second.views[i].is_constant() ? it->second.views[i]
                                                              : it->second.views[i].translate(x));
        cur.labels.push_back(L0.divisors[i].label);
        cur.eminus.push_back(em.count(L0.divisors[i].label) > 0);
      }
      cur.b = L0.b;
    }

    auto ord0 = [](const Ideal& I) {
      int best = -1;
      for (const Poly& g : I.gens) {
        int o = g.order_at_origin();
        if (best < 0 || o < best) best = o;
      }
      return best;
    };

    std::vector<Head> heads;
    bool inf = false;
    size_t depth_cap = it->second.J.ctx->size() + 2;
    for (size_t depth = 0; depth < depth_cap; ++depth) {
      MonomialDecomposition md = monomial_decompose(cur.J, cur.views);
      ensure(!md.residual.is_zero(), Errc::Internal, "zero residual at point");
      int br = ord0(md.residual);
      if (depth == 0) {
        int oj = ord0(cur.J);
        if (oj < cur.b) return InvValue::make_bottom();
      }
      if (br == 0) {
        // monomial case at the point
        struct Th {
          int label;
          int exp;
          size_t view;
        };
        std::vector<Th> th;  // divisors through x with positive exponent
        for (size_t i = 0; i < cur.views.size(); ++i)
          if (md.exponents[i] > 0 && !cur.views[i].is_constant() &&
              cur.views[i].order_at_origin() > 0)
            th.push_back({cur.labels[i], md.exponents[i], i});
        int m = static_cast<int>(th.size());
        ensure(m <= 20, Errc::Internal, "divisor subset enumeration too large");
        struct Best {
          int p = 0;
          Rat w;
          std::vector<int> idx;
          unsigned mask = 0;
          bool set = false;
        } best;
        for (int sz = 1; sz <= m && !best.set; ++sz) {
          for (unsigned mask = 0; mask < (1u << m); ++mask) {
            if (__builtin_popcount(mask) != sz) continue;
            int sum = 0;
            std::vector<int> labels;
            for (int i = 0; i < m; ++i)
              if (mask & (1u << i)) {
                sum += th[static_cast<size_t>(i)].exp;
                labels.push_back(th[static_cast<size_t>(i)].label);
              }
            if (sum < cur.b) continue;
            Rat w = Rat(sum, cur.b);
            std::sort(labels.rbegin(), labels.rend());
            if (!best.set || w > best.w || (w == best.w && labels > best.idx))
              best = {sz, w, labels, mask, true};
          }
        }
        ensure(best.set, Errc::Internal, "monomial point without feasible data");
        heads.push_back(Head::gamma(best.p, best.w, best.idx));
        {
          std::vector<Poly> sg;
          for (int i = 0; i < m; ++i)
            if (best.mask & (1u << i)) sg.push_back(cur.views[th[static_cast<size_t>(i)].view]);
          emit_stratum(std::move(sg));
        }
        inf = true;
        break;
      }
      long long n = 0;
      for (size_t i = 0; i < cur.views.size(); ++i)
        if (cur.eminus[i] && !cur.views[i].is_constant() && cur.views[i].order_at_origin() > 0)
          ++n;
      heads.push_back(Head::t(Rat(br, cur.b), n));

      // local companion object
      Ideal jp;
      int bpp;
      if (br >= cur.b) {
        jp = md.residual;
        bpp = br;
      } else {
        Poly M = Poly::constant(cur.J.ctx, Rat(1));
        for (size_t i = 0; i < cur.views.size(); ++i)
          if (md.exponents[i] > 0) M = M * cur.views[i].pow(md.exponents[i]);
        Ideal part = pow_ideal(md.residual, cur.b - br);
        std::vector<Poly> gens = part.gens;
        gens.push_back(M.pow(br));
        jp = make_ideal(cur.J.ctx, std::move(gens));
        bpp = br * (cur.b - br);
      }
      std::vector<Poly> jg = jp.gens;
      for (size_t i = 0; i < cur.views.size(); ++i)
        if (cur.eminus[i] && !cur.views[i].is_constant() && cur.views[i].order_at_origin() > 0)
          jg.push_back(cur.views[i].pow(bpp));
      Ideal jpp = make_ideal(cur.J.ctx, std::move(jg));

      Ideal dd = delta_power(jpp, bpp - 1);
      Poly f = squarefree_part(gcd_all(dd));
      if (!f.is_constant() && f.order_at_origin() > 0) {
        emit_stratum({f});
        inf = true;
        break;
      }
      std::vector<Poly> gb = groebner(dd.gens);
      std::optional<detail::LinearPivot> pv;
      std::vector<bool> banned(cur.J.ctx->size(), false);
      std::vector<bool> preferred(cur.J.ctx->size(), true);
      for (;;) {
        pv.reset();
        for (const Poly& g : gb) {
          pv = detail::find_linear_pivot(g, banned, preferred);
          if (pv) break;
        }
        if (!pv) break;
        std::vector<Poly> imgs;
        for (size_t i = 0; i < cur.J.ctx->size(); ++i)
          imgs.push_back(Poly::variable(cur.J.ctx, static_cast<int>(i)));
        imgs[static_cast<size_t>(pv->var)] = -(Rat(1) * pv->shift);
        bool ok = true;
        for (size_t i = 0; i < cur.views.size(); ++i)
          if (!cur.eminus[i] && !cur.views[i].is_constant() &&
              cur.views[i].substitute(cur.J.ctx, imgs).is_zero()) {
            ok = false;
            break;
          }
        if (ok) break;
        banned[static_cast<size_t>(pv->var)] = true;
      }
      ensure(pv.has_value(), Errc::NoUnitLinearPart,
             "no maximal contact with a unit linear part at the point");
      Ideal C = coeff_ideal(jpp, bpp, *pv, nullptr);
      cuts.push_back(Poly::variable(cur.J.ctx, pv->var) + pv->shift);
      std::vector<Poly> images;
      for (size_t i = 0; i < cur.J.ctx->size(); ++i)
        images.push_back(Poly::variable(cur.J.ctx, static_cast<int>(i)));
      images[static_cast<size_t>(pv->var)] = -(Rat(1) * pv->shift);
      PointLevel nxt;
      nxt.J = C;
      nxt.b = static_cast<int>(factorial(bpp));
      for (size_t i = 0; i < cur.views.size(); ++i) {
        if (cur.eminus[i]) continue;  // only E^+ descends as traces
        nxt.views.push_back(cur.views[i].is_constant() ? cur.views[i]
                                                       : cur.views[i].substitute(cur.J.ctx, images));
        nxt.labels.push_back(cur.labels[i]);
        nxt.eminus.push_back(true);  // traces join E^- of the fresh level
      }
      cur = std::move(nxt);
    }
    if (stratum && stratum->empty() && !cuts.empty()) emit_stratum({});
    return InvValue::chain(heads, inf);
  }

 private:
  void append_divisor(LevelNode& node, int label, const std::string& name, int birth) {
    node.state.divisors.push_back({label, name, birth, 1, true});
    for (auto& entry : node.state.charts)
      entry.second.views.push_back(Poly::constant(entry.second.J.ctx, Rat(1)));
    for (auto& kv : node.kids) append_divisor(kv.second, label, name, birth);
  }

  static void set_divisor_count(LevelNode& node, int label, long long count, bool exact) {
    for (DivisorRec& d : node.state.divisors)
      if (d.label == label) {
        d.components = count;
        d.components_exact = exact;
      }
    for (auto& kv : node.kids) set_divisor_count(kv.second, label, count, exact);
  }

  // variables any stored object in chart c depends on, kept fixed by alignment
  std::vector<int> vars_in_use(int c) const {
    std::set<int> used;
    collect_vars(root_, c, used);
    return std::vector<int>(used.begin(), used.end());
  }

  static void collect_vars(const LevelNode& node, int c, std::set<int>& used) {
    auto it = node.state.charts.find(c);
    if (it == node.state.charts.end()) return;
    for (const Poly& v : it->second.views)
      for (size_t i = 0; i < v.nvars(); ++i)
        if (v.depends_on(static_cast<int>(i))) used.insert(static_cast<int>(i));
    if (it->second.zpivot >= 0) used.insert(it->second.zpivot);
    for (const auto& kv : node.kids) collect_vars(kv.second, c, used);
  }

  void migrate_chart(LevelNode& node, int c, int ac) {
    auto it = node.state.charts.find(c);
    if (it == node.state.charts.end()) return;
    LevelChartData nd;
    nd.J = pullback_ideal(tree_, ac, it->second.J);
    for (const Poly& v : it->second.views)
      nd.views.push_back(v.is_constant() ? v : pullback(tree_, ac, v).normalized());
    nd.zcut = it->second.zcut.is_constant() ? it->second.zcut
                                            : pullback(tree_, ac, it->second.zcut).normalized();
    nd.zpivot = it->second.zpivot;
    node.state.charts.erase(it);
    node.state.charts.emplace(ac, std::move(nd));
    for (auto& kv : node.kids) migrate_chart(kv.second, c, ac);
  }

  void erase_chart(LevelNode& node, int c) {
    node.state.charts.erase(c);
    for (auto& kv : node.kids) erase_chart(kv.second, c);
  }

  // Controlled transform of one stored level into one blowup chart.  With
  // in_place the chart map is the identity (divisorial centers).  A level
  // whose strict ambient cut turns constant does not meet the chart; it dies
  // there together with everything below it.
  void transform_chart(LevelNode& node, int c, int kid, const Poly& e, bool in_place,
                       const std::vector<Poly>& center) {
    auto it = node.state.charts.find(c);
    if (it == node.state.charts.end()) return;
    const LevelChartData& d = it->second;
    Context kctx = tree_.at(kid).ctx;
    LevelChartData nd;
    bool alive = true;
    if (d.zcut.is_constant()) {
      nd.zcut = Poly::constant(kctx, Rat(1));
    } else {
      Poly pb = in_place ? d.zcut : pullback(tree_, kid, d.zcut);
      nd.zcut = strict_poly(pb, e);
      if (nd.zcut.is_constant()) alive = false;
    }
    if (!alive) {
      if (in_place) erase_chart(node, c);
      return;
    }
    Ideal pj = in_place ? d.J : pullback_ideal(tree_, kid, d.J);
    int nu = -1;
    for (const Poly& g : pj.gens)
      if (!g.is_zero()) {
        int m = g.factor_multiplicity(e);
        nu = nu < 0 ? m : std::min(nu, m);
      }
    if (nu >= node.state.b) {
      nd.J = controlled_divide(pj, e, node.state.b);
    } else {
      // the controlled law needs multiplicity b along the center; anything
      // less is legal only for a stored object whose singular locus the
      // center misses, where the weak transform agrees near that locus
      std::vector<Poly> probe = sing_ideal(d.J, node.state.b).gens;
      if (!d.zcut.is_constant()) probe.push_back(d.zcut);
      probe.insert(probe.end(), center.begin(), center.end());
      ensure(is_unit_ideal(probe), Errc::PermissibilityViolation,
             "controlled transform not divisible by the exceptional power");
      Ideal w = pj;
      factor_out(w, e);
      nd.J = w;
    }
    for (const Poly& v : d.views) {
      if (v.is_constant())
        nd.views.push_back(Poly::constant(kctx, Rat(1)));
      else
        nd.views.push_back(strict_poly(in_place ? v : pullback(tree_, kid, v), e));
    }
    nd.views.back() = e.normalized();  // the new exceptional divisor
    nd.zpivot = d.zpivot;
    if (in_place)
      it->second = std::move(nd);
    else
      node.state.charts.emplace(kid, std::move(nd));
    for (auto& kv : node.kids) transform_chart(kv.second, c, kid, e, in_place, center);
  }

  LevelState build_child(const LevelState& L, const WOrdData& wd, const Patch& patch,
                         const PatchObj& po, const SupportMap& sup, const SplitE& se, Rat tw,
                         long long tn, std::vector<std::string>& warnings, bool* coeff_ok) const {
    LevelState child;
    child.b = static_cast<int>(factorial(po.bpp));
    child.anchor = state_;
    child.patch_labels = patch.labels;
    child.parent_w = tw;
    child.parent_n = tn;
    for (int lab : se.eplus) {
      for (const DivisorRec& d : L.divisors)
        if (d.label == lab) {
          DivisorRec t = d;
          t.birth = state_;  // trace divisors join the fresh level now
          child.divisors.push_back(std::move(t));
        }
    }
    for (const auto& entry : po.jpp) {
      int c = entry.first;
      const Ideal& jpp = entry.second;
      Ideal dd = delta_power(jpp, po.bpp - 1);
      std::vector<Poly> gb = groebner(dd.gens);
      std::vector<bool> banned(jpp.ctx->size(), false);
      std::vector<bool> preferred(jpp.ctx->size(), true);
      if (auto zit = sup.find(c); zit != sup.end())
        for (int p : zit->second.pivots)
          if (p >= 0) banned[static_cast<size_t>(p)] = true;
      if (L.charts.at(c).zpivot >= 0) banned[static_cast<size_t>(L.charts.at(c).zpivot)] = true;
      // pick a contact hypersurface transversal to the descending divisors: a
      // pivot whose substitution kills a trace view swallows that divisor
      std::optional<detail::LinearPivot> pv;
      Poly zcut;
      bool found_any = false;
      for (;;) {
        pv.reset();
        for (const Poly& g : gb) {
          pv = detail::find_linear_pivot(g, banned, preferred);
          if (pv) {
            zcut = g.normalized();
            break;
          }
        }
        if (!pv) break;
        found_any = true;
        std::vector<Poly> imgs;
        for (size_t i = 0; i < jpp.ctx->size(); ++i)
          imgs.push_back(Poly::variable(jpp.ctx, static_cast<int>(i)));
        imgs[static_cast<size_t>(pv->var)] = -(Rat(1) * pv->shift);
        bool ok = true;
        for (int lab : se.eplus) {
          const Poly* v = L.view_of(c, lab);
          if (v && !v->is_constant() && v->substitute(jpp.ctx, imgs).is_zero()) {
            ok = false;
            break;
          }
        }
        if (ok) break;
        banned[static_cast<size_t>(pv->var)] = true;
        pv.reset();
      }
      ensure(found_any, Errc::NoUnitLinearPart, "no maximal contact with a unit linear part");
      ensure(pv.has_value(), Errc::PermissibilityViolation,
             "divisor contains every maximal contact hypersurface");
      Ideal C = coeff_ideal(jpp, po.bpp, *pv, &warnings);
      // two-sided contract: the coefficient object must carry the same locus
      {
        std::vector<Poly> lhs = sing_ideal(jpp, po.bpp).gens;
        std::vector<Poly> rhs = sing_ideal(C, child.b).gens;
        const std::vector<Poly>& zs = wd.zonly.at(c);
        lhs.insert(lhs.end(), zs.begin(), zs.end());
        rhs.insert(rhs.end(), zs.begin(), zs.end());
        rhs.push_back(zcut);
        if (!locus_equal(lhs, rhs)) *coeff_ok = false;
      }
      std::vector<Poly> images;
      for (size_t i = 0; i < jpp.ctx->size(); ++i)
        images.push_back(Poly::variable(jpp.ctx, static_cast<int>(i)));
      images[static_cast<size_t>(pv->var)] = -(Rat(1) * pv->shift);
      LevelChartData cd;
      cd.J = C;
      cd.zcut = zcut;
      cd.zpivot = pv->var;
      for (int lab : se.eplus) {
        const Poly* v = L.view_of(c, lab);
        ensure(v != nullptr, Errc::Internal, "missing divisor view");
        Poly vr = v->is_constant() ? *v : v->substitute(jpp.ctx, images);
        ensure(!vr.is_zero(), Errc::PermissibilityViolation,
               "divisor contains the maximal contact hypersurface");
        cd.views.push_back(vr.is_constant() ? vr : vr.normalized());
      }
      child.charts.emplace(c, std::move(cd));
    }
    return child;
  }

  DescendResult descend(LevelNode& node, const SupportMap& sup, size_t k) const {
    LevelState& L = node.state;
    DescendResult res;
    WOrdData wd = w_ord_max(L, sup);
    ensure(wd.maxw >= 0, Errc::Internal, "descended into an empty level");
    L.maxw_history.push_back(wd.maxw);

    if (wd.maxw == 0) {
      auto gd = gamma_head(L, wd);
      ensure(gd.has_value(), Errc::Internal, "monomial case without feasible data");
      res.heads = {gd->head};
      res.inf = true;  // a monomial head closes the chain
      res.centers = std::move(gd->centers);
      return res;
    }

    SplitE se = split_E(L);
    TMax tm = t_max_locus(L, wd, se);
    ensure(!tm.patches.empty(), Errc::Internal, "no patch on a live level");
    Head t = Head::t(tm.w, tm.n);

    struct Cand {
      InvValue value;
      std::vector<Head> heads;
      bool inf = false;
      std::vector<CenterPiece> centers;
      bool coeff_ok = true;
      std::vector<std::string> warnings;
      std::vector<int> labels;
    };
    std::vector<Cand> cands;
    for (const Patch& patch : tm.patches) {
      PatchObj po = build_Bprime(L, wd, patch);
      build_Bdoubleprime(L, patch, po);
      Cand cd;
      cd.labels = patch.labels;
      R1Result r1 = r1_detect(po, wd.zonly);
      if (r1.fires) {
        cd.heads = {t};
        cd.inf = true;
        for (const auto& entry : r1.f) {
          std::vector<Poly> gens = wd.zonly.at(entry.first);
          gens.push_back(entry.second);
          cd.centers.push_back({entry.first, std::move(gens), Center{}});
        }
        cd.value = InvValue::chain(cd.heads, cd.inf);
        cands.push_back(std::move(cd));
        continue;
      }
      auto kit = node.kids.find(patch.labels);
      bool reuse = kit != node.kids.end() && !kit->second.state.charts.empty() &&
                   kit->second.state.parent_w == tm.w && kit->second.state.parent_n == tm.n;
      if (!reuse) {
        LevelState child =
            build_child(L, wd, patch, po, sup, se, tm.w, tm.n, cd.warnings, &cd.coeff_ok);
        node.kids[patch.labels] = LevelNode{std::move(child), {}};
      }
      LevelNode& kidn = node.kids.at(patch.labels);
      SupportMap csup;
      for (const auto& entry : kidn.state.charts) {
        int c = entry.first;
        ZEnv env;
        if (auto zit = sup.find(c); zit != sup.end()) env = zit->second;
        auto pit = L.charts.find(c);
        if (pit != L.charts.end() && !pit->second.zcut.is_constant()) {
          env.cuts.push_back(pit->second.zcut);
          env.pivots.push_back(pit->second.zpivot);
        }
        csup.emplace(c, std::move(env));
      }
      DescendResult sub = descend(kidn, csup, k + 1);
      cd.heads = {t};
      cd.heads.insert(cd.heads.end(), sub.heads.begin(), sub.heads.end());
      cd.inf = sub.inf;
      cd.centers = std::move(sub.centers);
      cd.coeff_ok = cd.coeff_ok && sub.coeff_ok;
      cd.warnings.insert(cd.warnings.end(), sub.warnings.begin(), sub.warnings.end());
      cd.value = InvValue::chain(cd.heads, cd.inf);
      cands.push_back(std::move(cd));
    }

    size_t best = 0;
    for (size_t i = 1; i < cands.size(); ++i)
      if (compare(cands[i].value, cands[best].value) > 0) best = i;
    res.heads = cands[best].heads;
    res.inf = cands[best].inf;
    for (size_t i = 0; i < cands.size(); ++i) {
      if (compare(cands[i].value, cands[best].value) != 0) continue;
      res.centers.insert(res.centers.end(), cands[i].centers.begin(), cands[i].centers.end());
      res.coeff_ok = res.coeff_ok && cands[i].coeff_ok;
      res.warnings.insert(res.warnings.end(), cands[i].warnings.begin(), cands[i].warnings.end());
      res.patch_keys.push_back(cands[i].labels);
    }
    return res;
  }

  ChartTree tree_;
  std::vector<int> front_;
  LevelNode root_;
  std::vector<StepRecord> records_;
  int state_ = 0;
  int next_label_ = 1;
};

// ---------------------------------------------------------------------------
// user-facing drivers

struct ResolutionResult {
  Engine engine;
  std::vector<StepRecord> steps;
  bool resolved = true;
};

inline ResolutionResult resolve(const ProblemInput& in, int max_steps = 64) {
  Engine e(in);
  while (!e.resolved()) {
    ensure(static_cast<int>(e.records().size()) < max_steps, Errc::StepBudgetExceeded,
           "resolution exceeded the step budget");
    e.advance();
  }
  ResolutionResult r{std::move(e), {}, true};
  r.steps = r.engine.records();
  return r;
}

// Max g at the input state of a basic object, with the centers it selects.
struct MaxGData {
  InvValue value;
  std::vector<CenterPiece> centers;
};

inline MaxGData max_g(const ProblemInput& in) {
  Engine e(in);
  if (e.resolved()) return {InvValue::make_bottom(), {}};
  DescendResult dr = e.probe();
  return {InvValue::chain(dr.heads, dr.inf), dr.centers};
}

struct ChartCertificate {
  int chart = 0;
  std::vector<std::pair<int, int>> exponents;  // (divisor label, exponent)
  Ideal residual;
  bool unit = false;
  bool identity_ok = false;
};

struct PrincipalizeResult {
  ResolutionResult res;
  std::vector<ChartCertificate> certificates;
};

// Principalization: resolve at b = 1; afterwards the total transform is a
// monomial in the exceptional divisors times a unit.
inline PrincipalizeResult principalize(const ProblemInput& in0, int max_steps = 64) {
  ProblemInput in = in0;
  in.b = 1;
  PrincipalizeResult pr{resolve(in, max_steps), {}};
  const Engine& e = pr.res.engine;
  Ideal root = make_ideal(in.ctx, in.gens);
  for (int c : e.front()) {
    const LevelChartData& d = e.level0().charts.at(c);
    Ideal tot = pull_to_chart(e.tree(), c, root);
    MonomialDecomposition md = monomial_decompose(tot, d.views);
    ChartCertificate cert;
    cert.chart = c;
    for (size_t i = 0; i < md.exponents.size(); ++i)
      if (md.exponents[i] > 0)
        cert.exponents.push_back({e.level0().divisors[i].label, md.exponents[i]});
    cert.residual = md.residual;
    cert.unit = is_unit(md.residual);
    if (in.gens.size() == 1 && md.residual.gens.size() == 1) {
      Poly lhs = pull_to_chart(e.tree(), c, root).gens[0];
      Poly rhs = md.residual.gens[0];
      for (size_t i = 0; i < md.exponents.size(); ++i)
        if (md.exponents[i] > 0) rhs = rhs * d.views[i].pow(md.exponents[i]);
      // decompose normalizes generators; compare up to the scalar
      cert.identity_ok = lhs.normalized() == rhs.normalized();
    }
    pr.certificates.push_back(std::move(cert));
  }
  return pr;
}

// Controlled, weak and total transform of an ideal into one chart, with the
// exceptional multiplicity.
struct TransformData {
  Ideal total;
  Ideal weak;
  Ideal controlled;
  int nu = 0;
};

inline TransformData transform_ideal(const ChartTree& tree, int child, const Ideal& I, int b) {
  TransformData td;
  td.total = pullback_ideal(tree, child, I);
  Poly e = exceptional_view(tree.at(child));
  Ideal w = td.total;
  td.nu = factor_out(w, e);
  td.weak = std::move(w);
  td.controlled = controlled_divide(td.total, e, b);
  return td;
}

// rank of the Jacobian of gens at a rational point
inline int jacobian_rank_at(const std::vector<Poly>& gens, const Point& p) {
  if (gens.empty()) return 0;
  size_t n = gens[0].nvars();
  std::vector<std::vector<Rat>> m;
  for (const Poly& g : gens) {
    std::vector<Rat> row;
    for (size_t v = 0; v < n; ++v) row.push_back(g.derivative(static_cast<int>(v)).eval(p));
    m.push_back(std::move(row));
  }
  int rank = 0;
  size_t rows = m.size();
  for (size_t col = 0; col < n && static_cast<size_t>(rank) < rows; ++col) {
    size_t piv = rows;
    for (size_t r = static_cast<size_t>(rank); r < rows; ++r)
      if (m[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv == rows) continue;
    std::swap(m[static_cast<size_t>(rank)], m[piv]);
    for (size_t r = 0; r < rows; ++r) {
      if (r == static_cast<size_t>(rank) || m[r][col] == 0) continue;
      Rat f = m[r][col] / m[static_cast<size_t>(rank)][col];
      for (size_t cc = 0; cc < n; ++cc) m[r][cc] = m[r][cc] - f * m[static_cast<size_t>(rank)][cc];
    }
    ++rank;
  }
  return rank;
}

// minors of the Jacobian matrix of gens, of size k
inline std::vector<Poly> jacobian_minors(const std::vector<Poly>& gens, int k) {
  ensure(!gens.empty(), Errc::Internal, "minors of an empty system");
  const Context& ctx = gens[0].ctx();
  size_t n = gens[0].nvars(), r = gens.size();
  std::vector<std::vector<Poly>> jac(r, std::vector<Poly>());
  for (size_t i = 0; i < r; ++i)
    for (size_t v = 0; v < n; ++v) jac[i].push_back(gens[i].derivative(static_cast<int>(v)));
  std::vector<Poly> out;
  std::vector<size_t> ri, ci;
  // determinant by Laplace expansion on small index sets
  std::function<Poly(const std::vector<size_t>&, const std::vector<size_t>&)> det =
      [&](const std::vector<size_t>& rs, const std::vector<size_t>& cs) -> Poly {
    if (rs.size() == 1) return jac[rs[0]][cs[0]];
    Poly acc = Poly::zero(ctx);
    for (size_t j = 0; j < cs.size(); ++j) {
      std::vector<size_t> rs2(rs.begin() + 1, rs.end());
      std::vector<size_t> cs2;
      for (size_t t = 0; t < cs.size(); ++t)
        if (t != j) cs2.push_back(cs[t]);
      Poly sub = det(rs2, cs2);
      Poly term = jac[rs[0]][cs[j]] * sub;
      acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
  };
  std::function<void(size_t, size_t, std::vector<size_t>&, bool)> choose =
      [&](size_t start, size_t left, std::vector<size_t>& acc, bool rows) {
        if (left == 0) {
          if (rows) {
            ri = acc;
            std::vector<size_t> acc2;
            choose(0, static_cast<size_t>(k), acc2, false);
          } else {
            Poly d = det(ri, acc);
            if (!d.is_zero()) out.push_back(d.normalized());
          }
          return;
        }
        size_t limit = rows ? r : n;
        for (size_t i = start; i + left <= limit; ++i) {
          acc.push_back(i);
          choose(i + 1, left - 1, acc, rows);
          acc.pop_back();
        }
      };
  if (static_cast<size_t>(k) > r || static_cast<size_t>(k) > n) return out;
  std::vector<size_t> acc;
  choose(0, static_cast<size_t>(k), acc, true);
  return out;
}

struct DesingOutcome {
  PrincipalizeResult pr;
  InvValue lambda;
  int s = -1;  // stage whose Max h equals the smooth-point value
  std::vector<int> front_s;
  std::map<int, std::vector<Poly>> strict;  // strict transform per stage-s chart
  bool smooth = true;
  bool normal_crossings = true;
  Point witness;
};

// Desingularization of V(gens): principalize, then stop at the stage whose
// invariant equals the generic smooth-point value; the strict transform
// there is smooth and transversal to the exceptional locus.
inline DesingOutcome desingularize(const ProblemInput& in0, std::optional<Point> smooth_pt = {},
                                   int max_steps = 64) {
  ProblemInput in = in0;
  in.b = 1;
  in.divisors.clear();
  DesingOutcome out{principalize(in, max_steps), InvValue::make_bottom(), -1, {}, {}, true, true, {}};
  int n = static_cast<int>(in.ctx->size());
  int dim = gb_dimension(in.gens);
  ensure(dim >= 0, Errc::ZeroIdeal, "variety is empty");
  int codim = n - dim;

  // locate a smooth rational point
  auto is_smooth_at = [&](const Point& p) {
    for (const Poly& g : in.gens)
      if (g.eval(p) != 0) return false;
    return jacobian_rank_at(in.gens, p) == codim;
  };
  bool have = false;
  if (smooth_pt) {
    ensure(is_smooth_at(*smooth_pt), Errc::NoSmoothPoint,
           "NoSmoothRationalPointFound: supplied point is not a smooth point");
    out.witness = *smooth_pt;
    have = true;
  } else {
    std::vector<Rat> grid{Rat(0), Rat(1), Rat(-1), Rat(2),  Rat(-2),
                          Rat(1, 2), Rat(-1, 2), Rat(3), Rat(-3), Rat(4)};
    std::vector<size_t> idx(static_cast<size_t>(n), 0);
    for (long long tries = 0; tries < 200000 && !have; ++tries) {
      Point p;
      for (size_t i = 0; i < idx.size(); ++i) p.push_back(grid[idx[i]]);
      if (is_smooth_at(p)) {
        out.witness = p;
        have = true;
        break;
      }
      size_t i = 0;
      while (i < idx.size() && ++idx[i] == grid.size()) idx[i++] = 0;
      if (i == idx.size()) break;
    }
    ensure(have, Errc::NoSmoothPoint,
           "NoSmoothRationalPointFound: no smooth rational point on the sampling grid");
  }

  std::vector<Head> lh(static_cast<size_t>(codim), Head::t(Rat(1), 0));
  out.lambda = InvValue::chain(lh, true);
  for (const StepRecord& st : out.pr.res.steps)
    if (compare(st.max_g, out.lambda) == 0) {
      out.s = st.index;
      break;
    }
  ensure(out.s >= 0, Errc::Internal, "no stage attains the smooth-point value");

  const Engine& e = out.pr.res.engine;
  const StepRecord* before = out.s > 0 ? &out.pr.res.steps[static_cast<size_t>(out.s) - 1] : nullptr;
  out.front_s = before ? before->front_after : std::vector<int>{0};
  Ideal root = make_ideal(in.ctx, in.gens);
  for (int c : out.front_s) {
    std::vector<Poly> views;
    if (before)
      views = before->level0_after.at(c).views;
    Ideal tot = pull_to_chart(e.tree(), c, root);
    std::vector<Poly> strict = tot.gens;
    for (const Poly& v : views)
      if (!v.is_constant()) strict = saturate(strict, v);
    out.strict.emplace(c, strict);
    if (is_unit_ideal(strict)) continue;  // this chart misses the variety
    int cd = static_cast<int>(e.tree().at(c).ctx->size()) - gb_dimension(strict);
    std::vector<Poly> sing = strict;
    std::vector<Poly> minors = jacobian_minors(strict, cd);
    sing.insert(sing.end(), minors.begin(), minors.end());
    if (!is_unit_ideal(sing)) out.smooth = false;
    for (const Poly& v : views) {
      if (v.is_constant()) continue;
      std::vector<Poly> cut = strict;
      cut.push_back(v);
      if (is_unit_ideal(cut)) continue;
      std::vector<Poly> cs = cut;
      std::vector<Poly> cm = jacobian_minors(cut, cd + 1);
      cs.insert(cs.end(), cm.begin(), cm.end());
      if (!is_unit_ideal(cs)) out.normal_crossings = false;
    }
  }
  return out;
}

}  // namespace desing
