#pragma once
// Families of ideals over a rational parameter space: fiber extraction, the
// tau invariant of a fiber, sample-based stratification, Condition AE, the
// two-sided consistency check behind the equisolvability equivalence, and
// pointwise fiber-inequality spot checks.
//
// Sample-based checks corroborate or falsify; they never prove.  Reports say
// "consistent with", and any count or verdict that cannot be certified is
// surfaced as an error or an explicit note instead of a silent guess.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chart.hpp"
#include "error.hpp"
#include "groebner.hpp"
#include "ideal.hpp"
#include "invariant.hpp"
#include "poly.hpp"
#include "resolve.hpp"

namespace desing {

// A family of basic objects over affine parameter space: fiber variables
// first, then parameter variables, generators and divisor equations in both.
struct FamilySpec {
  Context ctx;
  int nfiber = 0;
  std::vector<Poly> gens;
  std::vector<Poly> divisors;
};

inline int param_count(const FamilySpec& f) {
  return static_cast<int>(f.ctx->size()) - f.nfiber;
}

namespace detail {

// g with the parameters pinned to t, expressed in the fiber context.
inline Poly to_fiber(const Poly& g, const Context& fctx, int nfiber,
                     const std::vector<Rat>& t) {
  std::vector<Poly> imgs;
  for (int i = 0; i < nfiber; ++i) imgs.push_back(Poly::variable(fctx, i));
  for (const Rat& v : t) imgs.push_back(Poly::constant(fctx, v));
  return g.substitute(fctx, imgs);
}

inline std::vector<Poly> gradient(const Poly& g) {
  std::vector<Poly> out;
  for (size_t v = 0; v < g.nvars(); ++v) out.push_back(g.derivative(static_cast<int>(v)));
  return out;
}

}  // namespace detail

// Fiber of the family at a rational parameter point: substitute, restrict the
// divisors, and validate that the result is a legal basic-object input.
inline ProblemInput fiber(const FamilySpec& F, const std::vector<Rat>& t) {
  int m = param_count(F);
  ensure(static_cast<int>(t.size()) == m, Errc::InvalidFiber,
         "parameter point has the wrong dimension");
  std::vector<std::string> fnames((*F.ctx).begin(), (*F.ctx).begin() + F.nfiber);
  Context fctx = make_context(std::move(fnames));

  ProblemInput in;
  in.ctx = fctx;
  in.b = 1;
  for (const Poly& g : F.gens) {
    Poly r = detail::to_fiber(g, fctx, F.nfiber, t);
    if (!r.is_zero()) in.gens.push_back(r.normalized());
  }
  ensure(!in.gens.empty(), Errc::InvalidFiber, "fiber ideal is zero");

  std::vector<Poly> dv;
  for (const Poly& d : F.divisors) {
    Poly r = detail::to_fiber(d, fctx, F.nfiber, t).normalized();
    ensure(!r.is_constant(), Errc::InvalidFiber, "a divisor degenerates on this fiber");
    dv.push_back(r);
  }
  for (size_t i = 0; i < dv.size(); ++i) {
    std::vector<Poly> sm = detail::gradient(dv[i]);
    sm.push_back(dv[i]);
    ensure(is_unit_ideal(sm), Errc::InvalidFiber, "a divisor is singular on this fiber");
    for (size_t j = i + 1; j < dv.size(); ++j) {
      ensure(!locus_equal({dv[i]}, {dv[j]}), Errc::InvalidFiber,
             "two divisors coincide on this fiber");
      // normal crossings of the pair: no common point where the gradients drop rank
      std::vector<Poly> ga = detail::gradient(dv[i]);
      std::vector<Poly> gb = detail::gradient(dv[j]);
      std::vector<Poly> sys{dv[i], dv[j]};
      for (size_t p = 0; p < ga.size(); ++p)
        for (size_t q = p + 1; q < ga.size(); ++q)
          sys.push_back(ga[p] * gb[q] - ga[q] * gb[p]);
      ensure(is_unit_ideal(sys), Errc::InvalidFiber,
             "divisors lose normal crossings on this fiber");
    }
  }
  for (size_t i = 0; i < dv.size(); ++i)
    in.divisors.push_back({"D" + std::to_string(i + 1), dv[i]});
  return in;
}

// ---------------------------------------------------------------------------
// the tau invariant

// Per-step pairs (Max h, center component count), closed by the resolved mark
// (the conceptual trailing infinity), so sequences of different lengths
// compare lexicographically with resolved-earlier ranking higher.
struct TauEntry {
  InvValue h;
  long long c = 0;
};

struct TauInvariant {
  std::vector<TauEntry> entries;
  int steps = 0;  // principalization length; entries.size() == steps + 1
};

inline int compare(const TauInvariant& a, const TauInvariant& b) {
  size_t n = std::min(a.entries.size(), b.entries.size());
  for (size_t i = 0; i < n; ++i) {
    int c = compare(a.entries[i].h, b.entries[i].h);
    if (c != 0) return c;
    if (a.entries[i].c != b.entries[i].c) return a.entries[i].c < b.entries[i].c ? -1 : 1;
  }
  if (a.entries.size() != b.entries.size())
    return a.entries.size() < b.entries.size() ? 1 : -1;  // earlier mark ranks higher
  return 0;
}

inline std::string to_string(const TauInvariant& t) {
  std::string s = "tau[";
  for (int i = 0; i < t.steps; ++i) {
    if (i) s += "; ";
    s += to_string(t.entries[static_cast<size_t>(i)].h) + " | c=" +
         std::to_string(t.entries[static_cast<size_t>(i)].c);
  }
  if (t.steps) s += "; ";
  s += "oo]";
  return s;
}

// Principalize the fiber and read off the invariant.  Component counts come
// from the engine's certified center splitting; an uncertified count is an
// error, never a silent guess.
inline TauInvariant tau(const FamilySpec& F, const std::vector<Rat>& t, int max_steps = 200) {
  ProblemInput in = fiber(F, t);
  PrincipalizeResult pr = principalize(in, max_steps);
  TauInvariant tv;
  tv.steps = static_cast<int>(pr.res.steps.size());
  for (const StepRecord& s : pr.res.steps) {
    ensure(s.components_exact, Errc::ComponentCountUndecided,
           "center component count not certified at step " + std::to_string(s.index));
    tv.entries.push_back({s.max_g, s.center_components});
  }
  tv.entries.push_back({InvValue::chain({}, true), 0});
  return tv;
}

// ---------------------------------------------------------------------------
// stratification by tau

struct StratumReport {
  TauInvariant tau;
  std::vector<std::vector<Rat>> members;
  bool tau_constant = true;  // by construction of the grouping
  std::string notes;
};

struct StratifyResult {
  std::vector<StratumReport> strata;  // ordered by decreasing tau
  std::vector<std::vector<Rat>> rejected;
  std::vector<std::string> reject_reasons;
};

inline StratifyResult stratify(const FamilySpec& F,
                               const std::vector<std::vector<Rat>>& samples,
                               int max_steps = 200) {
  StratifyResult out;
  std::vector<std::pair<TauInvariant, std::vector<std::vector<Rat>>>> groups;
  for (const auto& t : samples) {
    TauInvariant tv;
    try {
      tv = tau(F, t, max_steps);
    } catch (const Error& e) {
      if (e.code() == Errc::InvalidFiber) {
        out.rejected.push_back(t);
        out.reject_reasons.push_back(e.what());
        continue;
      }
      throw;
    }
    bool hit = false;
    for (auto& g : groups)
      if (compare(g.first, tv) == 0) {
        g.second.push_back(t);
        hit = true;
        break;
      }
    if (!hit) groups.emplace_back(std::move(tv), std::vector<std::vector<Rat>>{t});
  }
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return compare(a.first, b.first) > 0; });
  for (auto& g : groups) {
    StratumReport rep;
    rep.tau = std::move(g.first);
    rep.members = std::move(g.second);
    rep.notes = "tau constant on " + std::to_string(rep.members.size()) +
                " sample(s), r=" + std::to_string(rep.tau.steps) +
                "; consistent with universal equisolvability at sample scale";
    out.strata.push_back(std::move(rep));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Condition AE and the equisolvability consistency check

namespace detail {

// Lockstep drive of the total-space principalization against each sample
// fiber's own principalization.  Checks per step: the fiber of the total
// center equals the fiber-run center (two-sided), the fiber dimension of the
// center is constant across samples and drops by exactly the parameter count
// (the transversality surrogate), and optionally Max h agreement under the
// dimension embedding.
struct Lockstep {
  bool ok = true;
  bool complete = false;
  int failing_step = -1;
  int steps = 0;
  bool maxh_equal = true;
  std::vector<std::string> notes;
  std::optional<Engine> total;
  std::vector<Engine> fibers;
  std::vector<Context> fiber_ctx;
};

inline std::vector<Poly> merge_center(const std::map<int, std::vector<Poly>>& per_chart) {
  std::vector<Poly> out;
  bool first = true;
  for (const auto& kv : per_chart) {
    if (first) {
      out = kv.second;
      first = false;
    } else {
      out = ideal_intersect(out, kv.second);
    }
  }
  return out;
}

inline Lockstep lockstep(const FamilySpec& F, const std::vector<std::vector<Rat>>& samples,
                         int max_steps, bool stop_on_failure, int limit_steps = -1) {
  Lockstep ls;
  int m = param_count(F);
  ProblemInput tin;
  tin.ctx = F.ctx;
  tin.gens = F.gens;
  tin.b = 1;
  for (size_t i = 0; i < F.divisors.size(); ++i)
    tin.divisors.push_back({"D" + std::to_string(i + 1), F.divisors[i]});
  ls.total.emplace(tin);
  for (const auto& t : samples) {
    ProblemInput fin = fiber(F, t);
    ls.fiber_ctx.push_back(fin.ctx);
    ls.fibers.emplace_back(fin);
  }

  auto note_fail = [&](int step, const std::string& msg) {
    ls.ok = false;
    if (ls.failing_step < 0) ls.failing_step = step;
    ls.notes.push_back("step " + std::to_string(step) + ": " + msg);
  };

  for (int i = 0; limit_steps < 0 || i < limit_steps; ++i) {
    ensure(i < max_steps, Errc::StepBudgetExceeded,
           "family lockstep exceeded the step budget at step " + std::to_string(i));
    bool tdone = ls.total->resolved();
    bool all_done = tdone, any_done = tdone;
    for (const Engine& fe : ls.fibers) {
      all_done = all_done && fe.resolved();
      any_done = any_done || fe.resolved();
    }
    if (all_done) {
      ls.complete = true;
      break;
    }
    if (any_done) {
      note_fail(i, "principalization lengths diverge (total resolved=" +
                       std::string(tdone ? "yes" : "no") + ")");
      break;  // cannot advance a finished run; the divergence is the finding
    }

    StepRecord rt = ls.total->advance();
    std::vector<Poly> Ct = merge_center(rt.center_root);
    int dim_total = gb_dimension(Ct);
    int first_fdim = -2;
    for (size_t s = 0; s < ls.fibers.size(); ++s) {
      StepRecord rs = ls.fibers[s].advance();
      std::vector<Poly> Cs = merge_center(rs.center_root);
      std::vector<Poly> Ct_t;
      for (const Poly& g : Ct) {
        Poly r = to_fiber(g, ls.fiber_ctx[s], F.nfiber, samples[s]);
        if (!r.is_zero()) Ct_t.push_back(r.normalized());
      }
      if (!locus_equal(Ct_t, Cs))
        note_fail(i, "total-space center does not restrict to the fiber center at sample " +
                         std::to_string(s));
      int fdim = gb_dimension(Ct_t);
      if (first_fdim == -2)
        first_fdim = fdim;
      else if (fdim != first_fdim)
        note_fail(i, "center fiber dimension varies across samples");
      if (fdim != dim_total - m)
        note_fail(i, "center is not transversal to the fiber at sample " + std::to_string(s));
      if (compare(lambda_embed(rs.max_g, static_cast<int>(F.ctx->size())), rt.max_g) != 0) {
        ls.maxh_equal = false;
        ls.notes.push_back("step " + std::to_string(i) + ": Max h differs at sample " +
                           std::to_string(s));
      }
    }
    ++ls.steps;
    if (!ls.ok && stop_on_failure) break;
  }
  if (limit_steps >= 0 && ls.steps >= limit_steps) ls.complete = true;
  return ls;
}

}  // namespace detail

struct AEReport {
  bool holds = false;
  int failing_step = -1;
  int steps_checked = 0;
  std::vector<std::string> notes;
};

// Condition AE on samples: the total-space principalization must restrict,
// center by center, to every sampled fiber's own principalization, with the
// centers transversal to the sampled fibers and of constant fiber dimension.
inline AEReport check_AE(const FamilySpec& F, const std::vector<std::vector<Rat>>& samples,
                         int max_steps = 200) {
  std::vector<std::vector<Rat>> accepted;
  for (const auto& t : samples) {
    try {
      fiber(F, t);
      accepted.push_back(t);
    } catch (const Error& e) {
      if (e.code() != Errc::InvalidFiber) throw;
    }
  }
  ensure(!accepted.empty(), Errc::InvalidFiber, "no accepted samples");
  detail::Lockstep ls = detail::lockstep(F, accepted, max_steps, true);
  AEReport rep;
  rep.holds = ls.ok && ls.complete;
  rep.failing_step = ls.failing_step;
  rep.steps_checked = ls.steps;
  rep.notes = std::move(ls.notes);
  if (rep.holds)
    rep.notes.push_back("centers restrict to fiber centers at all " +
                        std::to_string(accepted.size()) + " samples over " +
                        std::to_string(rep.steps_checked) + " steps");
  return rep;
}

struct Theorem23Report {
  bool ae = false;
  bool tau_constant = false;
  bool consistent = false;
  bool restriction_verified = false;
  std::vector<std::string> notes;
};

// Two-sided consistency check: Condition AE against tau constancy over the
// samples.  When both hold, additionally verifies that the total-space run
// restricts to each fiber run (step counts, centers, Max h values under the
// dimension embedding).  Sample evidence corroborates the equivalence; it
// cannot prove it.
inline Theorem23Report check_theorem23(const FamilySpec& F,
                                       const std::vector<std::vector<Rat>>& samples,
                                       int max_steps = 200) {
  std::vector<std::vector<Rat>> accepted;
  for (const auto& t : samples) {
    try {
      fiber(F, t);
      accepted.push_back(t);
    } catch (const Error& e) {
      if (e.code() != Errc::InvalidFiber) throw;
    }
  }
  ensure(accepted.size() >= 2, Errc::InvalidFiber,
         "need at least two accepted samples");

  Theorem23Report rep;
  std::vector<TauInvariant> taus;
  for (const auto& t : accepted) taus.push_back(tau(F, t, max_steps));
  rep.tau_constant = true;
  for (size_t i = 1; i < taus.size(); ++i)
    if (compare(taus[0], taus[i]) != 0) {
      rep.tau_constant = false;
      rep.notes.push_back("tau differs between samples 0 and " + std::to_string(i));
    }

  detail::Lockstep ls = detail::lockstep(F, accepted, max_steps, false);
  rep.ae = ls.ok && ls.complete;
  for (const std::string& n : ls.notes) rep.notes.push_back(n);

  rep.consistent = (rep.ae == rep.tau_constant);
  if (rep.ae && rep.tau_constant) {
    rep.restriction_verified = ls.maxh_equal;
    rep.notes.push_back(rep.restriction_verified
                            ? "total-space run restricts to every sampled fiber run "
                              "(steps, centers, Max h); consistent with the equivalence"
                            : "centers restrict but Max h values differ under the embedding");
  } else {
    rep.notes.push_back(rep.consistent
                            ? "both sides fail together; consistent with the equivalence"
                            : "AE and tau constancy disagree on these samples");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// pointwise fiber inequality

struct FiberComparison {
  Point x;                 // fiber point, root fiber coordinates
  bool lifted = true;      // false when the point hits an early center
  InvValue fiber_g;        // pointwise invariant of the fiber run
  InvValue total_g;        // pointwise invariant of the total-space run
  bool holds = false;      // lambda_embed(fiber_g) >= total_g
  bool strict = false;
  bool transversal = false;
  bool matches_64b = false;  // equality exactly at transversal points
  std::string note;
};

namespace detail {

inline std::optional<std::pair<int, Point>> lift_to_front(const ChartTree& tree,
                                                          const std::vector<int>& front,
                                                          const Point& root_pt) {
  for (int c : front) {
    std::vector<int> path = tree.path(c);
    Point p = root_pt;
    bool ok = true;
    for (size_t k = 1; k < path.size() && ok; ++k) {
      auto q = lift_once(tree, path[k], p);
      if (!q)
        ok = false;
      else
        p = *q;
    }
    if (ok) return std::make_pair(c, p);
  }
  return std::nullopt;
}

}  // namespace detail

// Spot check of the pointwise inequality at stage j: after verifying the
// family is j-compatible at t (the first j centers restrict fiber-wise), the
// fiber-run invariant dominates the total-space invariant at every sampled
// fiber point, with equality exactly where the local stratum through the
// point is transversal to the fiber.
inline std::vector<FiberComparison> check_fiber_inequality(
    const FamilySpec& F, const std::vector<Rat>& t, int j,
    const std::vector<Point>& points, int max_steps = 200) {
  int m = param_count(F);
  detail::Lockstep ls = detail::lockstep(F, {t}, max_steps, true, j);
  if (!ls.ok)
    fail(Errc::CompatibilityBroken,
         "family is not " + std::to_string(j) + "-compatible at the sample; first failing step " +
             std::to_string(ls.failing_step));
  ensure(ls.steps >= j, Errc::CompatibilityBroken,
         "principalization ends at step " + std::to_string(ls.steps) + " before stage " +
             std::to_string(j));
  Engine& te = *ls.total;
  Engine& fe = ls.fibers[0];

  std::vector<FiberComparison> out;
  for (const Point& x : points) {
    FiberComparison fc;
    fc.x = x;
    ensure(static_cast<int>(x.size()) == F.nfiber, Errc::InvalidFiber,
           "fiber point has the wrong dimension");
    Point xt = x;
    for (const Rat& v : t) xt.push_back(v);
    auto lf = detail::lift_to_front(fe.tree(), fe.front(), x);
    auto lt = detail::lift_to_front(te.tree(), te.front(), xt);
    if (!lf || !lt) {
      fc.lifted = false;
      fc.note = "point lies over a blown-up center; no unique stage-" + std::to_string(j) +
                " representative";
      out.push_back(std::move(fc));
      continue;
    }
    std::vector<Poly> strat;
    fc.fiber_g = fe.g_at_point(lf->first, lf->second);
    fc.total_g = te.g_at_point(lt->first, lt->second, &strat);
    int cmp = compare(lambda_embed(fc.fiber_g, static_cast<int>(F.ctx->size())), fc.total_g);
    fc.holds = cmp >= 0;
    fc.strict = cmp > 0;
    if (strat.empty()) {
      fc.transversal = true;  // open stratum
    } else {
      std::vector<Poly> fib;
      for (int p = 0; p < m; ++p)
        fib.push_back(Poly::variable(F.ctx, F.nfiber + p) -
                      Poly::constant(F.ctx, t[static_cast<size_t>(p)]));
      Ideal fibc = pull_to_chart(te.tree(), lt->first, make_ideal(F.ctx, std::move(fib)));
      std::vector<Poly> sys = strat;
      sys.insert(sys.end(), fibc.gens.begin(), fibc.gens.end());
      fc.transversal = gb_dimension(sys) == gb_dimension(strat) - m;
    }
    fc.matches_64b = ((cmp == 0) == fc.transversal);
    out.push_back(std::move(fc));
  }
  return out;
}

}  // namespace desing
