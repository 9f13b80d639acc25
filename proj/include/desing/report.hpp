#pragma once
// Task runner and report emitters.  A ReportDoc echoes the input, carries one
// section per task, and serializes to json, dot or text with byte-identical
// output for a fixed input and flag set.

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "desing/error.hpp"
#include "desing/family.hpp"
#include "desing/problem.hpp"
#include "desing/resolve.hpp"

namespace desing {

struct RunFlags {
  int max_steps = 64;
  bool trace = false;
  long long seed = 0;
};

struct Diagnostic {
  std::string code;
  std::string message;
};

struct StepReport {
  int index = 0;
  std::string max_g;
  std::vector<std::string> kinds;
  std::string new_divisor;
  std::vector<int> new_charts;
  long long components = 0;
  bool components_exact = true;
  std::vector<std::pair<int, std::vector<std::string>>> centers;  // chart, gens
};

struct ChartReport {
  int id = 0;
  int parent = -1;
  int birth = 0;
  std::string kind;
};

struct FinalChartReport {
  int chart = 0;
  bool sing_empty = false;
  std::vector<std::pair<std::string, int>> exponents;  // divisor name, exponent
  std::vector<std::string> residual;
  bool unit = false;
  bool identity_ok = false;
  bool certified = false;  // principalization certificate attached
};

struct EngineReport {
  bool resolved = false;
  std::vector<StepReport> steps;
  std::vector<ChartReport> charts;
  std::vector<FinalChartReport> final_charts;
};

struct DesingReport {
  std::string lambda;
  int s = -1;
  bool smooth = false;
  bool normal_crossings = false;
  std::vector<std::string> witness;
  std::vector<std::pair<int, std::vector<std::string>>> strict;  // chart, gens
};

struct TauReport {
  std::string value;
  int steps = 0;
};

struct StratumLine {
  std::string tau;
  std::vector<std::vector<std::string>> members;
  std::string notes;
};

struct StratifyReportOut {
  std::vector<StratumLine> strata;
  std::vector<std::vector<std::string>> rejected;
  std::vector<std::string> reasons;
};

struct AEReportOut {
  bool holds = false;
  int failing_step = -1;
  int steps_checked = 0;
  std::vector<std::string> notes;
};

struct Thm23ReportOut {
  bool ae = false;
  bool tau_constant = false;
  bool consistent = false;
  bool restriction_verified = false;
  std::vector<std::string> notes;
};

struct FiberRow {
  std::vector<std::string> x;
  bool lifted = false;
  std::string fiber_g;
  std::string total_g;
  bool holds = false;
  bool strict = false;
  bool transversal = false;
  bool matches = false;
  std::string note;
};

struct TaskReport {
  std::string task;
  bool failed = false;
  std::vector<Diagnostic> diagnostics;
  std::optional<EngineReport> engine;
  std::optional<DesingReport> desing;
  std::optional<TauReport> tau;
  std::optional<StratifyReportOut> strata;
  std::optional<AEReportOut> ae;
  std::optional<Thm23ReportOut> thm23;
  std::optional<std::vector<FiberRow>> fiber_rows;
};

struct ReportDoc {
  std::string version = "1";
  bool ok = true;
  std::string input;  // canonical problem echo
  std::vector<std::string> vars, params;
  int b = 1;
  std::vector<TaskReport> tasks;
};

namespace detail {

inline std::vector<std::string> gens_strings(const std::vector<Poly>& gens) {
  std::vector<std::string> out;
  for (const Poly& g : gens) out.push_back(g.str());
  return out;
}

inline std::vector<std::string> point_strings(const std::vector<Rat>& p) {
  std::vector<std::string> out;
  for (const Rat& r : p) out.push_back(to_string(r));
  return out;
}

inline const char* kind_name(ChartKind k) {
  switch (k) {
    case ChartKind::Root: return "root";
    case ChartKind::Align: return "align";
    case ChartKind::BlowStd: return "std";
    case ChartKind::BlowRees: return "rees";
    case ChartKind::Register: return "register";
  }
  return "?";
}

inline EngineReport engine_report(const ResolutionResult& rr) {
  EngineReport er;
  er.resolved = rr.resolved;
  for (const StepRecord& st : rr.steps) {
    StepReport sr;
    sr.index = st.index;
    sr.max_g = to_string(st.max_g);
    sr.kinds = st.kinds;
    sr.new_divisor = "E" + std::to_string(st.new_label);
    sr.new_charts = st.new_charts;
    sr.components = st.center_components;
    sr.components_exact = st.components_exact;
    for (const CenterPiece& p : st.centers)
      sr.centers.push_back({p.chart, gens_strings(p.gens)});
    er.steps.push_back(std::move(sr));
  }
  for (const Chart& c : rr.engine.tree().charts)
    er.charts.push_back({c.id, c.parent, c.birth_step, kind_name(c.kind)});
  for (int c : rr.engine.front()) {
    FinalChartReport fr;
    fr.chart = c;
    const LevelChartData& d = rr.engine.level0().charts.at(c);
    fr.sing_empty = is_unit(sing_ideal(d.J, rr.engine.level0().b));
    er.final_charts.push_back(std::move(fr));
  }
  return er;
}

inline void attach_certificates(EngineReport& er, const PrincipalizeResult& pr) {
  for (const ChartCertificate& cert : pr.certificates)
    for (FinalChartReport& fr : er.final_charts) {
      if (fr.chart != cert.chart) continue;
      fr.certified = true;
      fr.unit = cert.unit;
      fr.identity_ok = cert.identity_ok;
      for (const auto& e : cert.exponents) {
        std::string name = "E" + std::to_string(e.first);
        for (const DivisorRec& dr : pr.res.engine.level0().divisors)
          if (dr.label == e.first) name = dr.name;
        fr.exponents.push_back({name, e.second});
      }
      fr.residual = gens_strings(cert.residual.gens);
    }
}

// deterministic rational grid, rotated by the seed, for witness searches
inline std::optional<Point> seeded_smooth_point(const ProblemInput& in, long long seed) {
  std::vector<Rat> grid{Rat(0),    Rat(1),     Rat(-1), Rat(2),  Rat(-2),
                        Rat(1, 2), Rat(-1, 2), Rat(3),  Rat(-3), Rat(4)};
  long long n0 = static_cast<long long>(grid.size());
  std::rotate(grid.begin(), grid.begin() + static_cast<long>(((seed % n0) + n0) % n0),
              grid.end());
  int n = static_cast<int>(in.ctx->size());
  int dim = gb_dimension(in.gens);
  if (dim < 0) return std::nullopt;
  int codim = n - dim;
  std::vector<size_t> idx(static_cast<size_t>(n), 0);
  for (long long tries = 0; tries < 200000; ++tries) {
    Point p;
    for (size_t i = 0; i < idx.size(); ++i) p.push_back(grid[idx[i]]);
    bool on = true;
    for (const Poly& g : in.gens)
      if (g.eval(p) != 0) on = false;
    if (on && jacobian_rank_at(in.gens, p) == codim) return p;
    size_t i = 0;
    while (i < idx.size() && ++idx[i] == grid.size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return std::nullopt;
}

}  // namespace detail

inline ReportDoc run_task(const ProblemFile& p, const RunFlags& flags = {}) {
  ReportDoc doc;
  doc.input = print_problem(p);
  doc.vars = p.vars;
  doc.params = p.params;
  doc.b = p.b;
  int m = static_cast<int>(p.params.size());
  for (const TaskSpec& t : p.tasks) {
    TaskReport tr;
    tr.task = task_name(t.kind);
    try {
      switch (t.kind) {
        case TaskKind::Resolve: {
          ResolutionResult rr = resolve(problem_input(p), flags.max_steps);
          tr.engine = detail::engine_report(rr);
          break;
        }
        case TaskKind::Principalize: {
          PrincipalizeResult pr = principalize(problem_input(p), flags.max_steps);
          tr.engine = detail::engine_report(pr.res);
          detail::attach_certificates(*tr.engine, pr);
          break;
        }
        case TaskKind::Desingularize: {
          std::optional<Point> witness;
          if (flags.seed != 0) witness = detail::seeded_smooth_point(problem_input(p), flags.seed);
          DesingOutcome d = desingularize(problem_input(p), witness, flags.max_steps);
          tr.engine = detail::engine_report(d.pr.res);
          detail::attach_certificates(*tr.engine, d.pr);
          DesingReport dr;
          dr.lambda = to_string(d.lambda);
          dr.s = d.s;
          dr.smooth = d.smooth;
          dr.normal_crossings = d.normal_crossings;
          dr.witness = detail::point_strings(d.witness);
          for (const auto& e : d.strict) dr.strict.push_back({e.first, detail::gens_strings(e.second)});
          tr.desing = std::move(dr);
          break;
        }
        case TaskKind::Tau: {
          FamilySpec F = family_spec(p);
          ensure(static_cast<int>(t.points[0].size()) == m, Errc::ParseError,
                 "point arity does not match the parameter count");
          TauInvariant tv = tau(F, t.points[0], flags.max_steps);
          tr.tau = TauReport{to_string(tv), tv.steps};
          break;
        }
        case TaskKind::Stratify: {
          FamilySpec F = family_spec(p);
          StratifyResult sr = stratify(F, sample_tuples(t, m), flags.max_steps);
          StratifyReportOut so;
          for (const StratumReport& s : sr.strata) {
            StratumLine line;
            line.tau = to_string(s.tau);
            for (const auto& mem : s.members) line.members.push_back(detail::point_strings(mem));
            line.notes = s.notes;
            so.strata.push_back(std::move(line));
          }
          for (const auto& r : sr.rejected) so.rejected.push_back(detail::point_strings(r));
          so.reasons = sr.reject_reasons;
          tr.strata = std::move(so);
          break;
        }
        case TaskKind::CheckAE: {
          FamilySpec F = family_spec(p);
          AEReport ar = check_AE(F, sample_tuples(t, m), flags.max_steps);
          tr.ae = AEReportOut{ar.holds, ar.failing_step, ar.steps_checked, ar.notes};
          break;
        }
        case TaskKind::CheckTau: {
          FamilySpec F = family_spec(p);
          ensure(static_cast<int>(t.points[0].size()) == m, Errc::ParseError,
                 "point arity does not match the parameter count");
          std::vector<Point> pts;
          for (size_t i = 1; i < t.points.size(); ++i) {
            ensure(static_cast<int>(t.points[i].size()) == F.nfiber, Errc::ParseError,
                   "fiber point arity does not match the variable count");
            pts.push_back(t.points[i]);
          }
          std::vector<FiberComparison> rows =
              check_fiber_inequality(F, t.points[0], 0, pts, flags.max_steps);
          std::vector<FiberRow> out;
          for (const FiberComparison& fc : rows)
            out.push_back({detail::point_strings(fc.x), fc.lifted, to_string(fc.fiber_g),
                           to_string(fc.total_g), fc.holds, fc.strict, fc.transversal,
                           fc.matches_64b, fc.note});
          tr.fiber_rows = std::move(out);
          break;
        }
        case TaskKind::CheckThm23: {
          FamilySpec F = family_spec(p);
          Theorem23Report rr = check_theorem23(F, sample_tuples(t, m), flags.max_steps);
          tr.thm23 = Thm23ReportOut{rr.ae, rr.tau_constant, rr.consistent,
                                    rr.restriction_verified, rr.notes};
          break;
        }
      }
    } catch (const Error& e) {
      tr.failed = true;
      tr.diagnostics.push_back({errc_name(e.code()), e.what()});
      doc.ok = false;
    }
    doc.tasks.push_back(std::move(tr));
  }
  return doc;
}

// ---------------------------------------------------------------------------
// emitters

namespace detail {

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

class JsonWriter {
 public:
  std::string str() const { return out_; }
  void begin_obj() { punct("{"); }
  void end_obj() { out_ += "}"; fresh_ = false; }
  void begin_arr() { punct("["); }
  void end_arr() { out_ += "]"; fresh_ = false; }
  void key(const std::string& k) {
    comma();
    out_ += "\"" + json_escape(k) + "\":";
    fresh_ = true;
  }
  void value(const std::string& s) { raw("\"" + json_escape(s) + "\""); }
  void value(const char* s) { value(std::string(s)); }
  void value(bool b) { raw(b ? "true" : "false"); }
  void value(long long v) { raw(std::to_string(v)); }
  void value(int v) { raw(std::to_string(v)); }
  void strings(const std::vector<std::string>& xs) {
    begin_arr();
    for (const std::string& x : xs) value(x);
    end_arr();
  }

 private:
  void punct(const char* s) {
    comma();
    out_ += s;
    fresh_ = true;
  }
  void raw(const std::string& s) {
    comma();
    out_ += s;
    fresh_ = false;
  }
  void comma() {
    if (!fresh_ && !out_.empty() && out_.back() != '{' && out_.back() != '[' &&
        out_.back() != ':')
      out_ += ",";
    fresh_ = false;
  }
  std::string out_;
  bool fresh_ = true;
};

}  // namespace detail

inline std::string emit_json(const ReportDoc& doc) {
  detail::JsonWriter w;
  w.begin_obj();
  w.key("version"), w.value(doc.version);
  w.key("ok"), w.value(doc.ok);
  w.key("input"), w.begin_obj();
  w.key("text"), w.value(doc.input);
  w.key("vars"), w.strings(doc.vars);
  w.key("params"), w.strings(doc.params);
  w.key("b"), w.value(doc.b);
  w.end_obj();
  w.key("tasks"), w.begin_arr();
  for (const TaskReport& t : doc.tasks) {
    w.begin_obj();
    w.key("task"), w.value(t.task);
    w.key("failed"), w.value(t.failed);
    w.key("diagnostics"), w.begin_arr();
    for (const Diagnostic& d : t.diagnostics) {
      w.begin_obj();
      w.key("code"), w.value(d.code);
      w.key("message"), w.value(d.message);
      w.end_obj();
    }
    w.end_arr();
    if (t.engine) {
      w.key("engine"), w.begin_obj();
      w.key("resolved"), w.value(t.engine->resolved);
      w.key("steps"), w.begin_arr();
      for (const StepReport& s : t.engine->steps) {
        w.begin_obj();
        w.key("index"), w.value(s.index);
        w.key("max_g"), w.value(s.max_g);
        w.key("kinds"), w.strings(s.kinds);
        w.key("new_divisor"), w.value(s.new_divisor);
        w.key("new_charts"), w.begin_arr();
        for (int c : s.new_charts) w.value(c);
        w.end_arr();
        w.key("components"), w.value(s.components);
        w.key("components_exact"), w.value(s.components_exact);
        w.key("centers"), w.begin_arr();
        for (const auto& c : s.centers) {
          w.begin_obj();
          w.key("chart"), w.value(c.first);
          w.key("gens"), w.strings(c.second);
          w.end_obj();
        }
        w.end_arr();
        w.end_obj();
      }
      w.end_arr();
      w.key("charts"), w.begin_arr();
      for (const ChartReport& c : t.engine->charts) {
        w.begin_obj();
        w.key("id"), w.value(c.id);
        w.key("parent"), w.value(c.parent);
        w.key("birth"), w.value(c.birth);
        w.key("kind"), w.value(c.kind);
        w.end_obj();
      }
      w.end_arr();
      w.key("final"), w.begin_arr();
      for (const FinalChartReport& f : t.engine->final_charts) {
        w.begin_obj();
        w.key("chart"), w.value(f.chart);
        w.key("sing_empty"), w.value(f.sing_empty);
        if (f.certified) {
          w.key("exponents"), w.begin_arr();
          for (const auto& e : f.exponents) {
            w.begin_obj();
            w.key("divisor"), w.value(e.first);
            w.key("e"), w.value(e.second);
            w.end_obj();
          }
          w.end_arr();
          w.key("residual"), w.strings(f.residual);
          w.key("unit"), w.value(f.unit);
          w.key("identity_ok"), w.value(f.identity_ok);
        }
        w.end_obj();
      }
      w.end_arr();
      w.end_obj();
    }
    if (t.desing) {
      w.key("desingularize"), w.begin_obj();
      w.key("lambda"), w.value(t.desing->lambda);
      w.key("s"), w.value(t.desing->s);
      w.key("smooth"), w.value(t.desing->smooth);
      w.key("normal_crossings"), w.value(t.desing->normal_crossings);
      w.key("witness"), w.strings(t.desing->witness);
      w.key("strict"), w.begin_arr();
      for (const auto& s : t.desing->strict) {
        w.begin_obj();
        w.key("chart"), w.value(s.first);
        w.key("gens"), w.strings(s.second);
        w.end_obj();
      }
      w.end_arr();
      w.end_obj();
    }
    if (t.tau) {
      w.key("tau"), w.begin_obj();
      w.key("value"), w.value(t.tau->value);
      w.key("steps"), w.value(t.tau->steps);
      w.end_obj();
    }
    if (t.strata) {
      w.key("stratify"), w.begin_obj();
      w.key("strata"), w.begin_arr();
      for (const StratumLine& s : t.strata->strata) {
        w.begin_obj();
        w.key("tau"), w.value(s.tau);
        w.key("members"), w.begin_arr();
        for (const auto& mem : s.members) w.strings(mem);
        w.end_arr();
        w.key("notes"), w.value(s.notes);
        w.end_obj();
      }
      w.end_arr();
      w.key("rejected"), w.begin_arr();
      for (const auto& r : t.strata->rejected) w.strings(r);
      w.end_arr();
      w.key("reasons"), w.strings(t.strata->reasons);
      w.end_obj();
    }
    if (t.ae) {
      w.key("ae"), w.begin_obj();
      w.key("holds"), w.value(t.ae->holds);
      w.key("failing_step"), w.value(t.ae->failing_step);
      w.key("steps_checked"), w.value(t.ae->steps_checked);
      w.key("notes"), w.strings(t.ae->notes);
      w.end_obj();
    }
    if (t.thm23) {
      w.key("thm23"), w.begin_obj();
      w.key("ae"), w.value(t.thm23->ae);
      w.key("tau_constant"), w.value(t.thm23->tau_constant);
      w.key("consistent"), w.value(t.thm23->consistent);
      w.key("restriction_verified"), w.value(t.thm23->restriction_verified);
      w.key("notes"), w.strings(t.thm23->notes);
      w.end_obj();
    }
    if (t.fiber_rows) {
      w.key("fiber_inequality"), w.begin_arr();
      for (const FiberRow& r : *t.fiber_rows) {
        w.begin_obj();
        w.key("x"), w.strings(r.x);
        w.key("lifted"), w.value(r.lifted);
        w.key("fiber_g"), w.value(r.fiber_g);
        w.key("total_g"), w.value(r.total_g);
        w.key("holds"), w.value(r.holds);
        w.key("strict"), w.value(r.strict);
        w.key("transversal"), w.value(r.transversal);
        w.key("matches"), w.value(r.matches);
        w.key("note"), w.value(r.note);
        w.end_obj();
      }
      w.end_arr();
    }
    w.end_obj();
  }
  w.end_arr();
  w.end_obj();
  return w.str() + "\n";
}

inline std::string emit_dot(const ReportDoc& doc) {
  std::string out = "digraph charts {\n";
  for (size_t i = 0; i < doc.tasks.size(); ++i) {
    const TaskReport& t = doc.tasks[i];
    if (!t.engine) continue;
    out += "  subgraph cluster_t" + std::to_string(i) + " {\n";
    out += "    label=\"task " + t.task + "\";\n";
    for (const ChartReport& c : t.engine->charts) {
      out += "    t" + std::to_string(i) + "_c" + std::to_string(c.id) + " [label=\"" +
             std::to_string(c.id) + " " + c.kind + " s" + std::to_string(c.birth) + "\"];\n";
    }
    for (const ChartReport& c : t.engine->charts)
      if (c.parent >= 0)
        out += "    t" + std::to_string(i) + "_c" + std::to_string(c.parent) + " -> t" +
               std::to_string(i) + "_c" + std::to_string(c.id) + ";\n";
    out += "  }\n";
  }
  out += "}\n";
  return out;
}

inline std::string emit_text(const ReportDoc& doc) {
  std::string out = "problem:\n";
  {
    std::istringstream in(doc.input);
    std::string line;
    while (std::getline(in, line)) out += "  " + line + "\n";
  }
  for (const TaskReport& t : doc.tasks) {
    out += "task " + t.task + ":";
    if (t.failed) {
      out += " failed\n";
      for (const Diagnostic& d : t.diagnostics) out += "  error " + d.code + ": " + d.message + "\n";
      continue;
    }
    if (t.engine) {
      out += t.engine->resolved ? " resolved" : " not resolved";
      out += " in " + std::to_string(t.engine->steps.size()) + " step" +
             (t.engine->steps.size() == 1 ? "" : "s") + "\n";
      for (const StepReport& s : t.engine->steps) {
        out += "  step " + std::to_string(s.index) + ": max_g = " + s.max_g + "; kinds";
        for (const std::string& k : s.kinds) out += " " + k;
        out += "; new divisor " + s.new_divisor + "; components " + std::to_string(s.components) +
               (s.components_exact ? " (exact)\n" : " (lower bound)\n");
        for (const auto& c : s.centers) {
          out += "    center in chart " + std::to_string(c.first) + ":";
          for (const std::string& g : c.second) out += " " + g + ";";
          out += "\n";
        }
      }
      for (const FinalChartReport& f : t.engine->final_charts) {
        out += "  final chart " + std::to_string(f.chart) + ": sing " +
               (f.sing_empty ? "empty" : "nonempty");
        if (f.certified) {
          out += "; monomial";
          for (const auto& e : f.exponents)
            out += " " + e.first + "^" + std::to_string(e.second);
          out += std::string("; unit residual ") + (f.unit ? "yes" : "no");
        }
        out += "\n";
      }
    } else {
      out += "\n";
    }
    if (t.desing) {
      out += "  lambda = " + t.desing->lambda + "; s = " + std::to_string(t.desing->s) +
             "; smooth " + (t.desing->smooth ? "yes" : "no") + "; normal crossings " +
             (t.desing->normal_crossings ? "yes" : "no") + "\n";
    }
    if (t.tau) out += "  tau = " + t.tau->value + "\n";
    if (t.strata) {
      for (const StratumLine& s : t.strata->strata) {
        out += "  stratum " + s.tau + ":";
        for (const auto& mem : s.members) {
          out += " (";
          for (size_t j = 0; j < mem.size(); ++j) out += (j ? ", " : "") + mem[j];
          out += ")";
        }
        out += "\n";
      }
      for (size_t i = 0; i < t.strata->rejected.size(); ++i) {
        out += "  rejected (";
        for (size_t j = 0; j < t.strata->rejected[i].size(); ++j)
          out += (j ? ", " : "") + t.strata->rejected[i][j];
        out += "): " + (i < t.strata->reasons.size() ? t.strata->reasons[i] : "") + "\n";
      }
    }
    if (t.ae) {
      out += std::string("  AE ") + (t.ae->holds ? "holds" : "fails");
      if (!t.ae->holds && t.ae->failing_step >= 0)
        out += " at step " + std::to_string(t.ae->failing_step);
      out += " (" + std::to_string(t.ae->steps_checked) + " steps checked)\n";
      for (const std::string& n : t.ae->notes) out += "    note: " + n + "\n";
    }
    if (t.thm23) {
      out += std::string("  AE ") + (t.thm23->ae ? "holds" : "fails") + "; tau " +
             (t.thm23->tau_constant ? "constant" : "varies") + "; verdicts " +
             (t.thm23->consistent ? "consistent" : "inconsistent");
      if (t.thm23->ae && t.thm23->tau_constant)
        out += t.thm23->restriction_verified ? "; restriction verified"
                                             : "; restriction unverified";
      out += "\n";
      for (const std::string& n : t.thm23->notes) out += "    note: " + n + "\n";
    }
    if (t.fiber_rows) {
      for (const FiberRow& r : *t.fiber_rows) {
        out += "  point (";
        for (size_t j = 0; j < r.x.size(); ++j) out += (j ? ", " : "") + r.x[j];
        out += "): ";
        if (!r.lifted) {
          out += "not liftable";
        } else {
          out += "fiber " + r.fiber_g + " vs total " + r.total_g + "; " +
                 (r.holds ? (r.strict ? "strict" : "equal") : "VIOLATED") + "; " +
                 (r.transversal ? "transversal" : "non-transversal") + "; " +
                 (r.matches ? "matches" : "MISMATCH");
        }
        if (!r.note.empty()) out += " (" + r.note + ")";
        out += "\n";
      }
    }
  }
  return out;
}

inline std::string emit(const ReportDoc& doc, const std::string& format) {
  if (format == "json") return emit_json(doc);
  if (format == "dot") return emit_dot(doc);
  ensure(format == "text", Errc::ParseError, "unknown output format '" + format + "'");
  return emit_text(doc);
}

}  // namespace desing
