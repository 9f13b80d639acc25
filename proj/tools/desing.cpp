// Command line driver: parse a problem file, run its tasks, emit a report.
// Exit codes: 0 success, 1 engine diagnostic, 2 parse or usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "desing/problem.hpp"
#include "desing/report.hpp"

namespace {

int usage(const char* argv0) {
  std::cerr << "usage: " << argv0
            << " [--out json|dot|text] [--max-steps N] [--trace] [--seed S] problem.dsl\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  std::string path, format = "text";
  desing::RunFlags flags;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--out") {
      if (++i >= argc) return usage(argv[0]);
      format = argv[i];
      if (format != "json" && format != "dot" && format != "text") return usage(argv[0]);
    } else if (a == "--max-steps") {
      if (++i >= argc) return usage(argv[0]);
      try {
        flags.max_steps = std::stoi(argv[i]);
      } catch (...) {
        return usage(argv[0]);
      }
      if (flags.max_steps < 1) return usage(argv[0]);
    } else if (a == "--trace") {
      flags.trace = true;
    } else if (a == "--seed") {
      if (++i >= argc) return usage(argv[0]);
      try {
        flags.seed = std::stoll(argv[i]);
      } catch (...) {
        return usage(argv[0]);
      }
    } else if (!a.empty() && a[0] == '-') {
      return usage(argv[0]);
    } else if (path.empty()) {
      path = a;
    } else {
      return usage(argv[0]);
    }
  }
  if (path.empty()) return usage(argv[0]);

  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  desing::ProblemFile prob;
  try {
    prob = desing::parse_problem(buf.str());
  } catch (const desing::Error& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 2;
  }

  desing::ReportDoc doc = desing::run_task(prob, flags);
  if (flags.trace) {
    for (const desing::TaskReport& t : doc.tasks) {
      if (!t.engine) continue;
      for (const desing::StepReport& s : t.engine->steps)
        std::cerr << "trace " << t.task << " step " << s.index << ": " << s.max_g << "\n";
    }
  }
  std::cout << desing::emit(doc, format);
  return doc.ok ? 0 : 1;
}
