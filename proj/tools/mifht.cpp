#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mifht/commands.hpp"

namespace {

using mifht::cplx;
using namespace mifht::io;

cplx parse_lambda(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw mifht::Error(mifht::ErrorKind::schema, "--lambda expects RE or RE,IM");
  }
}

void report(const ResultBundle& b) {
  for (const Check& c : b.checks)
    std::printf("%s  %-52s %.3e %s %.1e\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.relation.c_str(),
                c.tolerance);
  for (const std::string& w : b.warnings) std::printf("warning: %s\n", w.c_str());
  std::printf("status %d\n", b.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vector multi-interval finite Hilbert transform: evaluation, inversion and range tests"};
  std::string command;
  std::string problem;
  std::string output = "mifht-out";
  std::optional<std::size_t> modes;
  std::optional<std::size_t> nystrom;
  std::optional<double> tmax;
  std::optional<double> tol;
  std::optional<std::string> lambda;
  app.add_option("command", command,
                 "forward | invert | range-check | gamma-check | uniform-invert | injectivity-report | selftest")
      ->required();
  app.add_option("--problem", problem, "problem file (JSON)");
  app.add_option("--output", output, "directory for diagnostics.json and function tables");
  app.add_option("--modes", modes, "Chebyshev modes per interval");
  app.add_option("--nystrom", nystrom, "Nystrom nodes per interval");
  app.add_option("--tmax", tmax, "half-width of the t-grid for the uniform pipeline");
  app.add_option("--tol", tol, "pass threshold for relative residuals");
  app.add_option("--lambda", lambda, "spectral parameter RE[,IM] for gamma-check");
  app.footer("Exit codes: 0 ok, 1 failed check, 2 schema, 3 geometry, 4 degenerate theta, 5 range violation, "
             "6 near-singular, 7 convergence. MIFHT_THREADS caps the worker count.");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const Command cmd = parse_command(command);
    ResultBundle bundle;
    std::size_t table_samples = 64;
    if (cmd == Command::selftest && problem.empty()) {
      bundle = run_selftest();
    } else {
      if (problem.empty()) throw mifht::Error(mifht::ErrorKind::schema, "--problem is required for " + command);
      ProblemSpec spec = parse_problem_file(problem);
      spec.command = cmd;
      if (modes) spec.grid.modes = std::max<std::size_t>(2, *modes);
      if (nystrom) spec.grid.nystrom = std::max<std::size_t>(4, *nystrom);
      if (tmax) {
        if (!(*tmax > 0.0)) throw mifht::Error(mifht::ErrorKind::schema, "--tmax must be positive");
        std::size_t pts = 8;
        while (static_cast<double>(pts) * spec.grid.t_step < 2.0 * *tmax) pts *= 2;
        spec.grid.t_points = pts;
      }
      if (tol) {
        spec.tol.residual = *tol;
        spec.tol.discrepancy = *tol;
      }
      if (lambda) spec.grid.lambda = parse_lambda(*lambda);
      table_samples = spec.grid.modes;
      bundle = run_command(spec);
    }
    report(bundle);
    if (!output.empty()) write_bundle(bundle, output, table_samples);
    return bundle.status;
  } catch (const mifht::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mifht::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
