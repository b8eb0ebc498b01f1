// Command-line front end. Exit codes: 0 certified, 2 not certified, 1 error.
#ifndef UEIG_CLI_HPP
#define UEIG_CLI_HPP

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ueig/io.hpp"
#include "ueig/pipeline.hpp"
#include "ueig/quantum.hpp"

namespace ueig {

enum ExitCode : int { kCertified = 0, kError = 1, kUncertified = 2 };

struct CliOptions {
  std::string input;
  int order = 0;
  int max_order = 0;
  std::string mode = "auto";
  double tol = 1e-5;
  int restarts = 64;
  std::uint64_t seed = 0;
  bool oracle_only = false;
  bool sdp_only = false;
  std::string export_sdp;
  std::string output;
  std::string gauge = "auto";
};

inline void add_options(CLI::App& app, CliOptions& o) {
  app.add_option("--input", o.input, "state file")->required();
  app.add_option("--order", o.order, "starting relaxation order (default ceil(deg f / 2) + 1)");
  app.add_option("--max-order", o.max_order, "largest relaxation order (default start + 2)");
  app.add_option("--mode", o.mode, "pipeline route")->check(CLI::IsMember({"auto", "nonsym", "partial", "sym"}));
  app.add_option("--tol", o.tol, "certification gap")->check(CLI::PositiveNumber);
  app.add_option("--restarts", o.restarts, "oracle restarts")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "oracle seed");
  auto* oo = app.add_flag("--oracle-only", o.oracle_only, "skip the relaxation");
  auto* so = app.add_flag("--sdp-only", o.sdp_only, "skip the oracle");
  oo->excludes(so);
  app.add_option("--export-sdp", o.export_sdp, "write the starting-order SDP in sparse text form");
  app.add_option("--output", o.output, "write the report to this path");
  app.add_option("--gauge", o.gauge, "phase gauge fixing")->check(CLI::IsMember({"auto", "none"}));
}

inline Route parse_route(const std::string& s) {
  static const std::map<std::string, Route> m{
      {"auto", Route::Auto}, {"nonsym", Route::NonSymmetric}, {"partial", Route::Partial}, {"sym", Route::Symmetric}};
  return m.at(s);
}

inline int run(const CliOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const StateFile file = parse_state_file(o.input);
    const ComplexTensor a = file.tensor();
    PipelineConfig cfg;
    cfg.route = parse_route(o.mode);
    cfg.start_order = o.order;
    cfg.max_order = o.max_order;
    cfg.tol = o.tol;
    cfg.restarts = o.restarts;
    cfg.seed = o.seed;
    cfg.run_oracle = !o.sdp_only;
    cfg.run_sdp = !o.oracle_only;
    cfg.gauge = o.gauge == "auto";

    if (!o.export_sdp.empty()) {
      const PolynomialProgram prog = make_program(a, cfg.route, cfg.gauge);
      RelaxationOptions ro;
      ro.sign_blocks = prog.blocks;
      ro.moment_bound = 1.0;
      const int n = o.order > 0 ? o.order : prog.start_order();
      std::ofstream f(o.export_sdp);
      if (!f) throw std::runtime_error("cannot write '" + o.export_sdp + "'");
      export_sdp(f, build_relaxation(prog.f, prog.constraints, n, ro).cone_problem());
    }

    const PipelineResult r = largest_u_eigenvalue(a, cfg);
    const double overlap = std::abs(inner_product(a, outer_product(r.eigen.vectors)));
    const std::string text = report_text(r, separability_check(a, r.eigen), overlap);
    out << text;
    if (!o.output.empty()) {
      std::ofstream f(o.output);
      if (!f) throw std::runtime_error("cannot write '" + o.output + "'");
      f << text;
    }
    return r.certified ? kCertified : kUncertified;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

inline int main_entry(int argc, char** argv) {
  CLI::App app{"Largest U-eigenvalue and geometric measure of entanglement"};
  CliOptions o;
  add_options(app, o);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }
  return run(o, std::cout, std::cerr);
}

}  // namespace ueig

#endif  // UEIG_CLI_HPP
