#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "waveinv/commands.hpp"
#include "waveinv/config.hpp"
#include "waveinv/kernels.hpp"

using namespace waveinv;

namespace {

struct ConfigArgs {
  std::string path;
  std::vector<std::string> overrides;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", path, "key = value configuration file");
    app->add_option("-s,--set", overrides, "override one key, e.g. --set sigma=10")->take_all();
  }

  RunConfig load() const {
    RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
    apply_overrides(cfg, overrides);
    set_thread_count(resolve_threads(cfg));
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"waveinv: coefficient reconstruction for the scalar wave equation"};
  app.require_subcommand(1);

  ConfigArgs sim_args, inv_args, gc_args;
  auto* sim = app.add_subcommand("simulate", "generate noisy front-face data for the configured phantom");
  sim_args.attach(sim);

  auto* inv = app.add_subcommand("invert", "reconstruct c from a trace file");
  inv_args.attach(inv);
  std::string trace, exact;
  inv->add_option("-t,--trace", trace, "trace file (default <output_dir>/trace.wvtr)");
  inv->add_option("-e,--exact", exact, "exact coefficient for the error bound (default <output_dir>/c_exact.wvcf if present)");

  auto* gc = app.add_subcommand("gradcheck", "finite differences against the adjoint gradient");
  gc_args.attach(gc);

  auto* pp = app.add_subcommand("postprocess", "threshold a coefficient file at P * max");
  std::string pp_in, pp_out;
  double P = 0.7;
  pp->add_option("input", pp_in, "coefficient file (.wvcf)")->required();
  pp->add_option("-P", P, "threshold fraction in (0, 1)");
  pp->add_option("-o,--output", pp_out, "output file (.wvcf; a .vtk is written next to it)")->required();

  auto* rep = app.add_subcommand("report", "summary table over finished runs");
  std::vector<std::string> runs;
  rep->add_option("runs", runs, "run directories")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*sim) return cmd_simulate(sim_args.load(), std::cout, std::cerr);
    if (*inv) {
      std::optional<fs::path> t, x;
      if (!trace.empty()) t = trace;
      if (!exact.empty()) x = exact;
      return cmd_invert(inv_args.load(), t, x, std::cout, std::cerr);
    }
    if (*gc) return cmd_gradcheck(gc_args.load(), std::cout, std::cerr);
    if (*pp) return cmd_postprocess(pp_in, P, pp_out, std::cout, std::cerr);
    if (*rep) {
      std::vector<fs::path> dirs(runs.begin(), runs.end());
      return cmd_report(dirs, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 2;
}
