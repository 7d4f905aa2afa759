#include "waveinv/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "waveinv/error.hpp"
#include "waveinv/io.hpp"

namespace waveinv {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
}

std::map<std::string, std::string> read_summary(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto key = line.substr(0, eq), val = line.substr(eq + 1);
    key.erase(key.find_last_not_of(' ') + 1);
    val.erase(0, val.find_first_not_of(' '));
    kv[key] = val;
  }
  return kv;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace

int exit_code_for(const std::exception& e) noexcept {
  if (const auto* we = dynamic_cast<const Error*>(&e)) return we->is_io() ? 2 : 1;
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return 2;
  return 1;
}

GridPtr make_grid(const RunConfig& cfg, double h) {
  return std::make_shared<const Grid>(build_grid(cfg.domain, cfg.inner, h));
}

WaveProblem make_wave_problem(const RunConfig& cfg, const GridPtr& grid, double tau) {
  WaveProblem p;
  p.grid = grid;
  p.source.omega = cfg.omega;
  p.initial = cfg.initial_bump ? InitialCondition::gaussian_bump() : InitialCondition::zero();
  p.time = make_time_axis(tau, cfg.final_time);
  return p;
}

SimulatedData simulate_data(const RunConfig& cfg) {
  SimulatedData s;
  s.grid = make_grid(cfg, cfg.h);
  const PhantomSpec spec = cfg.phantom_spec();
  s.exact = phantom(spec, s.grid, cfg.upper);
  if (cfg.refine_data) {
    const GridPtr fine = make_grid(cfg, cfg.h / 2.0);
    const CoefficientField c_fine = phantom(spec, fine, cfg.upper);
    const ForwardResult r = forward_solve(c_fine, make_wave_problem(cfg, fine, cfg.tau / 2.0));
    s.data = restrict_to_coarse(r.trace, *fine, *s.grid, cfg.tau, front_faces(*s.grid));
  } else {
    s.data = forward_solve(s.exact, make_wave_problem(cfg, s.grid, cfg.tau)).trace;
  }
  s.data = add_noise(s.data, {cfg.sigma, cfg.seed, cfg.literal_noise});
  return s;
}

InverseProblem make_inverse_problem(const RunConfig& cfg, const GridPtr& grid, BoundaryTrace data) {
  InverseProblem p;
  p.wave = make_wave_problem(cfg, grid, cfg.tau);
  if (data.n_face != grid->nodes()[0] * grid->nodes()[1] || data.n_levels != p.wave.time.levels() ||
      std::abs(data.tau - cfg.tau) > 1e-12 * cfg.tau)
    throw Error(ErrorCode::DimensionMismatch, "trace does not match the configured grid and time axis");
  if (!data.face) data.face = front_faces(*grid);
  p.data = std::move(data);
  p.tikhonov.gamma = cfg.gamma;
  if (cfg.gamma_delta > 0.0) p.tikhonov.gamma_rule = GammaRule{cfg.gamma_delta, cfg.gamma_nu};
  p.tikhonov.c0 = CoefficientField(grid, cfg.upper, 1.0);
  p.tikhonov.cutoff.window = cfg.cutoff;
  return p;
}

InversionOutcome run_inversion(const RunConfig& cfg, const GridPtr& grid, const BoundaryTrace& data,
                               const CoefficientField* exact,
                               const std::function<void(const InversionState&)>& on_iteration) {
  InverseProblem problem = make_inverse_problem(cfg, grid, data);
  const CoefficientField c0 = problem.tikhonov.c0;
  WaveObjective objective(std::move(problem));
  InversionOutcome out;
  const auto hook = [&](const InversionState& s) {
    if (exact)
      out.bounds.push_back(theorem3_bound(s.g, s.c, c0, cfg.bound_delta, cfg.bound_nu, cfg.bound_xi, *exact));
    if (on_iteration) on_iteration(s);
  };
  out.run = run(cfg.cg(), objective, c0, hook);
  return out;
}

std::vector<GradcheckRow> gradient_check(const RunConfig& cfg, const std::vector<double>& eps) {
  const SimulatedData sim = simulate_data(cfg);
  const InverseProblem problem = make_inverse_problem(cfg, sim.grid, sim.data);
  const Grid& grid = *sim.grid;

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CoefficientField c(sim.grid, cfg.upper, 1.0);
  std::vector<double> dir(c.size(), 0.0);
  for (std::size_t cell = 0; cell < c.size(); ++cell) {
    if (grid.cell_region(cell) != Region::Inner) continue;
    c[cell] = std::min(1.0 + unit(rng), cfg.upper);
    dir[cell] = 2.0 * unit(rng) - 1.0;
  }

  const Evaluation base = evaluate_with_gradient(problem, c);
  const double adjoint = base.gradient->dot(dir);
  std::vector<GradcheckRow> rows;
  for (double e : eps) {
    CoefficientField plus = c, minus = c;
    for (std::size_t i = 0; i < c.size(); ++i) {
      plus[i] += e * dir[i];
      minus[i] -= e * dir[i];
    }
    const double fd = (evaluate(problem, plus).terms.total() - evaluate(problem, minus).terms.total()) / (2.0 * e);
    rows.push_back({e, fd, adjoint, std::abs(fd - adjoint) / std::max(std::abs(adjoint), 1e-300)});
  }
  return rows;
}

double contrast_error_percent(double max_c, double max_c_exact) {
  if (!(max_c_exact > 0.0)) throw Error(ErrorCode::InvalidArgument, "exact maximum must be positive");
  return std::abs(max_c - max_c_exact) / max_c_exact * 100.0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const SimulatedData s = simulate_data(cfg);
    ensure_dir(cfg.output_dir);
    save_trace(cfg.output_dir / "trace.wvtr", s.data);
    save_field_binary(cfg.output_dir / "c_exact.wvcf", s.exact);
    save_field_vtk(cfg.output_dir / "c_exact.vtk", s.exact);
    open_out(cfg.output_dir / "config.txt") << serialize(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out << "simulate: " << s.data.n_levels << " levels x " << s.data.n_face << " front nodes, max c* "
        << s.exact.max() << ", " << fmt("%.2f", secs) << " s -> " << cfg.output_dir.string() << "\n";
    return 0;
  });
}

int cmd_invert(const RunConfig& cfg, const std::optional<fs::path>& trace_path,
               const std::optional<fs::path>& exact_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const fs::path tp = trace_path.value_or(cfg.output_dir / "trace.wvtr");
    if (!fs::exists(tp)) throw Error(ErrorCode::Io, "trace file not found: " + tp.string());
    const BoundaryTrace data = load_trace(tp);
    const GridPtr grid = make_grid(cfg, cfg.h);

    std::optional<CoefficientField> exact;
    const fs::path ep = exact_path.value_or(cfg.output_dir / "c_exact.wvcf");
    if (exact_path || fs::exists(ep)) exact = load_field_binary(ep, grid);

    ensure_dir(cfg.output_dir);
    auto csv = open_out(cfg.output_dir / "iterations.csv");
    write_iterations_csv(csv, {});
    const auto log = [&](const InversionState& s) {
      const IterationRecord& r = s.history.back();
      char buf[256];
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.6f,%d\n", r.m, r.J, r.g_norm,
                    r.max_c, r.alpha, r.beta, r.wall_seconds, r.line_search_failed ? 1 : 0);
      csv << buf << std::flush;
      std::snprintf(buf, sizeof buf, "m=%-3d J=%.6e |g|=%.4e max c=%.4f%s\n", r.m, r.J, r.g_norm, r.max_c,
                    r.line_search_failed ? " (line search failed)" : "");
      out << buf;
    };
    const InversionOutcome res = run_inversion(cfg, grid, data, exact ? &*exact : nullptr, log);
    const InversionState& s = res.run.state;

    save_field_binary(cfg.output_dir / "c_final.wvcf", s.c);
    save_field_vtk(cfg.output_dir / "c_final.vtk", s.c);
    const CoefficientField post = postprocess(s.c, cfg.P);
    save_field_binary(cfg.output_dir / "c_post.wvcf", post);
    save_field_vtk(cfg.output_dir / "c_post.vtk", post);

    if (exact) {
      auto t3 = open_out(cfg.output_dir / "theorem3.csv");
      t3 << "m,lhs,rhs\n";
      for (std::size_t m = 0; m < res.bounds.size(); ++m)
        t3 << m << "," << fmt("%.17g", res.bounds[m].lhs) << "," << fmt("%.17g", res.bounds[m].rhs) << "\n";
    }

    const Vec3 at = grid->cell_center(s.c.argmax());
    auto sum = open_out(cfg.output_dir / "summary.txt");
    sum << "phantom = " << to_string(cfg.phantom) << "\n"
        << "sigma = " << fmt("%.17g", cfg.sigma) << "\n"
        << "iterations = " << s.m << "\n"
        << "stop_reason = " << to_string(res.run.report.reason) << "\n"
        << "J_final = " << fmt("%.17g", s.J) << "\n"
        << "max_c = " << fmt("%.17g", s.c.max()) << "\n"
        << "argmax = " << fmt("%.17g", at[0]) << " " << fmt("%.17g", at[1]) << " " << fmt("%.17g", at[2]) << "\n";
    if (exact) sum << "max_c_exact = " << fmt("%.17g", exact->max()) << "\n";

    out << "invert: " << to_string(res.run.report.reason) << " after " << s.m << " iterations, max c "
        << fmt("%.4f", s.c.max()) << "\n";
    return 0;
  });
}

int cmd_gradcheck(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto rows = gradient_check(cfg, {1e-2, 1e-3, 1e-4, 1e-5, 1e-6});
    double best = INFINITY;
    char buf[160];
    out << "      eps            fd       adjoint     rel.error\n";
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%9.1e  %12.5e  %12.5e  %12.4e\n", r.eps, r.fd, r.adjoint, r.rel_error);
      out << buf;
      best = std::min(best, r.rel_error);
    }
    out << "best relative error " << fmt("%.3e", best) << (best < 1e-2 ? "  ok\n" : "  FAILED\n");
    return best < 1e-2 ? 0 : 1;
  });
}

int cmd_postprocess(const fs::path& in, double P, const fs::path& out_path, std::ostream& out,
                    std::ostream& err) {
  return guarded(err, [&] {
    FieldFile f = read_field_binary(in);
    try {
      f.values = postprocess_values(f.values, P);
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, e.what());
    }
    fs::path vtk = out_path;
    vtk.replace_extension(".vtk");
    if (out_path.has_parent_path()) ensure_dir(out_path.parent_path());
    save_field_binary(out_path, f);
    save_field_vtk(vtk, f);
    double mx = 0.0;
    for (double v : f.values) mx = std::max(mx, v);
    out << "postprocess: P=" << P << ", max " << mx << " -> " << out_path.string() << "\n";
    return 0;
  });
}

int cmd_report(const std::vector<fs::path>& runs, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (runs.empty()) throw Error(ErrorCode::Config, "report needs at least one run directory");
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-20s %8s %10s %10s %9s %5s\n", "case", "sigma", "max c", "max c*",
                  "error,%", "N");
    out << buf;
    for (const auto& dir : runs) {
      const auto kv = read_summary(dir / "summary.txt");
      const auto need = [&](const char* key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw Error(ErrorCode::Config, dir.string() + "/summary.txt lacks " + key);
        return it->second;
      };
      const double max_c = std::stod(need("max_c"));
      const std::string name = dir.filename().empty() ? dir.parent_path().filename().string()
                                                      : dir.filename().string();
      const std::string sigma = kv.count("sigma") ? kv.at("sigma") : "-";
      std::string exact = "-", error = "-";
      if (kv.count("max_c_exact")) {
        const double ex = std::stod(kv.at("max_c_exact"));
        exact = fmt("%.2f", ex);
        error = fmt("%.2f", contrast_error_percent(max_c, ex));
      }
      std::snprintf(buf, sizeof buf, "%-20s %8s %10.2f %10s %9s %5s\n", name.c_str(), sigma.c_str(), max_c,
                    exact.c_str(), error.c_str(), need("iterations").c_str());
      out << buf;
    }
    return 0;
  });
}

}  // namespace waveinv
