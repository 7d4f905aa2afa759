#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "waveinv/config.hpp"
#include "waveinv/objective.hpp"
#include "waveinv/optimizer.hpp"

namespace waveinv {

namespace fs = std::filesystem;

GridPtr make_grid(const RunConfig& cfg, double h);
WaveProblem make_wave_problem(const RunConfig& cfg, const GridPtr& grid, double tau);

struct SimulatedData {
  GridPtr grid;
  CoefficientField exact;  // phantom on the inversion grid
  BoundaryTrace data;      // noisy front-face trace on the inversion grid
};

/// Forward solve with the exact phantom (on the grid refined twice in space
/// and time when refine_data is set), sampled back to the inversion grid,
/// then noise.
SimulatedData simulate_data(const RunConfig& cfg);

InverseProblem make_inverse_problem(const RunConfig& cfg, const GridPtr& grid, BoundaryTrace data);

struct InversionOutcome {
  RunResult run;
  std::vector<ErrorBound> bounds;  // per iterate, only with an exact field
};

/// CG from c = 1. `exact` enables the a-posteriori bound per iterate.
InversionOutcome run_inversion(const RunConfig& cfg, const GridPtr& grid, const BoundaryTrace& data,
                               const CoefficientField* exact = nullptr,
                               const std::function<void(const InversionState&)>& on_iteration = {});

struct GradcheckRow {
  double eps = 0.0;
  double fd = 0.0;
  double adjoint = 0.0;
  double rel_error = 0.0;
};

/// Central differences of J along a random direction at a random c in
/// [1, 2] (inner cells), against the adjoint directional derivative.
std::vector<GradcheckRow> gradient_check(const RunConfig& cfg, const std::vector<double>& eps);

/// Contrast error |max c - max c*| / max c* * 100.
double contrast_error_percent(double max_c, double max_c_exact);

// Commands. Errors are caught and mapped to exit codes: 0 ok, 1 numerical,
// 2 I/O or configuration.
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_invert(const RunConfig& cfg, const std::optional<fs::path>& trace,
               const std::optional<fs::path>& exact, std::ostream& out, std::ostream& err);
int cmd_gradcheck(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_postprocess(const fs::path& in, double P, const fs::path& out_path, std::ostream& out,
                    std::ostream& err);
int cmd_report(const std::vector<fs::path>& runs, std::ostream& out, std::ostream& err);

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace waveinv
