#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "waveinv/objective.hpp"

namespace waveinv {

/// What the CG loop needs from a problem: J(c), and J(c) with its gradient.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double value(const CoefficientField& c) = 0;
  virtual std::pair<double, GradientField> value_and_gradient(const CoefficientField& c) = 0;
};

/// Tikhonov functional of the wave inverse problem (forward + adjoint solves).
class WaveObjective final : public Objective {
 public:
  explicit WaveObjective(InverseProblem problem) : problem_(std::move(problem)) {}
  double value(const CoefficientField& c) override;
  std::pair<double, GradientField> value_and_gradient(const CoefficientField& c) override;
  const InverseProblem& problem() const noexcept { return problem_; }

 private:
  InverseProblem problem_;
};

enum class StepRule { Fixed, Armijo };

struct CgConfig {
  double theta = 1e-6;
  int max_iter = 25;
  StepRule rule = StepRule::Armijo;
  /// Fixed step, or the first Armijo trial. 0 selects step_scale / ||g0||_inf,
  /// so the first trial moves the largest cell by step_scale.
  double alpha = 0.0;
  double step_scale = 1.0;
  double shrink = 0.5;
  double armijo_slope = 1e-4;
  int max_trials = 20;
  /// Reset the direction to -g every this many iterations (0: never).
  int restart_every = 0;
  /// Stop when ||g|| changes by less than this fraction for `stall_window`
  /// consecutive iterations.
  double stall_tolerance = 1e-3;
  int stall_window = 3;

  void validate() const;
};

struct IterationRecord {
  int m = 0;
  double J = 0.0;
  double g_norm = 0.0;
  double max_c = 0.0;
  double alpha = 0.0;  // step that produced this iterate (0 for m = 0)
  double beta = 0.0;   // FR coefficient used for the direction leading here
  double wall_seconds = 0.0;
  bool line_search_failed = false;
};

struct InversionState {
  int m = 0;
  CoefficientField c;
  GradientField g;
  GradientField d;
  double J = 0.0;
  double alpha0 = 0.0;
  std::optional<double> prev_g_norm;  // ||g^{m-1}||, unset right after a restart
  std::vector<IterationRecord> history;
};

enum class StopReason { GradientTolerance, MaxIterations, Stalled };

struct InversionReport {
  StopReason reason = StopReason::MaxIterations;
  std::vector<IterationRecord> iterations;
};

const char* to_string(StopReason r);

/// Evaluates J and g at `start` (projected into the admissible set) and
/// records iteration 0.
InversionState initialize(Objective& objective, const CgConfig& config,
                          const CoefficientField& start);

/// One projected Fletcher-Reeves update: d = -g + beta d_prev with
/// beta = ||g||^2 / ||g_prev||^2, c <- project(c + alpha d), then J and g at
/// the new iterate. A direction that is not a descent direction is replaced
/// by -g. When Armijo backtracking fails, the step alpha0 / 10 is taken and
/// the record is flagged.
InversionState cg_step(InversionState state, Objective& objective, const CgConfig& config);

struct RunResult {
  InversionState state;
  InversionReport report;
};

/// Iterates until ||g|| <= theta, max_iter, or ||g|| stalls. `on_iteration`
/// sees every iterate, the initial one included.
RunResult run(const CgConfig& config, Objective& objective, const CoefficientField& start,
              const std::function<void(const InversionState&)>& on_iteration = {});

/// Header "m,J,g_norm,max_c,alpha,beta,wall_s,line_search_failed" and one row per record.
void write_iterations_csv(std::ostream& out, const std::vector<IterationRecord>& rows);

}  // namespace waveinv
