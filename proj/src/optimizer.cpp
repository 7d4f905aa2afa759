#include "waveinv/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "waveinv/error.hpp"

namespace waveinv {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

GradientField scaled(const GradientField& g, double s) {
  GradientField out = g;
  for (double& v : out.values) v *= s;
  return out;
}

}  // namespace

double WaveObjective::value(const CoefficientField& c) { return evaluate(problem_, c).terms.total(); }

std::pair<double, GradientField> WaveObjective::value_and_gradient(const CoefficientField& c) {
  Evaluation e = evaluate_with_gradient(problem_, c);
  return {e.terms.total(), std::move(*e.gradient)};
}

void CgConfig::validate() const {
  if (!(theta > 0.0)) throw Error(ErrorCode::InvalidArgument, "theta must be positive");
  if (max_iter < 0) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 0");
  if (alpha < 0.0) throw Error(ErrorCode::InvalidArgument, "alpha must be >= 0");
  if (rule == StepRule::Fixed && !(alpha > 0.0))
    throw Error(ErrorCode::InvalidArgument, "fixed step rule needs alpha > 0");
  if (!(shrink > 0.0 && shrink < 1.0)) throw Error(ErrorCode::InvalidArgument, "shrink must lie in (0, 1)");
  if (!(step_scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "step_scale must be positive");
  if (max_trials < 1) throw Error(ErrorCode::InvalidArgument, "max_trials must be >= 1");
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::GradientTolerance: return "gradient_tolerance";
    case StopReason::MaxIterations: return "max_iterations";
    case StopReason::Stalled: return "stalled";
  }
  return "unknown";
}

InversionState initialize(Objective& objective, const CgConfig& config,
                          const CoefficientField& start) {
  config.validate();
  const auto t0 = Clock::now();
  InversionState s;
  s.c = project(start, start.upper());
  auto [J, g] = objective.value_and_gradient(s.c);
  s.J = J;
  s.g = std::move(g);
  s.d = scaled(s.g, -1.0);
  s.alpha0 = config.alpha > 0.0 ? config.alpha
                               : config.step_scale / std::max(s.g.max_abs(), 1e-300);
  s.history.push_back({0, s.J, s.g.l2_norm(), s.c.max(), 0.0, 0.0, seconds_since(t0), false});
  return s;
}

InversionState cg_step(InversionState s, Objective& objective, const CgConfig& config) {
  const auto t0 = Clock::now();
  const double g_norm = s.g.l2_norm();

  // Direction. d^0 = -g^0; restarts drop the conjugate part.
  double beta = 0.0;
  const bool restart = !s.prev_g_norm || *s.prev_g_norm == 0.0 ||
                       (config.restart_every > 0 && s.m % config.restart_every == 0);
  if (!restart) beta = (g_norm * g_norm) / (*s.prev_g_norm * *s.prev_g_norm);
  const double upper = s.c.upper();
  // components pushing into an active bound do not move c
  const auto mask = [&](GradientField& v) {
    for (std::size_t i = 0; i < v.values.size(); ++i) {
      if ((s.c[i] <= 1.0 && v.values[i] < 0.0) || (s.c[i] >= upper && v.values[i] > 0.0))
        v.values[i] = 0.0;
    }
  };
  GradientField d = scaled(s.g, -1.0);
  if (beta != 0.0) {
    for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] += beta * s.d.values[i];
    GradientField free = d;
    mask(free);
    if (s.g.dot(free.values) >= 0.0) {
      beta = 0.0;
      d = scaled(s.g, -1.0);
    }
  }

  const auto trial_point = [&](double alpha) {
    CoefficientField c = s.c;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += alpha * d.values[i];
    return project(c, upper);
  };

  double alpha = s.alpha0;
  bool failed = false;
  CoefficientField next;
  if (config.rule == StepRule::Fixed) {
    next = trial_point(alpha);
  } else {
    bool accepted = false;
    for (int trial = 0; trial < config.max_trials; ++trial, alpha *= config.shrink) {
      next = trial_point(alpha);
      std::vector<double> step(next.size());
      for (std::size_t i = 0; i < step.size(); ++i) step[i] = next[i] - s.c[i];
      const double J_trial = objective.value(next);
      if (J_trial <= s.J + config.armijo_slope * s.g.dot(step)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      failed = true;
      alpha = s.alpha0 / 10.0;
      next = trial_point(alpha);
    }
  }

  auto [J, g] = objective.value_and_gradient(next);
  s.prev_g_norm = g_norm;
  s.c = std::move(next);
  s.d = std::move(d);
  s.g = std::move(g);
  s.J = J;
  s.m += 1;
  s.history.push_back({s.m, s.J, s.g.l2_norm(), s.c.max(), alpha, beta, seconds_since(t0), failed});
  return s;
}

RunResult run(const CgConfig& config, Objective& objective, const CoefficientField& start,
              const std::function<void(const InversionState&)>& on_iteration) {
  RunResult r{initialize(objective, config, start), {}};
  if (on_iteration) on_iteration(r.state);

  const auto stalled = [&](const std::vector<IterationRecord>& h) {
    const int w = config.stall_window;
    if (w <= 0 || static_cast<int>(h.size()) < w + 1) return false;
    for (std::size_t i = h.size() - static_cast<std::size_t>(w); i < h.size(); ++i) {
      const double prev = h[i - 1].g_norm;
      if (prev == 0.0 || std::abs(h[i].g_norm - prev) / prev >= config.stall_tolerance) return false;
    }
    return true;
  };

  while (true) {
    const auto& h = r.state.history;
    if (h.back().g_norm <= config.theta) {
      r.report.reason = StopReason::GradientTolerance;
      break;
    }
    if (r.state.m >= config.max_iter) {
      r.report.reason = StopReason::MaxIterations;
      break;
    }
    if (stalled(h)) {
      r.report.reason = StopReason::Stalled;
      break;
    }
    r.state = cg_step(std::move(r.state), objective, config);
    if (on_iteration) on_iteration(r.state);
  }
  r.report.iterations = r.state.history;
  return r;
}

void write_iterations_csv(std::ostream& out, const std::vector<IterationRecord>& rows) {
  out << "m,J,g_norm,max_c,alpha,beta,wall_s,line_search_failed\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.6f,%d\n", r.m, r.J,
                  r.g_norm, r.max_c, r.alpha, r.beta, r.wall_seconds, r.line_search_failed ? 1 : 0);
    out << buf;
  }
}

}  // namespace waveinv
