#include "waveinv/objective.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "waveinv/error.hpp"
#include "waveinv/kernels.hpp"

namespace waveinv {

double TikhonovSpec::effective_gamma() const {
  if (gamma_rule) {
    const auto [delta, nu] = *gamma_rule;
    if (!(nu > 0.0 && nu < 0.25)) throw Error(ErrorCode::InvalidArgument, "nu must lie in (0, 1/4)");
    if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
    return std::pow(delta, 2.0 * nu);
  }
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  return gamma;
}

double GradientField::l2_norm() const {
  const double h = grid->h();
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum * h * h * h);
}

double GradientField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double GradientField::dot(std::span<const double> v) const {
  if (v.size() != values.size()) throw Error(ErrorCode::DimensionMismatch, "gradient dot size");
  const double h = grid->h();
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += values[i] * v[i];
  return sum * h * h * h;
}

FunctionalTerms functional_terms(const BoundaryTrace& u_trace, const BoundaryTrace& data,
                                 const CoefficientField& c, const TikhonovSpec& spec) {
  const Grid& grid = c.grid();
  const std::size_t n0 = grid.nodes()[0], n1 = grid.nodes()[1];
  if (!u_trace.same_shape(data) || u_trace.n_face != n0 * n1)
    throw Error(ErrorCode::TraceMismatch, "traces are not aligned with each other and the front face");
  if (spec.c0.size() != c.size()) throw Error(ErrorCode::GridMismatch, "c0 lives on another grid");

  const double h = grid.h();
  const double T = u_trace.final_time();
  const std::size_t N = u_trace.n_levels - 1;
  std::vector<double> area(u_trace.n_face);
  for (std::size_t j = 0; j < n1; ++j) {
    for (std::size_t i = 0; i < n0; ++i) {
      const double wi = (i == 0 || i + 1 == n0) ? 0.5 : 1.0;
      const double wj = (j == 0 || j + 1 == n1) ? 0.5 : 1.0;
      area[i + n0 * j] = h * h * wi * wj;
    }
  }

  FunctionalTerms terms;
  for (std::size_t k = 0; k <= N; ++k) {
    const double w = (k == 0 || k == N) ? 0.5 : 1.0;
    const double z = cutoff(spec.cutoff, u_trace.tau * static_cast<double>(k), T);
    if (z == 0.0) continue;
    double level_sum = 0.0;
    for (std::size_t i = 0; i < u_trace.n_face; ++i) {
      const double r = u_trace(k, i) - data(k, i);
      level_sum += area[i] * r * r;
    }
    terms.misfit += 0.5 * w * u_trace.tau * z * level_sum;
  }

  const double gamma = spec.effective_gamma();
  double reg = 0.0;
  for (std::size_t cell = 0; cell < c.size(); ++cell) {
    const double d = c[cell] - spec.c0[cell];
    reg += d * d;
  }
  terms.regularization = 0.5 * gamma * reg * h * h * h;
  return terms;
}

double functional(const BoundaryTrace& u_trace, const BoundaryTrace& data,
                  const CoefficientField& c, const TikhonovSpec& spec) {
  return functional_terms(u_trace, data, c, spec).total();
}

GradientField gradient(const WaveHistory& u_hist, const WaveHistory& lambda_hist,
                       const CoefficientField& c, const TikhonovSpec& spec) {
  const Grid& grid = c.grid();
  if (u_hist.levels() != lambda_hist.levels() || u_hist.node_count() != lambda_hist.node_count() ||
      u_hist.node_count() != grid.node_count() || u_hist.tau() != lambda_hist.tau())
    throw Error(ErrorCode::HistoryMismatch, "state and adjoint histories do not share grid and time axis");
  if (spec.c0.size() != c.size()) throw Error(ErrorCode::GridMismatch, "c0 lives on another grid");

  GradientField g{c.grid_ptr(), std::vector<double>(c.size(), 0.0)};
  const std::size_t N = u_hist.steps();
  const double tau = u_hist.tau();
  for (std::size_t k = 0; k <= N; ++k) {
    const double w = (k == 0 || k == N) ? 0.5 * tau : tau;
    kernels::accumulate_gradient(grid, u_hist.level(k), lambda_hist.level(k), w, g.values);
  }
  const double gamma = spec.effective_gamma();
  for (std::size_t cell = 0; cell < c.size(); ++cell) {
    if (grid.cell_region(cell) == Region::Inner)
      g.values[cell] += gamma * (c[cell] - spec.c0[cell]);
    else
      g.values[cell] = 0.0;
  }
  return g;
}

CoefficientField project(const CoefficientField& c, double upper) {
  CoefficientField out = c;
  const Grid& grid = c.grid();
  for (std::size_t cell = 0; cell < out.size(); ++cell) {
    out[cell] = grid.cell_region(cell) == Region::Inner ? std::clamp(c[cell], 1.0, upper) : 1.0;
  }
  return out;
}

std::vector<double> postprocess_values(std::span<const double> values, double P) {
  if (!(P > 0.0 && P < 1.0)) throw Error(ErrorCode::InvalidArgument, "P must lie in (0, 1)");
  std::vector<double> out(values.begin(), values.end());
  if (out.empty()) return out;
  const double threshold = P * *std::max_element(values.begin(), values.end());
  for (double& v : out) {
    if (!(v > threshold)) v = 1.0;
  }
  return out;
}

CoefficientField postprocess(const CoefficientField& c, double P) {
  if (!(P > 0.0 && P < 1.0)) throw Error(ErrorCode::InvalidArgument, "P must lie in (0, 1)");
  const Grid& grid = c.grid();
  const bool has_inner = grid.inner().has_value();
  double max_inner = 0.0;
  for (std::size_t cell = 0; cell < c.size(); ++cell) {
    if (!has_inner || grid.cell_region(cell) == Region::Inner) max_inner = std::max(max_inner, c[cell]);
  }
  CoefficientField out = c;
  for (std::size_t cell = 0; cell < c.size(); ++cell) {
    if (!(c[cell] > P * max_inner)) out[cell] = 1.0;
  }
  return out;
}

namespace {

double l2_distance(const CoefficientField& a, const CoefficientField& b) {
  const double h = a.grid().h();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sum * h * h * h);
}

}  // namespace

ErrorBound theorem3_bound(const GradientField& g, const CoefficientField& c,
                          const CoefficientField& c0, double delta, double nu, double xi,
                          const CoefficientField& c_star) {
  if (c.size() != c_star.size() || c0.size() != c_star.size() || g.values.size() != c.size())
    throw Error(ErrorCode::GridMismatch, "bound inputs live on different grids");
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  return {l2_distance(c, c_star),
          2.0 / std::pow(delta, 2.0 * nu) * g.l2_norm() + xi * l2_distance(c0, c_star)};
}

ErrorBound theorem3_bound(const WaveHistory& u_hist, const WaveHistory& lambda_hist,
                          const CoefficientField& c, const TikhonovSpec& spec, double delta,
                          double nu, double xi, const CoefficientField& c_star) {
  return theorem3_bound(gradient(u_hist, lambda_hist, c, spec), c, spec.c0, delta, nu, xi, c_star);
}

Evaluation evaluate(const InverseProblem& problem, const CoefficientField& c) {
  const ForwardResult fwd = forward_solve(c, problem.wave, Record::TraceOnly);
  return {functional_terms(fwd.trace, problem.data, c, problem.tikhonov), std::nullopt};
}

Evaluation evaluate_with_gradient(const InverseProblem& problem, const CoefficientField& c) {
  const ForwardResult fwd = forward_solve(c, problem.wave, Record::Full);
  Evaluation e{functional_terms(fwd.trace, problem.data, c, problem.tikhonov), std::nullopt};
  const BoundaryTrace residual = make_residual(fwd.trace, problem.data, problem.tikhonov.cutoff);
  const WaveHistory lambda = adjoint_solve(c, residual, problem.wave);
  e.gradient = gradient(*fwd.history, lambda, c, problem.tikhonov);
  return e;
}

}  // namespace waveinv
