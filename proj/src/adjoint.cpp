#include "waveinv/adjoint.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "waveinv/error.hpp"

namespace waveinv {

double cutoff(const CutoffSpec& spec, double t, double final_time) {
  if (!(spec.window > 0.0) || !(spec.window < final_time))
    throw Error(ErrorCode::InvalidArgument, "cutoff window must lie in (0, T)");
  if (t >= final_time) return 0.0;
  const double s = (t - (final_time - spec.window)) / spec.window;
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  const double s3 = s * s * s;
  return std::clamp(1.0 - s3 * (10.0 - 15.0 * s + 6.0 * s * s), 0.0, 1.0);
}

BoundaryTrace make_residual(const BoundaryTrace& u_trace, const BoundaryTrace& data,
                            const CutoffSpec& spec) {
  if (!u_trace.same_shape(data)) {
    std::ostringstream os;
    os << "trace shapes differ: " << u_trace.n_levels << "x" << u_trace.n_face << " (tau "
       << u_trace.tau << ") vs " << data.n_levels << "x" << data.n_face << " (tau " << data.tau
       << ")";
    throw Error(ErrorCode::TraceMismatch, os.str());
  }
  BoundaryTrace r(u_trace.face, u_trace.n_levels, u_trace.tau);
  r.n_face = u_trace.n_face;
  r.values.assign(u_trace.values.size(), 0.0);
  const double T = u_trace.final_time();
  for (std::size_t k = 0; k < r.n_levels; ++k) {
    const double z = cutoff(spec, u_trace.tau * static_cast<double>(k), T);
    for (std::size_t i = 0; i < r.n_face; ++i) r(k, i) = (u_trace(k, i) - data(k, i)) * z;
  }
  return r;
}

WaveHistory adjoint_solve(const CoefficientField& c, const BoundaryTrace& residual,
                          const WaveProblem& problem) {
  const Grid& grid = *problem.grid;
  const TimeAxis& ta = problem.time;
  const std::size_t plane = grid.nodes()[0] * grid.nodes()[1];
  if (residual.n_face != plane || residual.n_levels != ta.levels() ||
      std::abs(residual.tau - ta.tau) > 1e-12 * ta.tau)
    throw Error(ErrorCode::TraceMismatch, "residual does not match the front face and time axis");
  if (!c.grid().same_lattice(grid))
    throw Error(ErrorCode::GridMismatch, "coefficient field lives on a different grid");
  const double bound = cfl_max_tau(grid, c);
  if (ta.tau > bound * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "tau " << ta.tau << " exceeds the stable step " << bound;
    throw Error(ErrorCode::CflViolation, os.str());
  }

  const Stencil stencil = build_stencil(c);
  const std::size_t nn = grid.node_count();
  const std::size_t N = ta.steps;
  WaveHistory lambda(nn, ta.levels(), ta.tau);
  const std::vector<double> zeros(nn, 0.0);
  std::vector<double> load(plane);

  // lambda^N = lambda^{N+1} = 0; level j produces level j - 1.
  for (std::size_t j = N; j >= 1; --j) {
    // Trapezoidal weight of the misfit sum, 1/2 at the final level.
    const double w = (j == N) ? 0.5 : 1.0;
    for (std::size_t i = 0; i < plane; ++i) load[i] = -w * stencil.face_area[i] * residual(j, i);

    StepParams p{ta.tau, {}, {}};
    if (j + 1 <= N - 1) p.old_side = problem.damping_at(j + 1);
    if (j >= 2) p.new_side = problem.damping_at(j - 1);

    std::span<const double> x = j == N ? std::span<const double>(zeros) : lambda.level(j);
    std::span<const double> y = j + 1 >= N ? std::span<const double>(zeros) : lambda.level(j + 1);
    kernels::leapfrog_step(stencil, p, x, y, load, lambda.level(j - 1));
    if ((N - j + 1) % 50 == 0 || j == 1) {
      for (double v : lambda.level(j - 1)) {
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteField, "non-finite adjoint field");
      }
    }
  }
  return lambda;
}

}  // namespace waveinv
