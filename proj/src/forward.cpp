#include "waveinv/forward.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "waveinv/error.hpp"

namespace waveinv {

namespace {

constexpr std::size_t kBlowupCheckInterval = 50;

void check_finite(std::span<const double> u, std::size_t k) {
  for (double v : u) {
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "non-finite wave field at time level " << k;
      throw Error(ErrorCode::NonFiniteField, os.str());
    }
  }
}

std::vector<double> sample(const Grid& grid, const InitialCondition::Profile& f) {
  std::vector<double> out(grid.node_count(), 0.0);
  if (!f) return out;
  for (std::size_t node = 0; node < out.size(); ++node) out[node] = f(grid.node_coord(node));
  return out;
}

}  // namespace

double pulse_value(const SourceSpec& src, double t) {
  if (t <= 0.0 || t > src.pulse_end()) return 0.0;
  return std::sin(src.omega * t);
}

TimeAxis make_time_axis(double tau, double final_time) {
  if (!(tau > 0.0) || !(final_time > 0.0))
    throw Error(ErrorCode::InvalidArgument, "time step and final time must be positive");
  const double ratio = final_time / tau;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * ratio) {
    std::ostringstream os;
    os << "final time " << final_time << " is not a multiple of tau " << tau;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  if (steps < 2.0) throw Error(ErrorCode::InvalidArgument, "time axis needs at least two steps");
  return {tau, final_time, static_cast<std::size_t>(steps)};
}

Damping WaveProblem::damping_at(std::size_t k) const noexcept {
  const bool past_pulse = time.time(k) > source.pulse_end();
  const auto active = [&](FaceMode m) {
    return m == FaceMode::Absorbing || (m == FaceMode::SourceThenAbsorbing && past_pulse);
  };
  return {active(boundary.front), active(boundary.back)};
}

bool WaveProblem::source_active(std::size_t k) const noexcept {
  // The switch instant t1 itself belongs to the source phase.
  return boundary.front == FaceMode::SourceThenAbsorbing && time.time(k) <= source.pulse_end();
}

double cfl_max_tau(const Grid& grid, const CoefficientField& c) {
  return grid.h() / (std::sqrt(c.max()) * std::sqrt(3.0));
}

std::vector<double> initial_displacement(const Grid& grid, const InitialCondition& ic) {
  switch (ic.kind) {
    case InitialCondition::Kind::Zero: return std::vector<double>(grid.node_count(), 0.0);
    case InitialCondition::Kind::GaussianBump:
      return sample(grid, [](const Vec3& x) {
        return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
      });
    case InitialCondition::Kind::Custom: return sample(grid, ic.f0);
  }
  return {};
}

std::vector<double> initial_velocity(const Grid& grid, const InitialCondition& ic) {
  if (ic.kind == InitialCondition::Kind::Custom) return sample(grid, ic.f1);
  return std::vector<double>(grid.node_count(), 0.0);
}

std::shared_ptr<const FaceSet> front_faces(const Grid& grid) {
  return std::make_shared<const FaceSet>(faces(grid, Face::Front));
}

ForwardResult forward_solve(const CoefficientField& c, const WaveProblem& problem,
                            Record record) {
  const Grid& grid = *problem.grid;
  if (!c.grid().same_lattice(grid))
    throw Error(ErrorCode::GridMismatch, "coefficient field lives on a different grid");
  for (double v : c.values()) {
    if (!std::isfinite(v) || !(v > 0.0))
      throw Error(ErrorCode::ValueOutOfBounds, "coefficient must be finite and positive");
  }
  const TimeAxis& ta = problem.time;
  const double bound = cfl_max_tau(grid, c);
  if (ta.tau > bound * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "tau " << ta.tau << " exceeds the stable step " << bound;
    throw Error(ErrorCode::CflViolation, os.str());
  }

  const Stencil stencil = build_stencil(c);
  const std::size_t nn = grid.node_count();
  const std::size_t plane = stencil.plane_size();

  ForwardResult result{BoundaryTrace(front_faces(grid), ta.levels(), ta.tau), std::nullopt};
  if (record == Record::Full) result.history.emplace(nn, ta.levels(), ta.tau);

  std::vector<double> prev = initial_displacement(grid, problem.initial);
  std::vector<double> cur(nn), next(nn);
  std::vector<double> load(plane, 0.0);

  const auto fill_load = [&](std::size_t k) -> std::span<const double> {
    if (!problem.source_active(k)) return {};
    const double p = pulse_value(problem.source, ta.time(k));
    for (std::size_t i = 0; i < plane; ++i) load[i] = p * stencil.face_area[i];
    return load;
  };
  const auto store = [&](std::size_t k, std::span<const double> u) {
    std::copy_n(u.begin(), plane, result.trace.values.begin() + static_cast<long>(k * plane));
    if (result.history) std::copy(u.begin(), u.end(), result.history->level(k).begin());
  };

  check_finite(prev, 0);
  store(0, prev);

  // Second-order start: u1 = u0 + tau f1 + tau^2/2 M^-1 (G0 - K u0).
  {
    const std::vector<double> f1 = initial_velocity(grid, problem.initial);
    kernels::leapfrog_step(stencil, {ta.tau, {}, {}}, prev, prev, fill_load(0), next);
    for (std::size_t i = 0; i < nn; ++i) cur[i] = 0.5 * (prev[i] + next[i]) + ta.tau * f1[i];
  }
  store(1, cur);

  for (std::size_t k = 1; k < ta.steps; ++k) {
    const Damping damp = problem.damping_at(k);
    kernels::leapfrog_step(stencil, {ta.tau, damp, damp}, cur, prev, fill_load(k), next);
    if ((k + 1) % kBlowupCheckInterval == 0 || k + 1 == ta.steps) check_finite(next, k + 1);
    store(k + 1, next);
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return result;
}

}  // namespace waveinv
