#pragma once

#include <functional>
#include <numbers>
#include <optional>

#include "waveinv/fields.hpp"
#include "waveinv/kernels.hpp"

namespace waveinv {

/// Plane-wave pulse p(t) = sin(omega t) on (0, 2 pi / omega], zero afterwards.
struct SourceSpec {
  double omega = 40.0;

  double pulse_end() const noexcept { return 2.0 * std::numbers::pi / omega; }
};

double pulse_value(const SourceSpec& src, double t);

struct InitialCondition {
  enum class Kind { Zero, GaussianBump, Custom };
  using Profile = std::function<double(const Vec3&)>;

  Kind kind = Kind::Zero;
  Profile f0;  // Custom only
  Profile f1;  // Custom only; empty means zero velocity

  static InitialCondition zero() { return {}; }
  /// f0 = exp(-|x|^2), f1 = 0.
  static InitialCondition gaussian_bump() { return {Kind::GaussianBump, {}, {}}; }
  static InitialCondition custom(Profile f0, Profile f1 = {}) {
    return {Kind::Custom, std::move(f0), std::move(f1)};
  }
};

struct TimeAxis {
  double tau = 0.0;
  double final_time = 0.0;
  std::size_t steps = 0;

  double time(std::size_t k) const noexcept { return tau * static_cast<double>(k); }
  std::size_t levels() const noexcept { return steps + 1; }
};

/// Throws Error{InvalidArgument} unless final_time / tau is an integer within 1e-9.
TimeAxis make_time_axis(double tau, double final_time);

enum class FaceMode { Reflecting, Absorbing, SourceThenAbsorbing };

/// Conditions on the front and back faces; lateral faces always reflect.
struct BoundaryModes {
  FaceMode front = FaceMode::SourceThenAbsorbing;
  FaceMode back = FaceMode::Absorbing;
};

/// Everything the wave solvers need besides the coefficient.
struct WaveProblem {
  GridPtr grid;
  SourceSpec source;
  InitialCondition initial;
  TimeAxis time;
  BoundaryModes boundary;

  /// Absorbing faces active in the update that produces level k + 1.
  Damping damping_at(std::size_t k) const noexcept;
  /// Whether the front plane carries the pulse flux at level k.
  bool source_active(std::size_t k) const noexcept;
};

/// Largest stable leapfrog step h / sqrt(3 max c).
double cfl_max_tau(const Grid& grid, const CoefficientField& c);

enum class Record { TraceOnly, Full };

struct ForwardResult {
  BoundaryTrace trace;  // u on the front face at every level
  std::optional<WaveHistory> history;
};

/// Explicit leapfrog solve of u_tt = div(c grad u) with the configured face
/// conditions. Throws Error{CflViolation} when tau exceeds the stable step and
/// Error{NonFiniteField} if the field blows up (checked every 50 steps).
ForwardResult forward_solve(const CoefficientField& c, const WaveProblem& problem,
                            Record record = Record::TraceOnly);

/// Nodal samples of the initial displacement and velocity.
std::vector<double> initial_displacement(const Grid& grid, const InitialCondition& ic);
std::vector<double> initial_velocity(const Grid& grid, const InitialCondition& ic);

std::shared_ptr<const FaceSet> front_faces(const Grid& grid);

}  // namespace waveinv
