#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "waveinv/geometry.hpp"

namespace waveinv {

using GridPtr = std::shared_ptr<const Grid>;

/// Piecewise-constant coefficient, one value per cell. Admissible values lie in
/// [1, upper]; cells outside the inner region hold exactly 1.
class CoefficientField {
 public:
  CoefficientField() = default;
  CoefficientField(GridPtr grid, double upper, double value = 1.0);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  double upper() const noexcept { return upper_; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::size_t cell) noexcept { return values_[cell]; }
  double operator[](std::size_t cell) const noexcept { return values_[cell]; }
  std::size_t size() const noexcept { return values_.size(); }

  double max() const noexcept;
  /// Index of the largest value; ties resolve to the lowest index.
  std::size_t argmax() const noexcept;

  /// Throws Error{ValueOutOfBounds} if any value leaves [1, upper] or a cell
  /// outside the inner region differs from 1.
  void validate() const;

  bool operator==(const CoefficientField& other) const noexcept {
    return values_ == other.values_ && upper_ == other.upper_;
  }

 private:
  GridPtr grid_;
  double upper_ = 1.0;
  std::vector<double> values_;
};

/// Nodal field at one time level.
struct WaveState {
  std::vector<double> u;
  std::size_t k = 0;
};

/// Every time level k = 0..N of a nodal field, stored contiguously.
class WaveHistory {
 public:
  WaveHistory() = default;
  WaveHistory(std::size_t node_count, std::size_t levels, double tau)
      : nodes_(node_count), levels_(levels), tau_(tau), data_(node_count * levels, 0.0) {}

  std::size_t node_count() const noexcept { return nodes_; }
  std::size_t levels() const noexcept { return levels_; }
  std::size_t steps() const noexcept { return levels_ - 1; }
  double tau() const noexcept { return tau_; }
  double final_time() const noexcept { return tau_ * static_cast<double>(levels_ - 1); }

  std::span<double> level(std::size_t k) noexcept { return {data_.data() + k * nodes_, nodes_}; }
  std::span<const double> level(std::size_t k) const noexcept {
    return {data_.data() + k * nodes_, nodes_};
  }
  WaveState state(std::size_t k) const {
    auto l = level(k);
    return {std::vector<double>(l.begin(), l.end()), k};
  }

 private:
  std::size_t nodes_ = 0;
  std::size_t levels_ = 0;
  double tau_ = 0.0;
  std::vector<double> data_;
};

/// Space-time record on one face: value(k, i) for time level k and face node i.
struct BoundaryTrace {
  std::shared_ptr<const FaceSet> face;  // may be null for traces read from disk
  std::size_t n_face = 0;
  std::size_t n_levels = 0;
  double tau = 0.0;
  std::vector<double> values;

  BoundaryTrace() = default;
  BoundaryTrace(std::shared_ptr<const FaceSet> f, std::size_t levels, double step)
      : face(std::move(f)), n_face(face ? face->size() : 0), n_levels(levels), tau(step),
        values(n_face * levels, 0.0) {}

  double& operator()(std::size_t k, std::size_t i) noexcept { return values[k * n_face + i]; }
  double operator()(std::size_t k, std::size_t i) const noexcept { return values[k * n_face + i]; }
  std::span<const double> level(std::size_t k) const noexcept {
    return {values.data() + k * n_face, n_face};
  }
  double final_time() const noexcept { return tau * static_cast<double>(n_levels - 1); }

  bool same_shape(const BoundaryTrace& other) const noexcept;
};

struct NoiseSpec {
  double sigma = 0.0;  // percent
  std::uint64_t seed = 0;
  /// Deterministic scale u*(1 + sigma/100) instead of random perturbation.
  bool literal = false;
};

/// Multiplicative noise u*(1 + sigma/100 * r) with r uniform on [-1, 1] drawn
/// from a generator seeded with spec.seed.
BoundaryTrace add_noise(const BoundaryTrace& trace, const NoiseSpec& spec);

/// Point-samples a trace recorded on a grid of spacing h/2 and step tau/2 at
/// the nodes and levels it shares with `coarse_grid` and `coarse_tau`.
BoundaryTrace restrict_to_coarse(const BoundaryTrace& fine, const Grid& fine_grid,
                                 const Grid& coarse_grid, double coarse_tau,
                                 std::shared_ptr<const FaceSet> coarse_face);

struct Ball {
  Vec3 center{};
  double radius = 0.0;
  double value = 1.0;

  bool operator==(const Ball&) const = default;
};

struct PhantomSpec {
  enum class Kind { Balls, Gaussian1, Gaussian3, Uniform };
  Kind kind = Kind::Uniform;
  std::vector<Ball> balls;
  double uniform_value = 1.0;
};

/// Three balls of radii 0.2/0.3/0.4 and value 4 on the x3 = 0 plane; with
/// `shifted` the middle ball moves 0.3 toward the front face.
std::vector<Ball> default_balls(bool shifted);

/// Samples the phantom at cell centers of the inner region; other cells are 1.
CoefficientField phantom(const PhantomSpec& spec, const GridPtr& grid, double upper);

}  // namespace waveinv
