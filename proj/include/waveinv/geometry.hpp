#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace waveinv {

using Vec3 = std::array<double, 3>;
using Index3 = std::array<std::size_t, 3>;

/// Axis-aligned box. Axis 2 (x3) is the propagation axis of the incident wave.
struct BoxDomain {
  Vec3 lo{};
  Vec3 hi{};

  bool operator==(const BoxDomain&) const = default;
};

enum class Region : std::uint8_t { Inner, Overlap, Outer };

/// Boundary face classes: Front is the backscattering side (minimal x3),
/// Back the opposite side, Lateral the four remaining sides.
enum class Face : std::uint8_t { None, Front, Back, Lateral };

/// Node layers separating the inner region from the outer boundary.
inline constexpr std::size_t kOverlapLayers = 2;

/// Uniform structured lattice over a box, with an optional inner region where
/// the coefficient is unknown. Nodes are ordered x1 fastest, x3 slowest; cells
/// are the voxels between nodes with the same ordering.
class Grid {
 public:
  const BoxDomain& domain() const noexcept { return domain_; }
  const std::optional<BoxDomain>& inner() const noexcept { return inner_; }
  double h() const noexcept { return h_; }
  const Index3& nodes() const noexcept { return n_; }
  Index3 cells() const noexcept { return {n_[0] - 1, n_[1] - 1, n_[2] - 1}; }
  std::size_t node_count() const noexcept { return n_[0] * n_[1] * n_[2]; }
  std::size_t cell_count() const noexcept { return (n_[0] - 1) * (n_[1] - 1) * (n_[2] - 1); }

  std::size_t node_index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return i + n_[0] * (j + n_[1] * k);
  }
  std::size_t cell_index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return i + (n_[0] - 1) * (j + (n_[1] - 1) * k);
  }
  Index3 node_ijk(std::size_t node) const noexcept {
    return {node % n_[0], (node / n_[0]) % n_[1], node / (n_[0] * n_[1])};
  }
  Index3 cell_ijk(std::size_t cell) const noexcept {
    const std::size_t c0 = n_[0] - 1, c1 = n_[1] - 1;
    return {cell % c0, (cell / c0) % c1, cell / (c0 * c1)};
  }

  Vec3 node_coord(std::size_t node) const noexcept;
  Vec3 cell_center(std::size_t cell) const noexcept;

  Region node_region(std::size_t node) const noexcept { return node_region_[node]; }
  Region cell_region(std::size_t cell) const noexcept { return cell_region_[cell]; }
  Face node_face(std::size_t node) const noexcept { return node_face_[node]; }

  /// Node index range [lo, hi] (inclusive, per axis) of the inner region.
  /// Empty when the grid has no inner region.
  std::optional<std::array<Index3, 2>> inner_node_range() const noexcept { return inner_range_; }

  bool same_lattice(const Grid& other) const noexcept;

 private:
  friend Grid build_grid(const BoxDomain&, const BoxDomain&, double);
  friend Grid build_grid(const BoxDomain&, double);

  void classify();

  BoxDomain domain_;
  std::optional<BoxDomain> inner_;
  double h_ = 0.0;
  Index3 n_{};
  std::optional<std::array<Index3, 2>> inner_range_;
  std::vector<Region> node_region_;
  std::vector<Region> cell_region_;
  std::vector<Face> node_face_;
};

/// Nodes carrying one face tag, with the outward unit normal of the face each
/// node is attributed to.
struct FaceSet {
  Face tag = Face::None;
  std::vector<std::size_t> nodes;
  std::vector<Vec3> normals;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Builds the lattice for `domain` with spacing `h` and inner region `inner`.
/// Throws Error{MarginTooSmall} when fewer than two node layers separate the
/// inner box from the boundary, Error{IncommensurateExtent} when an extent or
/// offset is not a multiple of h.
Grid build_grid(const BoxDomain& domain, const BoxDomain& inner, double h);

/// Lattice without an inner region: every node is Outer and c is pinned to 1.
/// Used for homogeneous test problems on thin grids.
Grid build_grid(const BoxDomain& domain, double h);

FaceSet faces(const Grid& grid, Face tag);

}  // namespace waveinv
