#include "waveinv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "waveinv/error.hpp"

namespace waveinv {

namespace {

constexpr double kRelTol = 1e-9;

// Number of lattice steps spanning `length`; throws if not an integer multiple of h.
std::size_t steps_for(double length, double h, const char* what) {
  const double ratio = length / h;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > kRelTol * std::max(1.0, std::abs(ratio))) {
    std::ostringstream os;
    os << what << " " << length << " is not a multiple of h=" << h;
    throw Error(ErrorCode::IncommensurateExtent, os.str());
  }
  return static_cast<std::size_t>(rounded);
}

void check_box(const BoxDomain& box, const char* what) {
  for (int a = 0; a < 3; ++a) {
    if (!(box.lo[a] < box.hi[a])) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + " has lo >= hi");
    }
  }
}

Index3 node_counts(const BoxDomain& domain, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "h must be positive");
  check_box(domain, "domain");
  Index3 n{};
  for (int a = 0; a < 3; ++a) {
    n[a] = steps_for(domain.hi[a] - domain.lo[a], h, "extent") + 1;
    if (n[a] < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 nodes per axis");
  }
  return n;
}

}  // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IncommensurateExtent: return "IncommensurateExtent";
    case ErrorCode::MarginTooSmall: return "MarginTooSmall";
    case ErrorCode::ValueOutOfBounds: return "ValueOutOfBounds";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::CorruptHeader: return "CorruptHeader";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::NonFiniteField: return "NonFiniteField";
    case ErrorCode::TraceMismatch: return "TraceMismatch";
    case ErrorCode::HistoryMismatch: return "HistoryMismatch";
    case ErrorCode::LineSearchFailed: return "LineSearchFailed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

Vec3 Grid::node_coord(std::size_t node) const noexcept {
  const Index3 ijk = node_ijk(node);
  Vec3 x{};
  for (int a = 0; a < 3; ++a) x[a] = domain_.lo[a] + static_cast<double>(ijk[a]) * h_;
  return x;
}

Vec3 Grid::cell_center(std::size_t cell) const noexcept {
  const Index3 ijk = cell_ijk(cell);
  Vec3 x{};
  for (int a = 0; a < 3; ++a) x[a] = domain_.lo[a] + (static_cast<double>(ijk[a]) + 0.5) * h_;
  return x;
}

bool Grid::same_lattice(const Grid& other) const noexcept {
  return n_ == other.n_ && h_ == other.h_ && domain_ == other.domain_ &&
         inner_range_ == other.inner_range_;
}

void Grid::classify() {
  const std::size_t nn = node_count();
  node_region_.assign(nn, Region::Outer);
  node_face_.assign(nn, Face::None);
  cell_region_.assign(cell_count(), Region::Outer);

  for (std::size_t k = 0; k < n_[2]; ++k) {
    for (std::size_t j = 0; j < n_[1]; ++j) {
      for (std::size_t i = 0; i < n_[0]; ++i) {
        const std::size_t node = node_index(i, j, k);
        // Priority FRONT > BACK > LATERAL for edge and corner nodes.
        if (k == 0) {
          node_face_[node] = Face::Front;
        } else if (k == n_[2] - 1) {
          node_face_[node] = Face::Back;
        } else if (i == 0 || i == n_[0] - 1 || j == 0 || j == n_[1] - 1) {
          node_face_[node] = Face::Lateral;
        }
        if (!inner_range_) continue;
        const Index3 ijk{i, j, k};
        const auto& [lo, hi] = *inner_range_;
        std::size_t dist = 0;
        for (int a = 0; a < 3; ++a) {
          if (ijk[a] < lo[a]) dist = std::max(dist, lo[a] - ijk[a]);
          if (ijk[a] > hi[a]) dist = std::max(dist, ijk[a] - hi[a]);
        }
        node_region_[node] = dist == 0                 ? Region::Inner
                             : dist <= kOverlapLayers ? Region::Overlap
                                                      : Region::Outer;
      }
    }
  }

  if (!inner_range_) return;
  const auto& [lo, hi] = *inner_range_;
  const Index3 nc = cells();
  for (std::size_t k = 0; k < nc[2]; ++k) {
    for (std::size_t j = 0; j < nc[1]; ++j) {
      for (std::size_t i = 0; i < nc[0]; ++i) {
        const Index3 ijk{i, j, k};
        bool inside = true;
        for (int a = 0; a < 3; ++a) inside = inside && ijk[a] >= lo[a] && ijk[a] + 1 <= hi[a];
        Region r = Region::Outer;
        if (inside) {
          r = Region::Inner;
        } else {
          for (std::size_t corner = 0; corner < 8 && r == Region::Outer; ++corner) {
            const std::size_t node = node_index(i + (corner & 1), j + ((corner >> 1) & 1),
                                                k + ((corner >> 2) & 1));
            if (node_region_[node] != Region::Outer) r = Region::Overlap;
          }
        }
        cell_region_[cell_index(i, j, k)] = r;
      }
    }
  }
}

Grid build_grid(const BoxDomain& domain, const BoxDomain& inner, double h) {
  Grid g;
  g.n_ = node_counts(domain, h);
  check_box(inner, "inner");

  std::array<Index3, 2> range{};
  for (int a = 0; a < 3; ++a) {
    const double lo_margin = inner.lo[a] - domain.lo[a];
    const double hi_margin = domain.hi[a] - inner.hi[a];
    const double min_margin = static_cast<double>(kOverlapLayers) * h * (1.0 - kRelTol);
    if (lo_margin < min_margin || hi_margin < min_margin) {
      std::ostringstream os;
      os << "inner box leaves margin " << std::min(lo_margin, hi_margin) << " on axis " << a
         << ", need " << kOverlapLayers << " node layers of h=" << h;
      throw Error(ErrorCode::MarginTooSmall, os.str());
    }
    range[0][a] = steps_for(lo_margin, h, "inner offset");
    range[1][a] = g.n_[a] - 1 - steps_for(hi_margin, h, "inner offset");
  }

  g.domain_ = domain;
  g.inner_ = inner;
  g.h_ = h;
  g.inner_range_ = range;
  g.classify();
  return g;
}

Grid build_grid(const BoxDomain& domain, double h) {
  Grid g;
  g.n_ = node_counts(domain, h);
  g.domain_ = domain;
  g.h_ = h;
  g.classify();
  return g;
}

FaceSet faces(const Grid& grid, Face tag) {
  FaceSet set;
  set.tag = tag;
  const Index3& n = grid.nodes();
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    if (grid.node_face(node) != tag) continue;
    const Index3 ijk = grid.node_ijk(node);
    Vec3 normal{0.0, 0.0, 0.0};
    switch (tag) {
      case Face::Front: normal[2] = -1.0; break;
      case Face::Back: normal[2] = 1.0; break;
      case Face::Lateral:
        // Lateral edge nodes take the normal of the first matching side.
        if (ijk[0] == 0) normal[0] = -1.0;
        else if (ijk[0] == n[0] - 1) normal[0] = 1.0;
        else if (ijk[1] == 0) normal[1] = -1.0;
        else normal[1] = 1.0;
        break;
      case Face::None: break;
    }
    set.nodes.push_back(node);
    set.normals.push_back(normal);
  }
  return set;
}

}  // namespace waveinv
