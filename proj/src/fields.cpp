#include "waveinv/fields.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>

#include "waveinv/error.hpp"

namespace waveinv {

CoefficientField::CoefficientField(GridPtr grid, double upper, double value)
    : grid_(std::move(grid)), upper_(upper), values_(grid_->cell_count(), 1.0) {
  if (!(upper >= 1.0)) throw Error(ErrorCode::ValueOutOfBounds, "upper bound below 1");
  for (std::size_t c = 0; c < values_.size(); ++c) {
    if (grid_->cell_region(c) == Region::Inner) values_[c] = value;
  }
}

double CoefficientField::max() const noexcept {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

std::size_t CoefficientField::argmax() const noexcept {
  return static_cast<std::size_t>(
      std::distance(values_.begin(), std::max_element(values_.begin(), values_.end())));
}

void CoefficientField::validate() const {
  for (std::size_t c = 0; c < values_.size(); ++c) {
    const double v = values_[c];
    const bool inner = grid_->cell_region(c) == Region::Inner;
    if (!(v >= 1.0 && v <= upper_) || (!inner && v != 1.0)) {
      std::ostringstream os;
      os << "cell " << c << " holds " << v << ", admissible range [1, " << upper_ << "]"
         << (inner ? "" : " and 1 outside the inner region");
      throw Error(ErrorCode::ValueOutOfBounds, os.str());
    }
  }
}

bool BoundaryTrace::same_shape(const BoundaryTrace& other) const noexcept {
  return n_face == other.n_face && n_levels == other.n_levels &&
         std::abs(tau - other.tau) <= 1e-12 * std::max(tau, other.tau);
}

BoundaryTrace add_noise(const BoundaryTrace& trace, const NoiseSpec& spec) {
  if (!(spec.sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise sigma must be >= 0");
  BoundaryTrace out = trace;
  if (spec.sigma == 0.0) return out;
  const double scale = spec.sigma / 100.0;
  if (spec.literal) {
    for (double& v : out.values) v *= 1.0 + scale;
    return out;
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (double& v : out.values) v *= 1.0 + scale * uniform(rng);
  return out;
}

BoundaryTrace restrict_to_coarse(const BoundaryTrace& fine, const Grid& fine_grid,
                                 const Grid& coarse_grid, double coarse_tau,
                                 std::shared_ptr<const FaceSet> coarse_face) {
  const auto mismatch = [](const std::string& what) {
    throw Error(ErrorCode::GridMismatch, what);
  };
  if (!fine.face || !coarse_face) mismatch("traces need face sets to restrict");
  if (std::abs(2.0 * fine_grid.h() - coarse_grid.h()) > 1e-9 * coarse_grid.h())
    mismatch("fine spacing must be half the coarse spacing");
  for (int a = 0; a < 3; ++a) {
    if (std::abs(fine_grid.domain().lo[a] - coarse_grid.domain().lo[a]) > 1e-9 * coarse_grid.h() ||
        fine_grid.nodes()[a] != 2 * (coarse_grid.nodes()[a] - 1) + 1)
      mismatch("fine and coarse lattices are not aligned");
  }
  if (std::abs(2.0 * fine.tau - coarse_tau) > 1e-9 * coarse_tau)
    mismatch("fine time step must be half the coarse step");
  if (fine.n_levels % 2 == 0) mismatch("fine trace needs an even number of steps");

  std::unordered_map<std::size_t, std::size_t> fine_pos;
  for (std::size_t i = 0; i < fine.face->nodes.size(); ++i) fine_pos[fine.face->nodes[i]] = i;

  BoundaryTrace coarse(coarse_face, (fine.n_levels - 1) / 2 + 1, coarse_tau);
  std::vector<std::size_t> src(coarse.n_face);
  for (std::size_t i = 0; i < coarse.n_face; ++i) {
    const Index3 ijk = coarse_grid.node_ijk(coarse_face->nodes[i]);
    const auto it = fine_pos.find(fine_grid.node_index(2 * ijk[0], 2 * ijk[1], 2 * ijk[2]));
    if (it == fine_pos.end()) mismatch("coarse face node has no fine counterpart");
    src[i] = it->second;
  }
  for (std::size_t k = 0; k < coarse.n_levels; ++k) {
    for (std::size_t i = 0; i < coarse.n_face; ++i) coarse(k, i) = fine(2 * k, src[i]);
  }
  return coarse;
}

std::vector<Ball> default_balls(bool shifted) {
  return {
      {{-1.5, 0.0, 0.0}, 0.2, 4.0},
      {{0.0, 0.0, shifted ? -0.3 : 0.0}, 0.3, 4.0},
      {{1.5, 0.0, 0.0}, 0.4, 4.0},
  };
}

namespace {

double gaussian_spike(const Vec3& x, double x1_center) {
  const double dx = x[0] - x1_center;
  return 5.0 * std::exp(-(dx * dx / 0.2 + x[1] * x[1] / 0.2 + x[2] * x[2] / 0.2));
}

bool inside_box(const Vec3& x, const BoxDomain& box) {
  for (int a = 0; a < 3; ++a) {
    if (x[a] < box.lo[a] || x[a] > box.hi[a]) return false;
  }
  return true;
}

void check_value(double v, double upper, const char* what) {
  if (!(v >= 1.0 && v <= upper)) {
    std::ostringstream os;
    os << what << " value " << v << " outside [1, " << upper << "]";
    throw Error(ErrorCode::ValueOutOfBounds, os.str());
  }
}

}  // namespace

CoefficientField phantom(const PhantomSpec& spec, const GridPtr& grid, double upper) {
  using Kind = PhantomSpec::Kind;
  CoefficientField field(grid, upper, 1.0);
  const auto& inner = grid->inner();

  switch (spec.kind) {
    case Kind::Uniform: check_value(spec.uniform_value, upper, "uniform"); break;
    case Kind::Gaussian1:
    case Kind::Gaussian3: check_value(6.0, upper, "gaussian peak"); break;
    case Kind::Balls:
      for (const Ball& b : spec.balls) {
        check_value(b.value, upper, "ball");
        if (!inner || !inside_box(b.center, *inner))
          throw Error(ErrorCode::ValueOutOfBounds, "ball center outside the inner region");
        if (!(b.radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "ball radius must be > 0");
      }
      break;
  }

  for (std::size_t c = 0; c < field.size(); ++c) {
    if (grid->cell_region(c) != Region::Inner) continue;
    const Vec3 x = grid->cell_center(c);
    double v = 1.0;
    switch (spec.kind) {
      case Kind::Uniform: v = spec.uniform_value; break;
      case Kind::Gaussian1: v = 1.0 + gaussian_spike(x, 0.0); break;
      case Kind::Gaussian3:
        v = 1.0 + gaussian_spike(x, -2.0) + gaussian_spike(x, 0.0) + gaussian_spike(x, 2.0);
        break;
      case Kind::Balls:
        for (const Ball& b : spec.balls) {
          const double d0 = x[0] - b.center[0], d1 = x[1] - b.center[1], d2 = x[2] - b.center[2];
          if (d0 * d0 + d1 * d1 + d2 * d2 < b.radius * b.radius) v = std::max(v, b.value);
        }
        break;
    }
    field[c] = std::clamp(v, 1.0, upper);
  }
  return field;
}

}  // namespace waveinv
