#pragma once

#include <span>
#include <vector>

#include "waveinv/fields.hpp"

namespace waveinv {

/// Lumped-mass discretization of -div(c grad u) on the lattice, precomputed
/// for one coefficient field.
///
/// The stiffness form is sum over cells of c_cell * (h/4) * sum over the 12
/// cell edges of (u_j - u_i)^2, so every lattice edge carries
/// a = (h/4) * (sum of the up to four cells sharing it). Mass and boundary
/// areas are the trilinear lumped values (halved per boundary axis). Boundary
/// rows reproduce reflecting ghost nodes without special cases.
struct Stencil {
  Index3 n{};
  double h = 0.0;
  std::vector<double> edge_x, edge_y, edge_z;  // coefficient of edge (node, node + e_axis)
  std::vector<double> mass;
  std::vector<double> face_area;  // lumped area of the front/back plane node, per (i, j)

  std::size_t node_count() const noexcept { return mass.size(); }
  std::size_t plane_size() const noexcept { return n[0] * n[1]; }
};

Stencil build_stencil(const CoefficientField& c);

/// Which absorbing faces are active on each side of a leapfrog update.
struct Damping {
  bool front = false;
  bool back = false;
};

/// One explicit update
///   out = (2 m x - tau^2 K x - (m - tau/2 b_old) y + tau^2 f) / (m + tau/2 b_new)
/// with b the lumped area of the absorbing faces and f a load on the front
/// plane (empty for none). Forward sweeps use x = u^k, y = u^{k-1}; backward
/// sweeps use x = lambda^k, y = lambda^{k+1}.
struct StepParams {
  double tau = 0.0;
  Damping old_side;
  Damping new_side;
};

namespace kernels {

/// OpenMP node-gather kernels used by the solvers.
void apply_stiffness(const Stencil& s, std::span<const double> u, std::span<double> out);
void leapfrog_step(const Stencil& s, const StepParams& p, std::span<const double> x,
                   std::span<const double> y, std::span<const double> front_load,
                   std::span<double> out);

/// acc[cell] += weight * (grad u . grad lambda) averaged over the cell, from
/// one-sided differences along the four parallel edges per axis.
void accumulate_gradient(const Grid& grid, std::span<const double> u,
                         std::span<const double> lambda, double weight, std::span<double> acc);

}  // namespace kernels

/// Straightforward serial versions, kept as the test oracle and benchmark
/// baseline. Stiffness is assembled by scattering per-cell edge contributions.
namespace reference {

void apply_stiffness(const CoefficientField& c, std::span<const double> u, std::span<double> out);
void leapfrog_step(const CoefficientField& c, const StepParams& p, std::span<const double> x,
                   std::span<const double> y, std::span<const double> front_load,
                   std::span<double> out);
void accumulate_gradient(const Grid& grid, std::span<const double> u,
                         std::span<const double> lambda, double weight, std::span<double> acc);

}  // namespace reference

/// Thread count used by the parallel kernels; 0 restores the runtime default.
void set_thread_count(int threads);
int thread_count();

}  // namespace waveinv
