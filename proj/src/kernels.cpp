#include "waveinv/kernels.hpp"

#include <omp.h>

#include <algorithm>

#include "waveinv/error.hpp"

namespace waveinv {

namespace {

inline double boundary_weight(std::size_t i, std::size_t n) { return (i == 0 || i + 1 == n) ? 0.5 : 1.0; }

void check_sizes(std::size_t expected, std::span<const double> a, std::span<const double> b,
                 std::span<const double> out) {
  if (a.size() != expected || b.size() != expected || out.size() != expected)
    throw Error(ErrorCode::DimensionMismatch, "nodal vector size does not match the grid");
}

}  // namespace

Stencil build_stencil(const CoefficientField& c) {
  const Grid& g = c.grid();
  Stencil s;
  s.n = g.nodes();
  s.h = g.h();
  const auto [n0, n1, n2] = s.n;
  const std::size_t nn = g.node_count();
  const double h = s.h;
  s.edge_x.assign(nn, 0.0);
  s.edge_y.assign(nn, 0.0);
  s.edge_z.assign(nn, 0.0);
  s.mass.assign(nn, 0.0);
  s.face_area.assign(n0 * n1, 0.0);

  // Sum of the cells sharing an edge: the edge direction is fixed, the two
  // transverse cell indices range over {t-1, t} clipped to the lattice.
  const auto cell_or_zero = [&](long i, long j, long k) {
    if (i < 0 || j < 0 || k < 0 || i >= static_cast<long>(n0 - 1) ||
        j >= static_cast<long>(n1 - 1) || k >= static_cast<long>(n2 - 1))
      return 0.0;
    return c[g.cell_index(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                          static_cast<std::size_t>(k))];
  };

#pragma omp parallel for collapse(2) schedule(static)
  for (std::size_t k = 0; k < n2; ++k) {
    for (std::size_t j = 0; j < n1; ++j) {
      for (std::size_t i = 0; i < n0; ++i) {
        const std::size_t node = g.node_index(i, j, k);
        const long li = static_cast<long>(i), lj = static_cast<long>(j), lk = static_cast<long>(k);
        if (i + 1 < n0) {
          s.edge_x[node] = 0.25 * h *
                           (cell_or_zero(li, lj - 1, lk - 1) + cell_or_zero(li, lj, lk - 1) +
                            cell_or_zero(li, lj - 1, lk) + cell_or_zero(li, lj, lk));
        }
        if (j + 1 < n1) {
          s.edge_y[node] = 0.25 * h *
                           (cell_or_zero(li - 1, lj, lk - 1) + cell_or_zero(li, lj, lk - 1) +
                            cell_or_zero(li - 1, lj, lk) + cell_or_zero(li, lj, lk));
        }
        if (k + 1 < n2) {
          s.edge_z[node] = 0.25 * h *
                           (cell_or_zero(li - 1, lj - 1, lk) + cell_or_zero(li, lj - 1, lk) +
                            cell_or_zero(li - 1, lj, lk) + cell_or_zero(li, lj, lk));
        }
        s.mass[node] = h * h * h * boundary_weight(i, n0) * boundary_weight(j, n1) *
                       boundary_weight(k, n2);
      }
    }
  }
  for (std::size_t j = 0; j < n1; ++j) {
    for (std::size_t i = 0; i < n0; ++i)
      s.face_area[i + n0 * j] = h * h * boundary_weight(i, n0) * boundary_weight(j, n1);
  }
  return s;
}

namespace kernels {

namespace {

inline double stiffness_at(const Stencil& s, std::span<const double> u, std::size_t i,
                           std::size_t j, std::size_t k, std::size_t node) {
  const std::size_t sx = 1, sy = s.n[0], sz = s.n[0] * s.n[1];
  const double ui = u[node];
  double acc = 0.0;
  if (i > 0) acc += s.edge_x[node - sx] * (ui - u[node - sx]);
  if (i + 1 < s.n[0]) acc += s.edge_x[node] * (ui - u[node + sx]);
  if (j > 0) acc += s.edge_y[node - sy] * (ui - u[node - sy]);
  if (j + 1 < s.n[1]) acc += s.edge_y[node] * (ui - u[node + sy]);
  if (k > 0) acc += s.edge_z[node - sz] * (ui - u[node - sz]);
  if (k + 1 < s.n[2]) acc += s.edge_z[node] * (ui - u[node + sz]);
  return acc;
}

}  // namespace

void apply_stiffness(const Stencil& s, std::span<const double> u, std::span<double> out) {
  check_sizes(s.node_count(), u, u, out);
  const auto [n0, n1, n2] = s.n;
#pragma omp parallel for collapse(2) schedule(static)
  for (std::size_t k = 0; k < n2; ++k) {
    for (std::size_t j = 0; j < n1; ++j) {
      std::size_t node = n0 * (j + n1 * k);
      for (std::size_t i = 0; i < n0; ++i, ++node) out[node] = stiffness_at(s, u, i, j, k, node);
    }
  }
}

void leapfrog_step(const Stencil& s, const StepParams& p, std::span<const double> x,
                   std::span<const double> y, std::span<const double> front_load,
                   std::span<double> out) {
  check_sizes(s.node_count(), x, y, out);
  if (!front_load.empty() && front_load.size() != s.plane_size())
    throw Error(ErrorCode::DimensionMismatch, "front load must cover the front plane");
  const auto [n0, n1, n2] = s.n;
  const double tau2 = p.tau * p.tau, half_tau = 0.5 * p.tau;
#pragma omp parallel for collapse(2) schedule(static)
  for (std::size_t k = 0; k < n2; ++k) {
    for (std::size_t j = 0; j < n1; ++j) {
      const bool front = k == 0, back = k + 1 == n2;
      const bool damp_old = (front && p.old_side.front) || (back && p.old_side.back);
      const bool damp_new = (front && p.new_side.front) || (back && p.new_side.back);
      std::size_t node = n0 * (j + n1 * k);
      for (std::size_t i = 0; i < n0; ++i, ++node) {
        const double m = s.mass[node];
        const double area = (front || back) ? s.face_area[i + n0 * j] : 0.0;
        double rhs = 2.0 * m * x[node] - tau2 * stiffness_at(s, x, i, j, k, node) -
                     (m - (damp_old ? half_tau * area : 0.0)) * y[node];
        if (front && !front_load.empty()) rhs += tau2 * front_load[i + n0 * j];
        out[node] = rhs / (m + (damp_new ? half_tau * area : 0.0));
      }
    }
  }
}

void accumulate_gradient(const Grid& grid, std::span<const double> u,
                         std::span<const double> lambda, double weight, std::span<double> acc) {
  check_sizes(grid.node_count(), u, lambda, lambda);
  if (acc.size() != grid.cell_count())
    throw Error(ErrorCode::DimensionMismatch, "gradient accumulator does not match the grid");
  const Index3 n = grid.nodes();
  const Index3 nc = grid.cells();
  const std::size_t sx = 1, sy = n[0], sz = n[0] * n[1];
  const double scale = weight / (4.0 * grid.h() * grid.h());
#pragma omp parallel for collapse(2) schedule(static)
  for (std::size_t k = 0; k < nc[2]; ++k) {
    for (std::size_t j = 0; j < nc[1]; ++j) {
      for (std::size_t i = 0; i < nc[0]; ++i) {
        const std::size_t base = grid.node_index(i, j, k);
        const auto edge = [&](std::size_t a, std::size_t stride) {
          return (u[a + stride] - u[a]) * (lambda[a + stride] - lambda[a]);
        };
        double sum = 0.0;
        sum += edge(base, sx) + edge(base + sy, sx) + edge(base + sz, sx) + edge(base + sy + sz, sx);
        sum += edge(base, sy) + edge(base + sx, sy) + edge(base + sz, sy) + edge(base + sx + sz, sy);
        sum += edge(base, sz) + edge(base + sx, sz) + edge(base + sy, sz) + edge(base + sx + sy, sz);
        acc[grid.cell_index(i, j, k)] += scale * sum;
      }
    }
  }
}

}  // namespace kernels

namespace reference {

void apply_stiffness(const CoefficientField& c, std::span<const double> u, std::span<double> out) {
  const Grid& g = c.grid();
  check_sizes(g.node_count(), u, u, out);
  std::fill(out.begin(), out.end(), 0.0);
  const double h = g.h();
  const Index3 n = g.nodes();
  for (std::size_t cell = 0; cell < g.cell_count(); ++cell) {
    const Index3 ijk = g.cell_ijk(cell);
    const double a = 0.25 * h * c[cell];
    // The 12 edges of the voxel: for each axis, four parallel edges.
    for (int axis = 0; axis < 3; ++axis) {
      for (int t = 0; t < 4; ++t) {
        Index3 p = ijk;
        const int other1 = (axis + 1) % 3, other2 = (axis + 2) % 3;
        p[other1] += static_cast<std::size_t>(t & 1);
        p[other2] += static_cast<std::size_t>((t >> 1) & 1);
        Index3 q = p;
        q[axis] += 1;
        const std::size_t a_node = p[0] + n[0] * (p[1] + n[1] * p[2]);
        const std::size_t b_node = q[0] + n[0] * (q[1] + n[1] * q[2]);
        const double flux = a * (u[a_node] - u[b_node]);
        out[a_node] += flux;
        out[b_node] -= flux;
      }
    }
  }
}

void leapfrog_step(const CoefficientField& c, const StepParams& p, std::span<const double> x,
                   std::span<const double> y, std::span<const double> front_load,
                   std::span<double> out) {
  const Grid& g = c.grid();
  std::vector<double> kx(g.node_count());
  apply_stiffness(c, x, kx);
  const Index3 n = g.nodes();
  const double h = g.h();
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    const Index3 ijk = g.node_ijk(node);
    double m = h * h * h;
    for (int a = 0; a < 3; ++a) {
      if (ijk[a] == 0 || ijk[a] == n[a] - 1) m *= 0.5;
    }
    double area = h * h;
    for (int a = 0; a < 2; ++a) {
      if (ijk[a] == 0 || ijk[a] == n[a] - 1) area *= 0.5;
    }
    const bool front = ijk[2] == 0, back = ijk[2] == n[2] - 1;
    const double b_old = ((front && p.old_side.front) || (back && p.old_side.back)) ? area : 0.0;
    const double b_new = ((front && p.new_side.front) || (back && p.new_side.back)) ? area : 0.0;
    double rhs = 2.0 * m * x[node] - p.tau * p.tau * kx[node] - (m - 0.5 * p.tau * b_old) * y[node];
    if (front && !front_load.empty()) rhs += p.tau * p.tau * front_load[ijk[0] + n[0] * ijk[1]];
    out[node] = rhs / (m + 0.5 * p.tau * b_new);
  }
}

void accumulate_gradient(const Grid& grid, std::span<const double> u,
                         std::span<const double> lambda, double weight, std::span<double> acc) {
  const double h = grid.h();
  const Index3 n = grid.nodes();
  for (std::size_t cell = 0; cell < grid.cell_count(); ++cell) {
    const Index3 ijk = grid.cell_ijk(cell);
    // Cell-averaged per-axis product of one-sided differences.
    double dot = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      double mean = 0.0;
      for (int t = 0; t < 4; ++t) {
        Index3 p = ijk;
        p[(axis + 1) % 3] += static_cast<std::size_t>(t & 1);
        p[(axis + 2) % 3] += static_cast<std::size_t>((t >> 1) & 1);
        Index3 q = p;
        q[axis] += 1;
        const std::size_t a = p[0] + n[0] * (p[1] + n[1] * p[2]);
        const std::size_t b = q[0] + n[0] * (q[1] + n[1] * q[2]);
        mean += 0.25 * ((u[b] - u[a]) / h) * ((lambda[b] - lambda[a]) / h);
      }
      dot += mean;
    }
    acc[cell] += weight * dot;
  }
}

}  // namespace reference

void set_thread_count(int threads) {
  omp_set_num_threads(threads > 0 ? threads : omp_get_num_procs());
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace waveinv
