#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "support.hpp"
#include "waveinv/adjoint.hpp"
#include "waveinv/error.hpp"
#include "waveinv/objective.hpp"

using namespace waveinv;
using namespace waveinv::testing;

namespace {

WaveProblem problem(const GridPtr& g, double tau, double T, double omega = 40.0) {
  WaveProblem p;
  p.grid = g;
  p.source.omega = omega;
  p.time = make_time_axis(tau, T);
  return p;
}

BoundaryTrace random_trace(const Grid& g, std::size_t levels, double tau, unsigned seed) {
  BoundaryTrace t(front_faces(g), levels, tau);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : t.values) v = u(rng);
  return t;
}

}  // namespace

TEST(Cutoff, Values) {
  const CutoffSpec s{0.2};
  EXPECT_EQ(cutoff(s, 0.0, 1.0), 1.0);
  EXPECT_EQ(cutoff(s, 0.8, 1.0), 1.0);
  EXPECT_EQ(cutoff(s, 1.0, 1.0), 0.0);
  EXPECT_NEAR(cutoff(s, 0.9, 1.0), 0.5, 1e-15);
  EXPECT_THROW(cutoff(CutoffSpec{0.0}, 0.5, 1.0), Error);
  EXPECT_THROW(cutoff(CutoffSpec{1.5}, 0.5, 1.0), Error);
}

TEST(Cutoff, MonotoneAndFlatAtBothEnds) {
  const CutoffSpec s{0.2};
  double prev = 1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double z = cutoff(s, 0.8 + 0.2 * i / 1000.0, 1.0);
    EXPECT_LE(z, prev + 1e-15);
    EXPECT_GE(z, 0.0);
    prev = z;
  }
  // slope and curvature vanish at the joins
  // so the deviation over a step e is 10 (e / w)^3 at leading order
  const double e = 1e-4, bound = 10.0 * std::pow(e / 0.2, 3) * 1.01;
  EXPECT_LT(std::abs(cutoff(s, 0.8 + e, 1.0) - 1.0), bound);
  EXPECT_LT(std::abs(cutoff(s, 1.0 - e, 1.0)), bound);
}

TEST(Adjoint, ZeroResidualZeroField) {
  const GridPtr g = small_grid();
  const WaveProblem p = problem(g, 0.02, 0.4);
  BoundaryTrace r(front_faces(*g), p.time.levels(), 0.02);
  const WaveHistory l = adjoint_solve(random_field(g, 3.0, 1.0, 3.0, 1), r, p);
  for (std::size_t k = 0; k < l.levels(); ++k)
    for (double v : l.level(k)) ASSERT_EQ(v, 0.0);
}

TEST(Adjoint, TerminalLevelIsExactlyZeroAndLinear) {
  const GridPtr g = small_grid();
  const WaveProblem p = problem(g, 0.02, 0.4);
  const CoefficientField c = random_field(g, 3.0, 1.0, 3.0, 2);
  const BoundaryTrace a = random_trace(*g, p.time.levels(), 0.02, 3), b = random_trace(*g, p.time.levels(), 0.02, 4);
  BoundaryTrace mix = a;
  for (std::size_t i = 0; i < mix.values.size(); ++i) mix.values[i] = 2.0 * a.values[i] - 0.5 * b.values[i];
  const WaveHistory la = adjoint_solve(c, a, p), lb = adjoint_solve(c, b, p), lm = adjoint_solve(c, mix, p);
  for (double v : la.level(la.levels() - 1)) EXPECT_EQ(v, 0.0);
  for (std::size_t k = 0; k < la.levels(); ++k)
    for (std::size_t n = 0; n < la.node_count(); ++n)
      EXPECT_NEAR(lm.level(k)[n], 2.0 * la.level(k)[n] - 0.5 * lb.level(k)[n], 1e-12);
}

TEST(Adjoint, ImpulseSpreadsBackwardOneNodePerStep) {
  const GridPtr g = share(build_grid({{0, 0, 0}, {1, 1, 1}}, {{0.2, 0.2, 0.2}, {0.8, 0.8, 0.8}}, 0.1));
  const WaveProblem p = problem(g, 0.02, 0.6);
  const std::size_t N = p.time.steps, j0 = N - 5;
  BoundaryTrace r(front_faces(*g), p.time.levels(), 0.02);
  const std::size_t src = g->node_index(5, 5, 0);
  r(j0, src) = 1.0;
  const WaveHistory l = adjoint_solve(random_field(g, 3.0, 1.0, 3.0, 5), r, p);
  const Index3 s = g->node_ijk(src);
  for (std::size_t k = 0; k < l.levels(); ++k) {
    for (std::size_t n = 0; n < l.node_count(); ++n) {
      const Index3 q = g->node_ijk(n);
      std::size_t dist = 0;
      for (int a = 0; a < 3; ++a) dist += q[a] > s[a] ? q[a] - s[a] : s[a] - q[a];
      if (k >= j0 || dist + k > j0 - 1) ASSERT_EQ(l.level(k)[n], 0.0) << k << " " << n;
    }
  }
  EXPECT_NE(l.level(j0 - 1)[src], 0.0);
}

TEST(Adjoint, Mismatch) {
  const GridPtr g = small_grid();
  const WaveProblem p = problem(g, 0.02, 0.4);
  BoundaryTrace r(front_faces(*g), p.time.levels() + 1, 0.02);
  try {
    adjoint_solve(CoefficientField(g, 3.0, 1.0), r, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TraceMismatch);
  }
}

TEST(Duality, DenseTransposeOnFiveCubedGrid) { EXPECT_LT(dense_duality_mismatch(), 1e-10); }

TEST(GradientCheck, AdjointMatchesCentralDifferences) {
  EXPECT_LT(gradient_check_best(0.01), 1e-6);
  EXPECT_LT(gradient_check_best(1e-12), 1e-6);
}
