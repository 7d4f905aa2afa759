#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "waveinv/error.hpp"
#include "waveinv/objective.hpp"

using namespace waveinv;
using namespace waveinv::testing;

namespace {

TikhonovSpec spec_for(const GridPtr& g, double gamma, double window) {
  TikhonovSpec s;
  s.gamma = gamma;
  s.c0 = CoefficientField(g, 5.0, 1.0);
  s.cutoff.window = window;
  return s;
}

}  // namespace

TEST(Functional, ExactFitIsZero) {
  const GridPtr g = small_grid();
  BoundaryTrace t(front_faces(*g), 11, 0.05);
  for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] = std::cos(static_cast<double>(i));
  EXPECT_EQ(functional(t, t, CoefficientField(g, 5.0, 1.0), spec_for(g, 0.01, 0.1)), 0.0);
}

TEST(Functional, SingleNodeClosedForm) {
  const GridPtr g = small_grid();
  const double tau = 0.05, T = 0.5, h = g->h();
  BoundaryTrace u(front_faces(*g), 11, tau), d(front_faces(*g), 11, tau);
  const std::size_t node = g->node_index(4, 4, 0);
  for (std::size_t k = 0; k < 11; ++k) u(k, node) = 1.0;
  // a window shorter than tau leaves z = 1 everywhere but at T
  const double J = functional(u, d, CoefficientField(g, 5.0, 1.0), spec_for(g, 1.0, 1e-9));
  EXPECT_NEAR(J, 0.5 * h * h * (T - 0.5 * tau), 1e-15);
}

TEST(Functional, MatchesDirectSummation) {
  const GridPtr g = small_grid();
  const double tau = 0.05;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> s(-1e-3, 1e-3);
  BoundaryTrace u(front_faces(*g), 11, tau), d(front_faces(*g), 11, tau);
  for (double& v : u.values) v = s(rng);
  for (double& v : d.values) v = s(rng);
  const CoefficientField c = random_field(g, 5.0, 1.0, 5.0, 6);
  const TikhonovSpec sp = spec_for(g, 0.01, 0.15);

  const double h = g->h(), T = 0.5;
  double mis = 0.0;
  for (std::size_t k = 0; k <= 10; ++k) {
    const double t = tau * static_cast<double>(k);
    double z = 1.0;
    if (t > T - 0.15) {
      const double x = (t - (T - 0.15)) / 0.15;
      z = 1.0 - 10 * std::pow(x, 3) + 15 * std::pow(x, 4) - 6 * std::pow(x, 5);
    }
    const double w = (k == 0 || k == 10) ? 0.5 : 1.0;
    for (std::size_t j = 0; j < 9; ++j)
      for (std::size_t i = 0; i < 9; ++i) {
        const double a = h * h * ((i == 0 || i == 8) ? 0.5 : 1.0) * ((j == 0 || j == 8) ? 0.5 : 1.0);
        const double r = u(k, i + 9 * j) - d(k, i + 9 * j);
        mis += 0.5 * w * tau * z * a * r * r;
      }
  }
  double reg = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) reg += (c[i] - 1.0) * (c[i] - 1.0);
  reg *= 0.5 * 0.01 * h * h * h;

  const FunctionalTerms terms = functional_terms(u, d, c, sp);
  EXPECT_NEAR(terms.misfit, mis, 1e-12 * mis);
  EXPECT_NEAR(terms.regularization, reg, 1e-12 * reg);
  EXPECT_GE(terms.total(), 0.0);
}

TEST(Functional, TraceMismatch) {
  const GridPtr g = small_grid();
  BoundaryTrace u(front_faces(*g), 11, 0.05), d(front_faces(*g), 11, 0.04);
  try {
    functional(u, d, CoefficientField(g, 5.0, 1.0), spec_for(g, 0.01, 0.1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TraceMismatch);
  }
}

TEST(Gradient, RegularizationOnlyPath) {
  const GridPtr g = small_grid();
  const WaveHistory u(g->node_count(), 6, 0.05), zero(g->node_count(), 6, 0.05);
  const CoefficientField c = random_field(g, 5.0, 1.0, 5.0, 8);
  const TikhonovSpec sp = spec_for(g, 0.3, 0.1);
  const GradientField gr = gradient(u, zero, c, sp);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (g->cell_region(i) == Region::Inner) EXPECT_EQ(gr.values[i], 0.3 * (c[i] - 1.0));
    else EXPECT_EQ(gr.values[i], 0.0);
  }
  const GradientField at_c0 = gradient(u, zero, sp.c0, sp);
  for (double v : at_c0.values) EXPECT_EQ(v, 0.0);
}

TEST(Gradient, HistoryMismatch) {
  const GridPtr g = small_grid();
  const WaveHistory a(g->node_count(), 6, 0.05), b(g->node_count(), 7, 0.05);
  try {
    gradient(a, b, CoefficientField(g, 5.0, 1.0), spec_for(g, 0.1, 0.1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HistoryMismatch);
  }
}

TEST(Gradient, ZeroResidualChain) {
  const GridPtr g = small_grid();
  InverseProblem ip;
  ip.wave.grid = g;
  ip.wave.initial = InitialCondition::gaussian_bump();
  ip.wave.time = make_time_axis(0.02, 0.4);
  const CoefficientField c0(g, 5.0, 1.0);
  ip.data = forward_solve(c0, ip.wave).trace;
  ip.tikhonov = spec_for(g, 0.01, 0.1);
  const Evaluation e = evaluate_with_gradient(ip, c0);
  EXPECT_EQ(e.terms.total(), 0.0);
  for (double v : e.gradient->values) EXPECT_EQ(v, 0.0);
}

TEST(Project, ExamplesAndProperties) {
  const GridPtr g = small_grid();
  CoefficientField c(g, 5.0, 1.0);
  const std::size_t in = g->cell_index(3, 3, 3), out = 0;
  ASSERT_EQ(g->cell_region(in), Region::Inner);
  c[in] = 0.5;
  EXPECT_EQ(project(c, 5.0)[in], 1.0);
  c[in] = 7.0;
  EXPECT_EQ(project(c, 5.0)[in], 5.0);
  c[in] = 3.0;
  c[out] = 3.0;
  EXPECT_EQ(project(c, 5.0)[in], 3.0);
  EXPECT_EQ(project(c, 5.0)[out], 1.0);

  for (unsigned seed = 0; seed < 20; ++seed) {
    CoefficientField a = random_field(g, 5.0, -2.0, 8.0, seed), b = random_field(g, 5.0, -2.0, 8.0, seed + 100);
    const CoefficientField pa = project(a, 5.0), pb = project(b, 5.0);
    EXPECT_TRUE(project(pa, 5.0) == pa);
    double dp = 0.0, d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      dp = std::max(dp, std::abs(pa[i] - pb[i]));
      d = std::max(d, std::abs(a[i] - b[i]));
      EXPECT_GE(pa[i], 1.0);
      EXPECT_LE(pa[i], 5.0);
    }
    EXPECT_LE(dp, d);
  }
}

TEST(Postprocess, ThresholdFormula) {
  const std::vector<double> v{1.0, 2.0, 2.8, 2.81, 4.0, 3.5};
  // P * max = 2.8; values not above it become 1
  const auto out = postprocess_values(v, 0.7);
  EXPECT_EQ(out, (std::vector<double>{1.0, 1.0, 1.0, 2.81, 4.0, 3.5}));
  const std::vector<double> ones(5, 1.0);
  EXPECT_EQ(postprocess_values(ones, 0.7), ones);
  EXPECT_THROW(postprocess_values(v, 1.0), Error);
  EXPECT_THROW(postprocess_values(v, 0.0), Error);
}

TEST(Postprocess, FieldIdempotence) {
  const GridPtr g = small_grid();
  for (unsigned seed = 0; seed < 20; ++seed) {
    const CoefficientField c = random_field(g, 5.0, 1.0, 5.0, seed);
    const CoefficientField once = postprocess(c, 0.7);
    EXPECT_EQ(once.max(), c.max());
    EXPECT_TRUE(postprocess(once, 0.7) == once);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] > 0.7 * c.max()) EXPECT_EQ(once[i], c[i]);
      else EXPECT_EQ(once[i], 1.0);
    }
  }
}

TEST(GammaRuleTest, PowerLaw) {
  TikhonovSpec s;
  s.gamma_rule = GammaRule{0.03, 0.1};
  EXPECT_NEAR(s.effective_gamma(), std::pow(0.03, 0.2), 1e-15);
  s.gamma_rule = GammaRule{0.03, 0.3};
  EXPECT_THROW(s.effective_gamma(), Error);
}

TEST(Theorem3, TrivialCases) {
  const GridPtr g = small_grid();
  const CoefficientField cstar = random_field(g, 5.0, 1.0, 5.0, 9);
  GradientField zero{g, std::vector<double>(cstar.size(), 0.0)};
  const ErrorBound b = theorem3_bound(zero, cstar, cstar, 0.03, 0.1, 0.0, cstar);
  EXPECT_EQ(b.lhs, 0.0);
  EXPECT_EQ(b.rhs, 0.0);

  const CoefficientField c(g, 5.0, 1.0);
  GradientField gr{g, std::vector<double>(c.size(), 0.0)};
  gr.values[g->cell_index(3, 3, 3)] = 2.0;
  const ErrorBound e = theorem3_bound(gr, c, c, 0.03, 0.1, 1.5, cstar);
  double dist = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) dist += (c[i] - cstar[i]) * (c[i] - cstar[i]);
  dist = std::sqrt(dist * std::pow(g->h(), 3));
  EXPECT_NEAR(e.lhs, dist, 1e-14);
  EXPECT_NEAR(e.rhs, 2.0 / std::pow(0.03, 0.2) * 2.0 * std::pow(g->h(), 1.5) + 1.5 * dist, 1e-12);
}
