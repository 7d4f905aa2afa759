// Reference (serial) kernels against the OpenMP ones on the full-size mesh.
#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "waveinv/kernels.hpp"

using namespace waveinv;

namespace {

struct Setup {
  GridPtr grid;
  CoefficientField c;
  Stencil stencil;
  std::vector<double> x, y, out;

  explicit Setup(double h) {
    grid = std::make_shared<const Grid>(
        build_grid({{-3.4, -0.8, -0.8}, {3.4, 0.8, 0.8}}, {{-3.0, -0.4, -0.4}, {3.0, 0.4, 0.4}}, h));
    c = CoefficientField(grid, 10.0, 1.0);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(1.0, 6.0), s(-1.0, 1.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (grid->cell_region(i) == Region::Inner) c[i] = u(rng);
    }
    stencil = build_stencil(c);
    x.resize(grid->node_count());
    y.resize(grid->node_count());
    out.resize(grid->node_count());
    for (auto& v : x) v = s(rng);
    for (auto& v : y) v = s(rng);
  }
};

Setup& setup(int level) {
  static Setup coarse(0.1), fine(0.05);
  return level == 0 ? coarse : fine;
}

constexpr StepParams kStep{0.006, {true, true}, {true, true}};

void BM_StiffnessReference(benchmark::State& st) {
  Setup& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    reference::apply_stiffness(s.c, s.x, s.out);
    benchmark::DoNotOptimize(s.out.data());
  }
}

void BM_StiffnessOmp(benchmark::State& st) {
  Setup& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    kernels::apply_stiffness(s.stencil, s.x, s.out);
    benchmark::DoNotOptimize(s.out.data());
  }
}

void BM_LeapfrogReference(benchmark::State& st) {
  Setup& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    reference::leapfrog_step(s.c, kStep, s.x, s.y, {}, s.out);
    benchmark::DoNotOptimize(s.out.data());
  }
}

void BM_LeapfrogOmp(benchmark::State& st) {
  Setup& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    kernels::leapfrog_step(s.stencil, kStep, s.x, s.y, {}, s.out);
    benchmark::DoNotOptimize(s.out.data());
  }
}

void BM_GradientReference(benchmark::State& st) {
  Setup& s = setup(static_cast<int>(st.range(0)));
  std::vector<double> acc(s.c.size());
  for (auto _ : st) {
    reference::accumulate_gradient(*s.grid, s.x, s.y, 0.006, acc);
    benchmark::DoNotOptimize(acc.data());
  }
}

void BM_GradientOmp(benchmark::State& st) {
  Setup& s = setup(static_cast<int>(st.range(0)));
  std::vector<double> acc(s.c.size());
  for (auto _ : st) {
    kernels::accumulate_gradient(*s.grid, s.x, s.y, 0.006, acc);
    benchmark::DoNotOptimize(acc.data());
  }
}

}  // namespace

// arg 0: h = 0.1 (69 x 17 x 17), arg 1: h = 0.05
BENCHMARK(BM_StiffnessReference)->Arg(0)->Arg(1);
BENCHMARK(BM_StiffnessOmp)->Arg(0)->Arg(1)->UseRealTime();
BENCHMARK(BM_LeapfrogReference)->Arg(0)->Arg(1);
BENCHMARK(BM_LeapfrogOmp)->Arg(0)->Arg(1)->UseRealTime();
BENCHMARK(BM_GradientReference)->Arg(0)->Arg(1);
BENCHMARK(BM_GradientOmp)->Arg(0)->Arg(1)->UseRealTime();

BENCHMARK_MAIN();
