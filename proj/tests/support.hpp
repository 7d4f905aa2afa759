#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <string>

#include "waveinv/fields.hpp"
#include "waveinv/geometry.hpp"

namespace waveinv::testing {

inline GridPtr share(Grid g) { return std::make_shared<const Grid>(std::move(g)); }

// 9^3 nodes, h = 0.125, inner (-0.25, 0.25)^3
inline GridPtr small_grid() {
  return share(build_grid(BoxDomain{{-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}},
                          BoxDomain{{-0.25, -0.25, -0.25}, {0.25, 0.25, 0.25}}, 0.125));
}

inline CoefficientField random_field(const GridPtr& g, double upper, double lo, double hi,
                                     unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  CoefficientField c(g, upper, 1.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (g->cell_region(i) == Region::Inner) c[i] = u(rng);
  }
  return c;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("waveinv_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace waveinv::testing
