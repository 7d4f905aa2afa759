#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"
#include "waveinv/error.hpp"
#include "waveinv/forward.hpp"
#include "waveinv/io.hpp"

using namespace waveinv;
using namespace waveinv::testing;

namespace {

void truncate_by(const std::filesystem::path& p, std::uintmax_t bytes) {
  std::filesystem::resize_file(p, std::filesystem::file_size(p) - bytes);
}

ErrorCode load_code(const auto& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(FieldIo, BinaryRoundTripIsBitExact) {
  const auto dir = temp_dir("field_rt");
  const GridPtr g = small_grid();
  const CoefficientField c = random_field(g, 5.0, 1.0, 5.0, 3);
  save_field_binary(dir / "c.wvcf", c);
  const CoefficientField back = load_field_binary(dir / "c.wvcf", g);
  EXPECT_TRUE(back == c);
  const FieldFile raw = read_field_binary(dir / "c.wvcf");
  EXPECT_EQ(raw.cells, g->cells());
  EXPECT_EQ(raw.h, g->h());
  EXPECT_EQ(raw.origin, g->domain().lo);
  EXPECT_EQ(raw.upper, 5.0);
}

TEST(FieldIo, TruncatedAndMismatched) {
  const auto dir = temp_dir("field_bad");
  const GridPtr g = small_grid();
  save_field_binary(dir / "c.wvcf", CoefficientField(g, 5.0, 2.0));
  std::filesystem::copy_file(dir / "c.wvcf", dir / "t.wvcf");
  truncate_by(dir / "t.wvcf", 8);
  EXPECT_EQ(load_code([&] { read_field_binary(dir / "t.wvcf"); }), ErrorCode::CorruptHeader);

  std::ofstream(dir / "junk.wvcf") << "WVXX1";
  EXPECT_EQ(load_code([&] { read_field_binary(dir / "junk.wvcf"); }), ErrorCode::CorruptHeader);

  const GridPtr other = share(build_grid({{0, 0, 0}, {1, 1, 1}}, {{0.2, 0.2, 0.2}, {0.8, 0.8, 0.8}}, 0.1));
  EXPECT_EQ(load_code([&] { load_field_binary(dir / "c.wvcf", other); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(load_code([&] { read_field_binary(dir / "missing.wvcf"); }), ErrorCode::Io);
}

TEST(FieldIo, VtkUniform) {
  const auto dir = temp_dir("vtk");
  const GridPtr g = small_grid();
  save_field_vtk(dir / "c.vtk", CoefficientField(g, 5.0, 1.0));
  std::ifstream in(dir / "c.vtk");
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_GE(lines.size(), 10u);
  EXPECT_EQ(lines[0], "# vtk DataFile Version 3.0");
  EXPECT_EQ(lines[3], "DATASET STRUCTURED_POINTS");
  EXPECT_EQ(lines[4], "DIMENSIONS 9 9 9");
  EXPECT_EQ(lines[5], "ORIGIN -0.5 -0.5 -0.5");
  EXPECT_EQ(lines[6], "SPACING 0.125 0.125 0.125");
  EXPECT_EQ(lines[7], "CELL_DATA 512");
  EXPECT_EQ(lines[8], "SCALARS c double 1");
  EXPECT_EQ(lines.size(), 10u + 512u);
  for (std::size_t i = 10; i < lines.size(); ++i) EXPECT_EQ(lines[i], "1");
}

TEST(TraceIo, RoundTripAndHeader) {
  const auto dir = temp_dir("trace");
  const GridPtr g = small_grid();
  BoundaryTrace t(front_faces(*g), 7, 0.01);
  for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] = std::sin(1.7 * static_cast<double>(i)) * 1e-3;
  save_trace(dir / "t.wvtr", t);
  const BoundaryTrace back = load_trace(dir / "t.wvtr");
  EXPECT_EQ(back.n_face, t.n_face);
  EXPECT_EQ(back.n_levels, 7u);
  EXPECT_EQ(back.tau, 0.01);
  EXPECT_EQ(back.values, t.values);
  EXPECT_EQ(std::filesystem::file_size(dir / "t.wvtr"), 5u + 24u + 8u * t.values.size());

  std::ifstream in(dir / "t.wvtr", std::ios::binary);
  char magic[5];
  in.read(magic, 5);
  EXPECT_EQ(std::string(magic, 5), "WVTR1");
  std::uint64_t nf = 0;
  in.read(reinterpret_cast<char*>(&nf), 8);
  EXPECT_EQ(nf, 81u);

  truncate_by(dir / "t.wvtr", 3);
  EXPECT_EQ(load_code([&] { load_trace(dir / "t.wvtr"); }), ErrorCode::CorruptHeader);
}
