#pragma once

#include <filesystem>
#include <vector>

#include "waveinv/fields.hpp"

namespace waveinv {

/// Raw contents of a "WVCF1" coefficient file. Layout (little-endian):
///   "WVCF1" | u64 cells[3] | f64 h | f64 origin[3] | f64 upper | f64 values[...]
/// with values ordered x1 fastest.
struct FieldFile {
  Index3 cells{};
  double h = 0.0;
  Vec3 origin{};
  double upper = 1.0;
  std::vector<double> values;
};

void save_field_binary(const std::filesystem::path& path, const CoefficientField& field);
void save_field_binary(const std::filesystem::path& path, const FieldFile& field);
FieldFile read_field_binary(const std::filesystem::path& path);
/// Reads a coefficient file and checks it against `grid`; throws
/// Error{DimensionMismatch} when the cell counts differ.
CoefficientField load_field_binary(const std::filesystem::path& path, const GridPtr& grid);

/// VTK legacy ASCII, STRUCTURED_POINTS with one float64 scalar per cell.
void save_field_vtk(const std::filesystem::path& path, const CoefficientField& field);
void save_field_vtk(const std::filesystem::path& path, const FieldFile& field);

/// "WVTR1" trace file (little-endian):
///   "WVTR1" | u64 n_face | u64 n_levels | f64 tau | f64 values[n_levels][n_face]
void save_trace(const std::filesystem::path& path, const BoundaryTrace& trace);
BoundaryTrace load_trace(const std::filesystem::path& path);

}  // namespace waveinv
