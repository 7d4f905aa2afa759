#include "waveinv/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string_view>

#include "waveinv/error.hpp"

namespace waveinv {

namespace {

constexpr std::string_view kFieldMagic = "WVCF1";
constexpr std::string_view kTraceMagic = "WVTR1";

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  }
  void magic(std::string_view m) { out_.write(m.data(), static_cast<std::streamsize>(m.size())); }
  template <typename T>
  void put(T v) {
    v = to_little(v);
    out_.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  void put_all(const std::vector<double>& values) {
    if constexpr (std::endian::native == std::endian::little) {
      out_.write(reinterpret_cast<const char*>(values.data()),
                 static_cast<std::streamsize>(values.size() * sizeof(double)));
    } else {
      for (double v : values) put(v);
    }
  }
  void finish(const std::filesystem::path& path) {
    out_.flush();
    if (!out_) throw Error(ErrorCode::Io, "write failed for " + path.string());
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  void magic(std::string_view m) {
    std::string buf(m.size(), '\0');
    in_.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!in_ || buf != m) corrupt("bad magic");
  }
  template <typename T>
  T get() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in_) corrupt("truncated header");
    return to_little(v);
  }
  std::vector<double> get_all(std::size_t count) {
    std::vector<double> values(count);
    in_.read(reinterpret_cast<char*>(values.data()),
             static_cast<std::streamsize>(count * sizeof(double)));
    if (!in_) throw Error(ErrorCode::CorruptHeader, path_.string() + ": payload shorter than header says");
    if constexpr (std::endian::native == std::endian::big) {
      for (double& v : values) v = to_little(v);
    }
    if (in_.peek() != std::char_traits<char>::eof())
      throw Error(ErrorCode::CorruptHeader, path_.string() + ": trailing bytes after payload");
    return values;
  }
  std::uintmax_t file_size() const { return std::filesystem::file_size(path_); }
  [[noreturn]] void corrupt(const char* why) const {
    throw Error(ErrorCode::CorruptHeader, path_.string() + ": " + why);
  }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
};

void write_vtk(const std::filesystem::path& path, const Index3& cells, double h, const Vec3& origin,
               const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << "# vtk DataFile Version 3.0\n"
      << "waveinv coefficient field\n"
      << "ASCII\n"
      << "DATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << cells[0] + 1 << ' ' << cells[1] + 1 << ' ' << cells[2] + 1 << '\n';
  char buf[96];
  std::snprintf(buf, sizeof buf, "ORIGIN %.17g %.17g %.17g\n", origin[0], origin[1], origin[2]);
  out << buf;
  std::snprintf(buf, sizeof buf, "SPACING %.17g %.17g %.17g\n", h, h, h);
  out << buf;
  out << "CELL_DATA " << values.size() << '\n'
      << "SCALARS c double 1\n"
      << "LOOKUP_TABLE default\n";
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace

void save_field_binary(const std::filesystem::path& path, const FieldFile& f) {
  const std::size_t count = f.cells[0] * f.cells[1] * f.cells[2];
  if (f.values.size() != count) throw Error(ErrorCode::DimensionMismatch, "field payload does not match its cells");
  Writer w(path);
  w.magic(kFieldMagic);
  for (std::size_t n : f.cells) w.put<std::uint64_t>(n);
  w.put(f.h);
  for (double o : f.origin) w.put(o);
  w.put(f.upper);
  w.put_all(f.values);
  w.finish(path);
}

void save_field_binary(const std::filesystem::path& path, const CoefficientField& field) {
  const Grid& g = field.grid();
  save_field_binary(path, FieldFile{g.cells(), g.h(), g.domain().lo, field.upper(),
                                    std::vector<double>(field.values().begin(), field.values().end())});
}

FieldFile read_field_binary(const std::filesystem::path& path) {
  Reader r(path);
  r.magic(kFieldMagic);
  FieldFile f;
  for (auto& n : f.cells) n = static_cast<std::size_t>(r.get<std::uint64_t>());
  f.h = r.get<double>();
  for (auto& o : f.origin) o = r.get<double>();
  f.upper = r.get<double>();
  const std::uintmax_t header = kFieldMagic.size() + 3 * 8 + 8 + 3 * 8 + 8;
  const std::uintmax_t count = static_cast<std::uintmax_t>(f.cells[0]) * f.cells[1] * f.cells[2];
  if (r.file_size() != header + count * sizeof(double)) r.corrupt("size does not match dimensions");
  f.values = r.get_all(static_cast<std::size_t>(count));
  return f;
}

CoefficientField load_field_binary(const std::filesystem::path& path, const GridPtr& grid) {
  FieldFile f = read_field_binary(path);
  if (f.cells != grid->cells() || f.h != grid->h())
    throw Error(ErrorCode::DimensionMismatch, path.string() + " does not match the configured grid");
  CoefficientField field(grid, f.upper, 1.0);
  std::copy(f.values.begin(), f.values.end(), field.values().begin());
  return field;
}

void save_field_vtk(const std::filesystem::path& path, const CoefficientField& field) {
  const Grid& g = field.grid();
  write_vtk(path, g.cells(), g.h(), g.domain().lo,
            std::vector<double>(field.values().begin(), field.values().end()));
}

void save_field_vtk(const std::filesystem::path& path, const FieldFile& field) {
  write_vtk(path, field.cells, field.h, field.origin, field.values);
}

void save_trace(const std::filesystem::path& path, const BoundaryTrace& trace) {
  if (trace.values.size() != trace.n_face * trace.n_levels)
    throw Error(ErrorCode::DimensionMismatch, "trace payload does not match its dimensions");
  Writer w(path);
  w.magic(kTraceMagic);
  w.put<std::uint64_t>(trace.n_face);
  w.put<std::uint64_t>(trace.n_levels);
  w.put(trace.tau);
  w.put_all(trace.values);
  w.finish(path);
}

BoundaryTrace load_trace(const std::filesystem::path& path) {
  Reader r(path);
  r.magic(kTraceMagic);
  BoundaryTrace t;
  t.n_face = static_cast<std::size_t>(r.get<std::uint64_t>());
  t.n_levels = static_cast<std::size_t>(r.get<std::uint64_t>());
  t.tau = r.get<double>();
  const std::uintmax_t header = kTraceMagic.size() + 8 + 8 + 8;
  const std::uintmax_t count = static_cast<std::uintmax_t>(t.n_face) * t.n_levels;
  if (r.file_size() != header + count * sizeof(double)) r.corrupt("size does not match dimensions");
  t.values = r.get_all(static_cast<std::size_t>(count));
  return t;
}

}  // namespace waveinv
