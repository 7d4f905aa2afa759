#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "waveinv/fields.hpp"
#include "waveinv/geometry.hpp"
#include "waveinv/optimizer.hpp"

namespace waveinv {

/// Everything one command needs, read from a flat "key = value" file.
/// Lines starting with '#' are comments. Vectors are whitespace separated;
/// explicit balls are "x1 x2 x3 radius value" groups joined by ';'.
struct RunConfig {
  BoxDomain domain{{-3.4, -0.8, -0.8}, {3.4, 0.8, 0.8}};
  BoxDomain inner{{-3.0, -0.4, -0.4}, {3.0, 0.4, 0.4}};
  double h = 0.2;
  double tau = 0.012;
  double final_time = 1.5;
  double omega = 2.0;
  bool initial_bump = true;

  PhantomSpec::Kind phantom = PhantomSpec::Kind::Gaussian1;
  std::string balls = "default";  // default | shifted | explicit list
  double uniform_value = 1.0;
  double upper = 10.0;  // d

  double sigma = 3.0;
  std::uint64_t seed = 1;
  bool literal_noise = false;
  bool refine_data = true;

  double gamma = 1e-5;
  double gamma_delta = 0.0;  // > 0 selects gamma = delta^(2 nu)
  double gamma_nu = 0.0;
  double cutoff = 0.12;

  double theta = 1e-6;
  int max_iter = 25;
  StepRule step_rule = StepRule::Armijo;
  double alpha = 0.0;
  double step_scale = 1.0;
  int restart_every = 0;

  double P = 0.7;
  // theorem3 diagnostic inputs
  double bound_delta = 0.03;
  double bound_nu = 0.1;
  double bound_xi = 1.0;

  int threads = 0;  // 0: number of processors
  std::filesystem::path output_dir = "out";

  bool operator==(const RunConfig&) const = default;

  std::vector<Ball> ball_list() const;
  PhantomSpec phantom_spec() const;
  CgConfig cg() const;

  /// Field and cross-field checks: positive sizes, admissible phantom
  /// (value <= d), tau within the stable step for c = d. Throws Error{Config}.
  void validate() const;
};

/// Sets one key. Throws Error{Config} for unknown keys or malformed values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Parses and validates. Later lines override earlier ones.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);
std::string serialize(const RunConfig& cfg);

/// "key=value" overrides applied on top of a parsed file, then revalidated.
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides);

/// Config thread count unless WAVEINV_THREADS holds a positive integer.
int resolve_threads(const RunConfig& cfg);

const char* to_string(PhantomSpec::Kind kind);

}  // namespace waveinv
