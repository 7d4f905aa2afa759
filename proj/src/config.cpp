#include "waveinv/config.hpp"

#include <omp.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "waveinv/error.hpp"
#include "waveinv/forward.hpp"

namespace waveinv {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::Config, msg); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    bad("key '" + key + "': not a number: '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad("key '" + key + "': not an integer: '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad("key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) out.push_back(to_double(key, tok));
  return out;
}

Vec3 to_vec3(const std::string& key, const std::string& v) {
  const auto xs = to_doubles(key, v);
  if (xs.size() != 3) bad("key '" + key + "': expected 3 numbers");
  return {xs[0], xs[1], xs[2]};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string vec(const Vec3& v) { return num(v[0]) + " " + num(v[1]) + " " + num(v[2]); }

PhantomSpec::Kind to_kind(const std::string& v) {
  if (v == "balls") return PhantomSpec::Kind::Balls;
  if (v == "gaussian1") return PhantomSpec::Kind::Gaussian1;
  if (v == "gaussian3") return PhantomSpec::Kind::Gaussian3;
  if (v == "uniform") return PhantomSpec::Kind::Uniform;
  bad("unknown phantom '" + v + "'");
}

}  // namespace

const char* to_string(PhantomSpec::Kind kind) {
  switch (kind) {
    case PhantomSpec::Kind::Balls: return "balls";
    case PhantomSpec::Kind::Gaussian1: return "gaussian1";
    case PhantomSpec::Kind::Gaussian3: return "gaussian3";
    case PhantomSpec::Kind::Uniform: return "uniform";
  }
  return "uniform";
}

std::vector<Ball> RunConfig::ball_list() const {
  if (balls == "default") return default_balls(false);
  if (balls == "shifted") return default_balls(true);
  std::vector<Ball> out;
  std::istringstream is(balls);
  std::string group;
  while (std::getline(is, group, ';')) {
    if (trim(group).empty()) continue;
    const auto xs = to_doubles("balls", group);
    if (xs.size() != 5) bad("key 'balls': each ball needs x1 x2 x3 radius value");
    out.push_back({{xs[0], xs[1], xs[2]}, xs[3], xs[4]});
  }
  if (out.empty()) bad("key 'balls': empty list");
  return out;
}

PhantomSpec RunConfig::phantom_spec() const {
  PhantomSpec p;
  p.kind = phantom;
  if (phantom == PhantomSpec::Kind::Balls) p.balls = ball_list();
  p.uniform_value = uniform_value;
  return p;
}

CgConfig RunConfig::cg() const {
  CgConfig c;
  c.theta = theta;
  c.max_iter = max_iter;
  c.rule = step_rule;
  c.alpha = alpha;
  c.step_scale = step_scale;
  c.restart_every = restart_every;
  return c;
}

void RunConfig::validate() const {
  try {
    (void)build_grid(domain, inner, h);
    (void)make_time_axis(tau, final_time);
  } catch (const Error& e) {
    bad(e.what());
  }
  if (!(upper > 1.0)) bad("upper bound d must exceed 1");
  const double stable = h / std::sqrt(3.0 * upper);
  if (tau > stable * (1.0 + 1e-12)) bad("tau " + num(tau) + " exceeds the stable step " + num(stable) + " for c = d");
  if (!(omega > 0.0)) bad("omega must be positive");

  switch (phantom) {
    case PhantomSpec::Kind::Gaussian1:
    case PhantomSpec::Kind::Gaussian3:
      if (6.0 > upper) bad("gaussian peak 6 exceeds d");
      break;
    case PhantomSpec::Kind::Uniform:
      if (uniform_value < 1.0 || uniform_value > upper) bad("uniform value outside [1, d]");
      break;
    case PhantomSpec::Kind::Balls:
      for (const Ball& b : ball_list()) {
        if (b.value < 1.0 || b.value > upper) bad("ball value outside [1, d]");
        if (!(b.radius > 0.0)) bad("ball radius must be positive");
      }
      break;
  }

  if (sigma < 0.0) bad("sigma must be >= 0");
  if (gamma_delta > 0.0) {
    if (!(gamma_nu > 0.0 && gamma_nu < 0.25)) bad("gamma_nu must lie in (0, 1/4)");
  } else if (!(gamma > 0.0)) {
    bad("gamma must be positive");
  }
  if (!(cutoff > 0.0 && cutoff < final_time)) bad("cutoff window must lie in (0, T)");
  if (!(P > 0.0 && P < 1.0)) bad("P must lie in (0, 1)");
  if (threads < 0) bad("threads must be >= 0");
  if (!(bound_delta > 0.0)) bad("bound_delta must be positive");
  try {
    cg().validate();
  } catch (const Error& e) {
    bad(e.what());
  }
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  const std::string& v = value;
  if (key == "domain_lo") cfg.domain.lo = to_vec3(key, v);
  else if (key == "domain_hi") cfg.domain.hi = to_vec3(key, v);
  else if (key == "inner_lo") cfg.inner.lo = to_vec3(key, v);
  else if (key == "inner_hi") cfg.inner.hi = to_vec3(key, v);
  else if (key == "h") cfg.h = to_double(key, v);
  else if (key == "tau") cfg.tau = to_double(key, v);
  else if (key == "T") cfg.final_time = to_double(key, v);
  else if (key == "omega") cfg.omega = to_double(key, v);
  else if (key == "initial_bump") cfg.initial_bump = to_bool(key, v);
  else if (key == "phantom") cfg.phantom = to_kind(v);
  else if (key == "balls") cfg.balls = v;
  else if (key == "uniform_value") cfg.uniform_value = to_double(key, v);
  else if (key == "d") cfg.upper = to_double(key, v);
  else if (key == "sigma") cfg.sigma = to_double(key, v);
  else if (key == "seed") {
    const long long s = to_int(key, v);
    if (s < 0) bad("seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  else if (key == "noise") {
    if (v != "random" && v != "literal") bad("noise must be random or literal");
    cfg.literal_noise = v == "literal";
  }
  else if (key == "refine_data") cfg.refine_data = to_bool(key, v);
  else if (key == "gamma") cfg.gamma = to_double(key, v);
  else if (key == "gamma_delta") cfg.gamma_delta = to_double(key, v);
  else if (key == "gamma_nu") cfg.gamma_nu = to_double(key, v);
  else if (key == "cutoff") cfg.cutoff = to_double(key, v);
  else if (key == "theta") cfg.theta = to_double(key, v);
  else if (key == "max_iter") cfg.max_iter = static_cast<int>(to_int(key, v));
  else if (key == "step_rule") {
    if (v == "armijo") cfg.step_rule = StepRule::Armijo;
    else if (v == "fixed") cfg.step_rule = StepRule::Fixed;
    else bad("step_rule must be armijo or fixed");
  }
  else if (key == "alpha") cfg.alpha = to_double(key, v);
  else if (key == "step_scale") cfg.step_scale = to_double(key, v);
  else if (key == "restart_every") cfg.restart_every = static_cast<int>(to_int(key, v));
  else if (key == "P") cfg.P = to_double(key, v);
  else if (key == "bound_delta") cfg.bound_delta = to_double(key, v);
  else if (key == "bound_nu") cfg.bound_nu = to_double(key, v);
  else if (key == "bound_xi") cfg.bound_xi = to_double(key, v);
  else if (key == "threads") cfg.threads = static_cast<int>(to_int(key, v));
  else if (key == "output_dir") cfg.output_dir = v;
  else bad("unknown key '" + key + "'");
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) bad("line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  return parse_config(in);
}

std::string serialize(const RunConfig& c) {
  std::ostringstream os;
  os << "domain_lo = " << vec(c.domain.lo) << "\n"
     << "domain_hi = " << vec(c.domain.hi) << "\n"
     << "inner_lo = " << vec(c.inner.lo) << "\n"
     << "inner_hi = " << vec(c.inner.hi) << "\n"
     << "h = " << num(c.h) << "\n"
     << "tau = " << num(c.tau) << "\n"
     << "T = " << num(c.final_time) << "\n"
     << "omega = " << num(c.omega) << "\n"
     << "initial_bump = " << (c.initial_bump ? "true" : "false") << "\n"
     << "phantom = " << to_string(c.phantom) << "\n"
     << "balls = " << c.balls << "\n"
     << "uniform_value = " << num(c.uniform_value) << "\n"
     << "d = " << num(c.upper) << "\n"
     << "sigma = " << num(c.sigma) << "\n"
     << "seed = " << c.seed << "\n"
     << "noise = " << (c.literal_noise ? "literal" : "random") << "\n"
     << "refine_data = " << (c.refine_data ? "true" : "false") << "\n"
     << "gamma = " << num(c.gamma) << "\n"
     << "gamma_delta = " << num(c.gamma_delta) << "\n"
     << "gamma_nu = " << num(c.gamma_nu) << "\n"
     << "cutoff = " << num(c.cutoff) << "\n"
     << "theta = " << num(c.theta) << "\n"
     << "max_iter = " << c.max_iter << "\n"
     << "step_rule = " << (c.step_rule == StepRule::Armijo ? "armijo" : "fixed") << "\n"
     << "alpha = " << num(c.alpha) << "\n"
     << "step_scale = " << num(c.step_scale) << "\n"
     << "restart_every = " << c.restart_every << "\n"
     << "P = " << num(c.P) << "\n"
     << "bound_delta = " << num(c.bound_delta) << "\n"
     << "bound_nu = " << num(c.bound_nu) << "\n"
     << "bound_xi = " << num(c.bound_xi) << "\n"
     << "threads = " << c.threads << "\n"
     << "output_dir = " << c.output_dir.string() << "\n";
  return os.str();
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides) {
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) bad("override '" + o + "' is not key=value");
    apply_setting(cfg, trim(o.substr(0, eq)), trim(o.substr(eq + 1)));
  }
  cfg.validate();
}

int resolve_threads(const RunConfig& cfg) {
  if (const char* env = std::getenv("WAVEINV_THREADS")) {
    const std::string v = trim(env);
    int n = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec == std::errc() && p == v.data() + v.size() && n > 0) return n;
  }
  return cfg.threads > 0 ? cfg.threads : omp_get_num_procs();
}

}  // namespace waveinv
