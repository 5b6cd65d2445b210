#include "sweep/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

namespace sweep {

namespace {

using Entries = std::map<std::string, std::vector<std::string>>;

std::string scalar(const std::string& key, const std::vector<std::string>& in) {
  if (in.size() != 1) throw ConfigError(fmt::format("{}: expected a single value", key));
  return in.front();
}

double to_double(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError(fmt::format("{}: '{}' is not a number", key, s));
  return v;
}

long long to_integer(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError(fmt::format("{}: '{}' is not an integer", key, s));
  return v;
}

int to_int(const std::string& key, const std::string& s) {
  const long long v = to_integer(key, s);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(fmt::format("{}: {} out of range", key, v));
  return static_cast<int>(v);
}

std::vector<double> to_doubles(const std::string& key, const std::vector<std::string>& in) {
  std::vector<double> out;
  for (const auto& s : in) out.push_back(to_double(key, s));
  return out;
}

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

Entries read_entries(const std::string& text) {
  std::istringstream in(text);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML{}.from_config(in);
  } catch (const CLI::Error& e) {
    throw ConfigError(fmt::format("config syntax: {}", e.what()));
  }
  Entries entries;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    const std::string key = item.fullname();
    if (entries.count(key)) throw ConfigError(fmt::format("{}: duplicate key", key));
    entries[key] = item.inputs;
  }
  return entries;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  const Entries entries = read_entries(text);
  RunConfig cfg;
  for (const auto& [key, in] : entries) {
    if (key == "problem") {
      cfg.problem = scalar(key, in);
      parse_problem_id(*cfg.problem);
    } else if (key == "T") {
      cfg.horizon = to_double(key, scalar(key, in));
    } else if (key == "n") {
      cfg.n = to_int(key, scalar(key, in));
    } else if (key == "ladder") {
      for (const auto& s : in) cfg.ladder.push_back(to_int(key, s));
    } else if (key == "gamma") {
      cfg.gamma = to_double(key, scalar(key, in));
    } else if (key == "seed") {
      const long long s = to_integer(key, scalar(key, in));
      if (s < 0) throw ConfigError("seed: must be >= 0");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "mode") {
      const auto m = parse_solve_mode(scalar(key, in));
      if (!m) throw ConfigError(fmt::format("mode: unknown '{}'", scalar(key, in)));
      cfg.mode = *m;
    } else if (key == "x") {
      cfg.x = to_doubles(key, in);
    } else if (key == "x0") {
      cfg.x0 = to_doubles(key, in);
    } else if (key == "schedule.c") {
      cfg.schedule_c = to_double(key, scalar(key, in));
    } else if (key == "schedule.p") {
      cfg.schedule_p = to_double(key, scalar(key, in));
    } else if (key == "oracle.kind") {
      cfg.oracle = parse_oracle_kind(scalar(key, in));
      if (!cfg.oracle) throw ConfigError(fmt::format("oracle.kind: unknown '{}'", scalar(key, in)));
    } else if (key == "oracle.eps") {
      cfg.projector.eps = to_double(key, scalar(key, in));
    } else if (key == "oracle.max_iter") {
      cfg.projector.max_iter = to_int(key, scalar(key, in));
    } else if (key == "oracle.feas_tol") {
      cfg.projector.feas_tol = to_double(key, scalar(key, in));
    } else if (key == "reference.kind") {
      const auto r = parse_reference_kind(scalar(key, in));
      if (!r) throw ConfigError(fmt::format("reference.kind: unknown '{}'", scalar(key, in)));
      cfg.reference = *r;
    } else if (key == "reference.n") {
      cfg.reference_n = to_int(key, scalar(key, in));
    } else if (key.rfind("set.", 0) == 0) {
      if (!cfg.set) cfg.set = SetSpec{};
      SetSpec& s = *cfg.set;
      const std::string f = key.substr(4);
      if (f == "kind") s.kind = scalar(key, in);
      else if (f == "center") s.center = to_doubles(key, in);
      else if (f == "radius") s.radius = to_double(key, scalar(key, in));
      else if (f == "lo") s.lo = to_doubles(key, in);
      else if (f == "hi") s.hi = to_doubles(key, in);
      else if (f == "normal") s.normal = to_doubles(key, in);
      else if (f == "offset") s.offset = to_double(key, scalar(key, in));
      else if (f == "normals") s.normals = to_doubles(key, in);
      else if (f == "offsets") s.offsets = to_doubles(key, in);
      else if (f == "slater") s.slater = to_doubles(key, in);
      else if (f == "velocity") s.velocity = to_doubles(key, in);
      else throw ConfigError(fmt::format("unknown key '{}'", key));
    } else if (key.rfind("perturbation.", 0) == 0) {
      auto& p = cfg.perturbation;
      const std::string f = key.substr(13);
      if (f == "kind") p.kind = scalar(key, in);
      else if (f == "lo") p.lo = to_double(key, scalar(key, in));
      else if (f == "hi") p.hi = to_double(key, scalar(key, in));
      else if (f == "center") p.center = to_doubles(key, in);
      else if (f == "radius") p.radius = to_double(key, scalar(key, in));
      else throw ConfigError(fmt::format("unknown key '{}'", key));
    } else {
      throw ConfigError(fmt::format("unknown key '{}'", key));
    }
  }

  if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) throw ConfigError("T: must be > 0");
  if (cfg.n < 1) throw ConfigError("n: must be >= 1");
  if (!(cfg.gamma > 0.0)) throw ConfigError("gamma: must be > 0");
  if (!(cfg.schedule_p > 2.0)) throw ConfigError("schedule.p: must be > 2 so that eps_n / mu_n^2 -> 0");
  if (!(cfg.schedule_c > 0.0)) throw ConfigError("schedule.c: must be > 0");
  if (!(cfg.projector.eps > 0.0)) throw ConfigError("oracle.eps: must be > 0");
  if (cfg.projector.max_iter < 1) throw ConfigError("oracle.max_iter: must be >= 1");
  if (!(cfg.projector.feas_tol >= 0.0)) throw ConfigError("oracle.feas_tol: must be >= 0");
  for (std::size_t i = 0; i < cfg.ladder.size(); ++i) {
    if (cfg.ladder[i] < 1) throw ConfigError("ladder: entries must be >= 1");
    if (i > 0 && cfg.ladder[i] <= cfg.ladder[i - 1]) throw ConfigError("ladder: must be strictly increasing");
  }
  if (cfg.problem && cfg.set) throw ConfigError("give either problem or set, not both");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

SetDescription build_set(const SetSpec& s) {
  try {
    if (s.kind == "ball") return SetDescription::ball(to_vec(s.center), s.radius);
    if (s.kind == "box") return SetDescription::box(to_vec(s.lo), to_vec(s.hi));
    if (s.kind == "halfspace") return SetDescription::halfspace(to_vec(s.normal), s.offset);
    if (s.kind == "norm_sublevel") {
      const Vec c = to_vec(s.center);
      ConvexFn g{[c](const Vec& y) { return (y - c).norm(); },
                 [c](const Vec& y) -> Vec {
                   const double r = (y - c).norm();
                   return r > 0.0 ? Vec((y - c) / r) : Vec(Vec::Zero(c.size()));
                 }};
      return SetDescription::sublevel(std::move(g), s.radius, c);
    }
    if (s.kind == "max_affine") {
      const auto d = s.slater.size();
      if (d == 0 || s.offsets.empty() || s.normals.size() != d * s.offsets.size())
        throw ConfigError("set: max_affine needs slater (dimension d) and normals of length d * len(offsets)");
      std::vector<ConvexFn> pieces;
      for (std::size_t i = 0; i < s.offsets.size(); ++i) {
        const Vec a = to_vec(std::vector<double>(s.normals.begin() + static_cast<long>(i * d),
                                                 s.normals.begin() + static_cast<long>((i + 1) * d)));
        const double b = s.offsets[i];
        pieces.push_back(ConvexFn{[a, b](const Vec& y) { return a.dot(y) - b; }, [a](const Vec&) { return a; }});
      }
      return SetDescription::intersection(std::move(pieces), to_vec(s.slater));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("set: {}", e.what()));
  }
  throw ConfigError(fmt::format("set.kind: unknown '{}'", s.kind));
}

Perturbation build_perturbation(const PerturbationSpec& p, int dim) {
  try {
    if (p.kind == "zero") return perturbations::zero(dim);
    if (p.kind == "linear_decay") return perturbations::linear_decay(dim);
    if (p.kind == "interval") {
      if (dim != 1) throw ConfigError("perturbation: interval requires dimension 1");
      return perturbations::interval(p.lo, p.hi);
    }
    if (p.kind == "ball") {
      if (static_cast<int>(p.center.size()) != dim) throw ConfigError("perturbation.center: dimension mismatch");
      return perturbations::ball(to_vec(p.center), p.radius);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("perturbation: {}", e.what()));
  }
  throw ConfigError(fmt::format("perturbation.kind: unknown '{}'", p.kind));
}

SweepingProblem build_problem(const RunConfig& cfg) {
  if (cfg.problem) return catalog_problem(parse_problem_id(*cfg.problem), cfg.horizon);
  if (!cfg.set) throw ConfigError("config needs a catalog problem or an inline set");
  const SetDescription base = build_set(*cfg.set);
  MovingSet moving = cfg.set->velocity.empty() ? MovingSet::fixed(base) : MovingSet::translating(base, to_vec(cfg.set->velocity));
  if (cfg.x0.empty()) throw ConfigError("x0: required for inline problems");
  try {
    return SweepingProblem(std::move(moving), build_perturbation(cfg.perturbation, base.dim()), to_vec(cfg.x0),
                           cfg.horizon, cfg.mode);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

EpsSchedule build_schedule(const RunConfig& cfg) { return EpsSchedule(cfg.schedule_c, cfg.schedule_p); }

StepperConfig stepper_config(const RunConfig& cfg) {
  StepperConfig s;
  s.gamma = cfg.gamma;
  s.max_iter = cfg.projector.max_iter;
  if (cfg.oracle) s.oracle = *cfg.oracle;
  else if (cfg.problem) s.oracle = default_oracle(parse_problem_id(*cfg.problem));
  return s;
}

}  // namespace sweep
