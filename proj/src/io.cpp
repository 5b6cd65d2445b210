#include "sweep/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace sweep::io {

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

namespace {

void emit(const Json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        emit(it.value(), out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool scalars = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
      if (scalars) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(j[i], out, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        emit(j[i], out, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) out += (i ? "," : "") + table.header[i];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
    out += "\n";
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw ParseError("csv: missing header");
  table.header = split(trim(line));
  int lineno = 1;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != table.header.size())
      throw ParseError(fmt::format("csv line {}: {} cells, header has {}", lineno, cells.size(), table.header.size()));
    std::vector<double> row;
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      const auto used = static_cast<std::size_t>(end - c.c_str());
      if (c.empty() || used != c.size()) throw ParseError(fmt::format("csv line {}: bad number '{}'", lineno, c));
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable trajectory_table(const Trajectory& traj) {
  CsvTable table;
  const Eigen::Index d = traj.nodes.empty() ? 0 : traj.nodes.front().size();
  table.header.push_back("t");
  for (Eigen::Index i = 0; i < d; ++i) table.header.push_back(fmt::format("x{}", i));
  table.header.push_back("certified_eps");
  table.header.push_back("budget");
  for (std::size_t k = 0; k < traj.nodes.size(); ++k) {
    std::vector<double> row;
    row.push_back(traj.grid.node(static_cast<int>(k)));
    for (Eigen::Index i = 0; i < d; ++i) row.push_back(traj.nodes[k][i]);
    row.push_back(k == 0 ? 0.0 : traj.steps[k - 1].certified_eps);
    row.push_back(k == 0 ? 0.0 : traj.steps[k - 1].budget);
    table.rows.push_back(std::move(row));
  }
  return table;
}

Json trajectory_json(const Trajectory& traj, const SweepingProblem& problem) {
  Json j;
  j["T"] = traj.grid.horizon();
  j["n"] = traj.grid.size();
  j["dim"] = problem.dim();
  j["mode"] = to_string(problem.mode());
  j["mu"] = traj.grid.step();
  j["eps_n"] = traj.eps_n;
  j["schedule"] = {{"c", traj.schedule.c()}, {"p", traj.schedule.p()}};
  j["gamma"] = traj.selection.gamma;
  j["lipschitz"] = problem.lipschitz();
  j["complete"] = traj.complete();
  j["failed_cells"] = traj.failed_cells();
  Json nodes = Json::array();
  for (std::size_t k = 0; k < traj.nodes.size(); ++k) {
    Json node;
    node["k"] = k;
    node["t"] = traj.grid.node(static_cast<int>(k));
    node["x"] = vec_json(traj.nodes[k]);
    if (k > 0) {
      const auto& s = traj.steps[k - 1];
      node["integral"] = vec_json(traj.integrals[k - 1]);
      node["predictor_distance"] = s.predictor_distance;
      node["distance_is_upper_bound"] = s.distance_is_upper_bound;
      node["certified_eps"] = s.certified_eps;
      node["budget"] = s.budget;
      node["iterations"] = s.iterations;
      node["failed"] = s.failed;
    }
    nodes.push_back(std::move(node));
  }
  j["nodes"] = std::move(nodes);
  return j;
}

Json audit_json(const AuditReport& report) {
  const auto& k = report.constants;
  Json j;
  j["passed"] = report.passed();
  j["rate_regime"] = report.rate_regime;
  j["constants"] = {{"L_C", k.lipschitz},
                    {"h_x0", k.growth_at_x0},
                    {"L_h", k.growth_lipschitz},
                    {"sqrt_gamma", k.sqrt_gamma},
                    {"sqrt_eps_over_mu", k.sqrt_eps_over_mu},
                    {"K1", k.k1},
                    {"K2", k.k2},
                    {"K3", k.k3},
                    {"K4", k.k4},
                    {"K5", k.k5},
                    {"K6", k.k6}};
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"bound", c.bound},
                      {"samples", c.samples},
                      {"violations", c.violations},
                      {"worst_excess", c.worst_excess},
                      {"worst_ratio", c.worst_ratio},
                      {"passed", c.passed()}});
  }
  j["checks"] = std::move(checks);
  j["failed_cells"] = report.failed_cells;
  return j;
}

CsvTable rate_table(const RateStudy& study) {
  CsvTable table;
  table.header = {"n", "mu", "eps", "E"};
  for (const auto& e : study.entries) table.rows.push_back({static_cast<double>(e.n), e.mu, e.eps, e.error});
  return table;
}

Json rate_json(const RateStudy& study) {
  Json j;
  j["problem"] = study.problem;
  j["ladder"] = study.ladder;
  j["schedule"] = {{"c", study.schedule.c()}, {"p", study.schedule.p()}};
  j["reference"] = to_string(study.reference);
  j["n_ref"] = study.n_ref;
  Json errors = Json::array();
  for (const auto& e : study.entries) errors.push_back(e.error);
  j["E"] = std::move(errors);
  j["slope"] = study.slope ? Json(*study.slope) : Json(nullptr);
  Json ratios = Json::array();
  for (double r : study.ratios) ratios.push_back(std::isfinite(r) ? Json(r) : Json(nullptr));
  j["ratios"] = std::move(ratios);
  if (study.self_consistency) {
    const auto& g = *study.self_consistency;
    j["self_consistency"] = {{"n_ref", g.n_ref}, {"error", g.error}, {"bound", g.bound}, {"passed", g.passed()}};
  } else {
    j["self_consistency"] = nullptr;
  }
  j["exact"] = study.exact;
  j["strictly_decreasing"] = study.strictly_decreasing;
  j["slope_floor"] = study.slope_floor;
  j["slope_floor_met"] = study.slope_floor_met;
  j["passed"] = study.passed();
  return j;
}

Json projection_json(const ProjectionResult& result) {
  Json j;
  j["point"] = vec_json(result.point);
  j["certified_eps"] = result.certified_eps;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
  out << content;
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sweep::io
