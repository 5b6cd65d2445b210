#ifndef SWEEP_IO_HPP
#define SWEEP_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "sweep/audit.hpp"
#include "sweep/harness.hpp"
#include "sweep/oracles.hpp"
#include "sweep/solver.hpp"

namespace sweep::io {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits; round-trips every finite double.
std::string format_double(double v);

/// Deterministic JSON text: insertion-ordered keys, two-space indent, doubles
/// via format_double, non-finite doubles as null.
std::string dump_json(const Json& j);
Json parse_json(const std::string& text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const CsvTable& table);
/// Throws ParseError on ragged rows or non-numeric cells.
CsvTable parse_csv(const std::string& text);

/// Columns t, x0 .. x{d-1}, certified_eps, budget; one row per computed node.
/// Row 0 carries the initial condition with zero certificate and budget.
CsvTable trajectory_table(const Trajectory& traj);
Json trajectory_json(const Trajectory& traj, const SweepingProblem& problem);
Json audit_json(const AuditReport& report);
/// Columns n, mu, eps, E.
CsvTable rate_table(const RateStudy& study);
Json rate_json(const RateStudy& study);
Json projection_json(const ProjectionResult& result);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace sweep::io

#endif  // SWEEP_IO_HPP
