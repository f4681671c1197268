#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace svanish::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kSchema = 2, kNumeric = 3 };

/// Every option of every subcommand, with defaults.
struct RunConfig {
  std::string subcommand = "verify";
  std::string structure;  ///< svanish-structure/1 path; empty = vacuum layers on radii 2 -> 1
  std::string problem;    ///< svanish-design/1 problem path; empty = six-layer order-2 default
  std::string out;        ///< output path; empty = standard output
  std::string format = "csv";
  int order = 2;
  int n_max = 0;  ///< 0 = automatic
  double tmin = 1e-3;
  double tmax = 1.0;
  int tcount = 31;
  double omega = 1.0;
  double rho = 0.1;
  std::array<double, 2> bounds{0.1, 10.0};
  int max_iters = 200;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  int restarts = 0;
  std::array<double, 3> polarization{1.0, 0.0, 0.0};
  std::array<double, 3> incidence{0.0, 0.0, 1.0};
  int theta_count = 19;
  int phi_count = 36;
  int grid = 21;
  double half_width = 2.5;
  std::vector<int> criteria;  ///< verify: subset to run, empty = all

  bool operator==(const RunConfig&) const = default;
};

std::string to_json(const RunConfig& config);
/// Missing keys keep their defaults; throws SchemaError on malformed entries.
RunConfig config_from_json(const std::string& text);

/// Executes one subcommand. Artifacts go to config.out (or `out`), messages to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11) into a RunConfig and runs it.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace svanish::cli
