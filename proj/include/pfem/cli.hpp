// SPDX-License-Identifier: Apache-2.0

#ifndef PFEM_CLI_HPP
#define PFEM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "pfem/simulation.hpp"

namespace pfem
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig
{
  std::string scenario = "square";
  std::string causality;  // empty: scenario default
  std::vector<std::string> q = {"CG1"};
  std::vector<std::string> p = {"CG1"};
  std::vector<std::string> boundary = {"DG0"};
  std::vector<int> levels;  // empty: scenario defaults
  double dt = 0.0;          // 0: scenario default
  double horizon = 0.0;     // 0: scenario default
  int quadrature_degree = 0;
  std::string input_rule = "midpoint";
  std::string backend = "sparse-lu";
  int workers = 1;
  int fit_points = 3;
  bool closed = false;
  std::string output = "out";
};

// Resolved single-combination simulation settings (first q, p and boundary entry).
SimulationSpec make_spec(const RunConfig &cfg, const Scenario &sc);

// Each command prints to `out`, reports problems on `err` and returns an exit status.
int cmd_simulate(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_converge(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_matrices(const RunConfig &cfg, std::ostream &out, std::ostream &err);

// Rate table: boundary family in the corner, q families as columns, p families as rows.
struct RateCell
{
  std::string q, p;
  std::string value;
};
void print_rate_table(std::ostream &os, const std::string &corner, const std::vector<std::string> &q,
                      const std::vector<std::string> &p, const std::vector<RateCell> &cells);

// Compact scientific notation without padding: 0 -> "0.0e0", 1.25e-13 -> "1.2e-13".
std::string format_compact(double v);

// Command-line front end: `simulate`, `converge` and `matrices` subcommands sharing the
// options of RunConfig, optionally read from a flat key = value file via --config.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace pfem

#endif  // PFEM_CLI_HPP
