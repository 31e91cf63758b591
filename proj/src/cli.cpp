// SPDX-License-Identifier: Apache-2.0

#include "pfem/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/SparseCholesky>

#include "pfem/error.hpp"

namespace pfem
{

namespace
{

namespace fs = std::filesystem;

int exit_code(ErrorKind kind)
{
  switch (kind)
  {
  case ErrorKind::SolverFailure:
  case ErrorKind::DegenerateCell:
    return kExitNumerical;
  default:
    return kExitConfig;
  }
}

// Runs a command body and maps library errors to exit codes.
int guarded(std::ostream &err, const std::function<int()> &body)
{
  try
  {
    return body();
  }
  catch (const Error &e)
  {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  }
  catch (const std::ios_base::failure &e)
  {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  catch (const fs::filesystem_error &e)
  {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

Discretization make_disc(const std::string &q, const std::string &p, const std::string &b)
{
  Discretization d;
  d.q = ElementFamily::parse(q, ValueShape::Vector2);
  d.p = ElementFamily::parse(p, ValueShape::Scalar);
  const ElementFamily bf = ElementFamily::parse(b, ValueShape::Scalar);
  PFEM_THROW_IF(bf.is_hdiv(), InvalidCombination, "boundary family must be CG or DG, got " + bf.name());
  d.boundary_kind = bf.kind;
  d.boundary_order = bf.order;
  return d;
}

void validate(const RunConfig &cfg)
{
  PFEM_THROW_IF(cfg.q.empty() || cfg.p.empty() || cfg.boundary.empty(), InvalidArgument,
                "q, p and boundary families must not be empty");
  PFEM_THROW_IF(cfg.dt < 0.0 || cfg.horizon < 0.0, InvalidArgument, "dt and horizon must be positive");
  for (int n : cfg.levels)
  {
    PFEM_THROW_IF(n < 1, InvalidArgument, "mesh levels must be positive");
  }
}

std::ofstream open_output(const RunConfig &cfg, const std::string &name)
{
  fs::create_directories(cfg.output);
  std::ofstream os(fs::path(cfg.output) / name);
  PFEM_THROW_IF(!os, InvalidArgument, "cannot write " + (fs::path(cfg.output) / name).string());
  return os;
}

void print_warnings(std::ostream &out, const std::vector<std::string> &warnings)
{
  for (const auto &w : warnings)
  {
    out << "warning: " << w << "\n";
  }
}

std::string fixed(double v, int digits)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v)
{
  if (std::isnan(v))
  {
    return "nan";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

// File-name friendly family name: "CG_1" -> "CG1".
std::string compact_name(const std::string &family)
{
  std::string s = ElementFamily::parse(family).name();
  s.erase(std::remove(s.begin(), s.end(), '_'), s.end());
  return s;
}

bool spd(const SparseMatrix &m)
{
  Eigen::SimplicialLLT<SparseMatrix> llt(m);
  return llt.info() == Eigen::Success;
}

double max_abs(const SparseMatrix &m)
{
  double v = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
    {
      v = std::max(v, std::abs(it.value()));
    }
  }
  return v;
}

}  // namespace

std::string format_compact(double v)
{
  if (v == 0.0)
  {
    return "0.0e0";
  }
  if (!std::isfinite(v))
  {
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  const std::string s = buf;
  const auto e = s.find('e');
  return s.substr(0, e) + "e" + std::to_string(std::stoi(s.substr(e + 1)));
}

SimulationSpec make_spec(const RunConfig &cfg, const Scenario &sc)
{
  validate(cfg);
  SimulationSpec spec;
  spec.disc = make_disc(cfg.q.front(), cfg.p.front(), cfg.boundary.front());
  spec.causality = cfg.causality.empty() ? sc.causality : parse_causality(cfg.causality);
  spec.level = cfg.levels.empty() ? sc.default_levels.front() : cfg.levels.front();
  spec.dt = cfg.dt;
  spec.horizon = cfg.horizon;
  spec.quadrature_degree = cfg.quadrature_degree;
  spec.stepper.input_rule = parse_input_rule(cfg.input_rule);
  spec.stepper.backend = parse_solver_backend(cfg.backend);
  spec.closed = cfg.closed;
  return spec;
}

void print_rate_table(std::ostream &os, const std::string &corner, const std::vector<std::string> &q,
                      const std::vector<std::string> &p, const std::vector<RateCell> &cells)
{
  std::vector<std::string> header = {corner};
  for (const auto &f : q)
  {
    header.push_back(f);
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto &pf : p)
  {
    std::vector<std::string> row = {pf};
    for (const auto &qf : q)
    {
      std::string v = "-";
      for (const auto &c : cells)
      {
        if (c.q == qf && c.p == pf)
        {
          v = c.value;
        }
      }
      row.push_back(v);
    }
    rows.push_back(row);
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t j = 0; j < header.size(); ++j)
  {
    width[j] = header[j].size();
    for (const auto &r : rows)
    {
      width[j] = std::max(width[j], r[j].size());
    }
  }
  auto line = [&](const std::vector<std::string> &r) {
    for (std::size_t j = 0; j < r.size(); ++j)
    {
      os << (j == 0 ? "" : " | ") << std::left << std::setw(static_cast<int>(width[j])) << r[j];
    }
    os << "\n";
  };
  line(header);
  for (std::size_t j = 0; j < header.size(); ++j)
  {
    os << (j == 0 ? "" : "-+-") << std::string(width[j], '-');
  }
  os << "\n";
  for (const auto &r : rows)
  {
    line(r);
  }
}

int cmd_simulate(const RunConfig &cfg, std::ostream &out, std::ostream &err)
{
  return guarded(err, [&] {
    const Scenario sc = scenario_by_name(cfg.scenario);
    const SimulationSpec spec = make_spec(cfg, sc);
    const RunResult r = run_simulation(sc, spec);
    {
      std::ofstream os = open_output(cfg, "energy.csv");
      write_energy_csv(os, r.energy);
    }
    if (r.has_errors)
    {
      std::ofstream os = open_output(cfg, "errors.csv");
      write_errors_csv(os, r.errors);
    }
    out << "scenario: " << sc.name << "\n";
    out << "discretization: " << spec.disc.label() << ", " << to_string(spec.causality) << " causality\n";
    out << "level: " << r.level << " (h = " << sci(r.h) << "), N_q " << r.n_q << ", N_p " << r.n_p
        << ", N_boundary " << r.n_b << "\n";
    out << "steps: " << r.steps << " of dt = " << format_double(r.dt) << "\n";
    out << "H(0) = " << sci(r.energy.front().H) << ", H(T) = " << sci(r.energy.back().H)
        << ", max H = " << sci(r.max_hamiltonian) << "\n";
    out << "ledger: S(T) = " << sci(r.energy.back().S) << ", Dmp(T) = " << sci(r.energy.back().Dmp)
        << ", max |E(t) - E(0)| = " << sci(r.ledger_drift) << "\n";
    if (r.has_errors)
    {
      out << "EX(T) = " << sci(r.EX_final) << ", max EX = " << sci(r.EX_max) << ", EH(T) = " << sci(r.EH_final)
          << "\n";
    }
    print_warnings(out, r.warnings);
    out << "wrote " << (fs::path(cfg.output) / "energy.csv").string()
        << (r.has_errors ? " and " + (fs::path(cfg.output) / "errors.csv").string() : std::string()) << "\n";
    return kExitOk;
  });
}

int cmd_converge(const RunConfig &cfg, std::ostream &out, std::ostream &err)
{
  return guarded(err, [&] {
    const Scenario sc = scenario_by_name(cfg.scenario);
    const SimulationSpec base = make_spec(cfg, sc);
    const std::vector<int> levels = cfg.levels.empty() ? sc.default_levels : cfg.levels;
    const bool single = cfg.q.size() == 1 && cfg.p.size() == 1 && cfg.boundary.size() == 1;

    std::vector<std::string> qn, pn;
    for (const auto &f : cfg.q)
    {
      qn.push_back(ElementFamily::parse(f).name());
    }
    for (const auto &f : cfg.p)
    {
      pn.push_back(ElementFamily::parse(f).name());
    }

    out << "scenario: " << sc.name << ", " << to_string(base.causality) << " causality, dt = "
        << format_double(base.dt > 0 ? base.dt : sc.dt) << ", levels";
    for (int n : levels)
    {
      out << " " << n;
    }
    out << "\n";

    for (const auto &b : cfg.boundary)
    {
      std::vector<RateCell> ex_cells, eh_cells;
      for (std::size_t i = 0; i < cfg.p.size(); ++i)
      {
        for (std::size_t j = 0; j < cfg.q.size(); ++j)
        {
          SimulationSpec spec = base;
          spec.disc = make_disc(cfg.q[j], cfg.p[i], b);
          ConvergenceReport rep;
          try
          {
            rep = run_convergence(sc, spec, levels, cfg.workers, cfg.fit_points);
          }
          catch (const Error &e)
          {
            if (single || e.kind() == ErrorKind::SolverFailure)
            {
              throw;
            }
            err << spec.disc.label() << ": skipped (" << e.what() << ")\n";
            ex_cells.push_back({qn[j], pn[i], "n/a"});
            eh_cells.push_back({qn[j], pn[i], "n/a"});
            continue;
          }
          const std::string file = single ? std::string("convergence.csv")
                                          : "convergence_" + compact_name(cfg.q[j]) + "_" +
                                                compact_name(cfg.p[i]) + "_" + compact_name(b) + ".csv";
          {
            std::ofstream os = open_output(cfg, file);
            write_convergence_csv(os, rep);
          }
          out << "\n" << spec.disc.label() << "\n";
          out << "  n      h            N_q     N_p     N_b    EX_final     EX_max       EH_final     slope\n";
          for (const auto &row : rep.rows)
          {
            char buf[200];
            std::snprintf(buf, sizeof buf, "  %-6d %-12.4e %-7d %-7d %-6d %-12.4e %-12.4e %-12.4e %s\n", row.level,
                          row.h, row.n_q, row.n_p, row.n_b, row.EX_final, row.EX_max, row.EH_final,
                          std::isnan(row.slope_so_far) ? "-" : fixed(row.slope_so_far, 2).c_str());
            out << buf;
          }
          out << "  EX rate " << rep.ex_rate.label() << " (max over time " << rep.ex_max_rate.label()
              << "), EH rate " << (sc.exact_H ? rep.eh_rate.label() : std::string("n/a")) << ", fitted on levels";
          for (int n : rep.fit_levels)
          {
            out << " " << n;
          }
          out << "\n";
          for (const auto &w : rep.warnings)
          {
            out << "  warning: " << w << "\n";
          }
          out << "  wrote " << (fs::path(cfg.output) / file).string() << "\n";
          ex_cells.push_back({qn[j], pn[i], rep.ex_rate.label()});
          eh_cells.push_back({qn[j], pn[i], sc.exact_H ? rep.eh_rate.label() : "n/a"});
        }
      }
      const std::string corner = ElementFamily::parse(b).name();
      out << "\nEX rates (rows p, columns q)\n";
      print_rate_table(out, corner, qn, pn, ex_cells);
      out << "\nEH rates (rows p, columns q)\n";
      print_rate_table(out, corner, qn, pn, eh_cells);
    }
    return kExitOk;
  });
}

int cmd_matrices(const RunConfig &cfg, std::ostream &out, std::ostream &err)
{
  return guarded(err, [&] {
    const Scenario sc = scenario_by_name(cfg.scenario);
    const SimulationSpec spec = make_spec(cfg, sc);
    const Level L = build_level(sc, spec.disc, spec.causality, spec.level, spec.quadrature_degree);
    const PHSystem &sys = *L.system;
    const bool neumann = sys.causality == Causality::Neumann;

    const std::vector<std::pair<std::string, const SparseMatrix *>> dumps = {
        {"M_q.txt", &sys.M_q},
        {"M_p.txt", &sys.M_p},
        {"M_boundary.txt", &sys.M_b},
        {neumann ? "D.txt" : "D_tilde.txt", &sys.coupling},
        {neumann ? "B.txt" : "B_tilde.txt", &sys.input},
    };
    for (const auto &[name, m] : dumps)
    {
      std::ofstream os = open_output(cfg, name);
      write_matrix(os, *m);
    }

    std::ostringstream rep;
    rep << "system: " << spec.disc.label() << ", " << to_string(sys.causality) << " causality, level "
        << spec.level << "\n";
    rep << "dofs: N_q " << sys.n_q() << ", N_p " << sys.n_p() << ", N_boundary " << sys.n_b() << "\n";
    rep << "quadrature degree: " << sys.quadrature_degree << "\n";
    rep << "spd M_q: " << (spd(sys.M_q) ? "ok" : "FAILED") << "\n";
    rep << "spd M_p: " << (spd(sys.M_p) ? "ok" : "FAILED") << "\n";
    rep << "spd M_boundary: " << (spd(sys.M_b) ? "ok" : "FAILED") << "\n";
    const SparseMatrix A = sys.extended_structure();
    const SparseMatrix At = A.transpose();
    rep << "skew: " << format_compact(max_abs(A + At)) << "\n";
    if (L.q->element().family().is_hdiv() && !L.p->element().family().is_hdiv() &&
        L.p->conformity() == Conformity::H1)
    {
      const SparseMatrix D = assemble_D(*L.q, *L.p, sys.quadrature_degree);
      const DirichletBlocks blk = assemble_dirichlet_blocks(*L.q, *L.p, *L.boundary, sys.quadrature_degree);
      const SparseMatrix G = assemble_boundary_pairing(*L.q, *L.p, sys.quadrature_degree);
      const SparseMatrix R = D - blk.D_tilde - G;
      rep << "green identity: " << format_compact(max_abs(R)) << "\n";
    }
    else
    {
      rep << "green identity: n/a (needs an H(div) q-space and an H1 p-space)\n";
    }
    print_warnings(rep, sys.warnings);
    {
      std::ofstream os = open_output(cfg, "report.txt");
      os << rep.str();
    }
    out << rep.str();
    out << "wrote matrices and report.txt to " << cfg.output << "\n";
    return kExitOk;
  });
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Port-Hamiltonian mixed finite element simulator for the 2D wave equation"};
  app.name("pfem");
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "flat key = value configuration file; command-line flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);

  RunConfig cfg;
  app.add_option("--scenario", cfg.scenario, "scenario: square, lshape, aniso, damped-disk");
  app.add_option("--causality", cfg.causality, "neumann or dirichlet (default: scenario choice)");
  app.add_option("--q", cfg.q, "q families, comma separated (e.g. CG1,RT2,BDM1,DG0)")->delimiter(',');
  app.add_option("--p", cfg.p, "p families, comma separated (e.g. CG1,CG2,DG1)")->delimiter(',');
  app.add_option("--boundary", cfg.boundary, "boundary families, comma separated (e.g. DG0,DG1,CG1)")
      ->delimiter(',');
  app.add_option("--levels", cfg.levels, "mesh levels n, comma separated (default: scenario levels)")
      ->delimiter(',');
  app.add_option("--dt", cfg.dt, "time step (0: scenario default)")->check(CLI::NonNegativeNumber);
  app.add_option("--horizon", cfg.horizon, "final time (0: scenario default)")->check(CLI::NonNegativeNumber);
  app.add_option("--quadrature-degree", cfg.quadrature_degree, "assembly quadrature degree (0: automatic)")
      ->check(CLI::Range(0, 12));
  app.add_option("--input-rule", cfg.input_rule, "input sampling: midpoint or trapezoidal");
  app.add_option("--backend", cfg.backend, "linear solver: sparse-lu or dense-lu");
  app.add_option("--workers", cfg.workers, "levels solved concurrently in a sweep")->check(CLI::PositiveNumber);
  app.add_option("--fit-points", cfg.fit_points, "finest levels used in the rate fit")->check(CLI::Range(3, 64));
  app.add_flag("--closed", cfg.closed, "zero boundary input");
  app.add_option("--output", cfg.output, "output directory");

  auto *simulate = app.add_subcommand("simulate", "run one level; writes energy.csv (and errors.csv)");
  auto *converge = app.add_subcommand("converge", "refinement sweep; writes convergence.csv and rate tables");
  auto *matrices = app.add_subcommand("matrices", "dump the assembled matrices with an invariant report");
  for (auto *sub : {simulate, converge, matrices})
  {
    sub->fallthrough();
  }

  std::vector<const char *> args(argv, argv + argc);
  try
  {
    app.parse(argc, const_cast<char **>(args.data()));
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (simulate->parsed())
  {
    return cmd_simulate(cfg, out, err);
  }
  if (converge->parsed())
  {
    return cmd_converge(cfg, out, err);
  }
  return cmd_matrices(cfg, out, err);
}

}  // namespace pfem
