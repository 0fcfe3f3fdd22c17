#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qgfilter/cli.hpp"

int main(int argc, char** argv) {
  using qgfilter::cli::RunConfig;
  RunConfig cfg;
  CLI::App app{"Transmission of quantum-graph spectral filters"};
  app.require_subcommand(1);

  double b_min = 0.0;
  double b_max = 0.0;
  double k = 0.0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--graph", cfg.graph, "graph description (JSON)")->required();
    sub->add_option("--output", cfg.output, "CSV output path (default: stdout)");
    sub->add_option("--rank-tol", cfg.tol.rank, "relative singular value cutoff");
    sub->add_option("--root-tol", cfg.tol.root, "root bracket width");
    sub->add_option("--pole-guard", cfg.tol.pole_guard, "|sin kl| below which limits are used");
    sub->add_flag("--quiet", cfg.quiet, "suppress warnings");
  };
  auto k_range = [&](CLI::App* sub) {
    sub->add_option("--k-min", cfg.k_min, "lower wavenumber");
    sub->add_option("--k-max", cfg.k_max, "upper wavenumber");
    sub->add_option("--samples", cfg.samples, "grid points (>= 2)");
  };

  auto* sweep_k = app.add_subcommand("sweep-k", "R, T and P over a wavenumber grid");
  common(sweep_k);
  k_range(sweep_k);

  auto* sweep_b = app.add_subcommand("sweep-b", "loop transmission over a field grid");
  common(sweep_b);
  k_range(sweep_b);
  auto* b_min_opt = sweep_b->add_option("--b-min", b_min, "lower field");
  auto* b_max_opt = sweep_b->add_option("--b-max", b_max, "upper field");
  auto* k_b_opt = sweep_b->add_option("--k", k, "fixed wavenumber");

  auto* spectrum = app.add_subcommand("spectrum", "zeros of the Dirichlet-to-Neumann function");
  common(spectrum);
  k_range(spectrum);

  auto* converge = app.add_subcommand("converge", "delta-approximation convergence table");
  common(converge);
  k_range(converge);
  auto* k_c_opt = converge->add_option("--k", k, "fixed wavenumber");
  converge->add_option("--epsilons", cfg.epsilons, "decreasing list, comma separated")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qgfilter::cli::InputFailure;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (*b_min_opt) cfg.b_min = b_min;
  if (*b_max_opt) cfg.b_max = b_max;
  if (*k_b_opt || *k_c_opt) cfg.k = k;
  return qgfilter::cli::run(cfg, std::cout, std::cerr);
}
