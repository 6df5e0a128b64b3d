// Batch driver: ksspec <command> [flags]
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ksspec/cli_io.hpp"
#include "ksspec/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral computations for the linearised radial and non-radial operators"};
  std::string command, config, nu, nu_grid, format, output;
  double beta = 0.0, zeta0 = 0.0;
  int n_max = 0;
  std::size_t grid_points = 0;
  std::uint64_t seed = 0;
  int harmonics = 0, trials = 0;
  app.add_option("command", command, "eigen-table | match | profiles | perturb | coercivity | validate")->required();
  auto* o_config = app.add_option("--config", config, "key = value file, flags override it");
  auto* o_beta = app.add_option("--beta", beta, "Gaussian rate beta");
  auto* o_nu = app.add_option("--nu", nu, "nu value(s), comma separated");
  auto* o_grid = app.add_option("--nu-grid", nu_grid, "log-spaced nu values a:b:count");
  auto* o_nmax = app.add_option("--n-max", n_max, "highest mode index");
  auto* o_zeta0 = app.add_option("--zeta0", zeta0, "matching interface in zeta");
  auto* o_points = app.add_option("--grid-points", grid_points, "grid nodes (0: defaults)");
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_output = app.add_option("--output", output, "output file (default stdout)");
  auto* o_format = app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* o_harm = app.add_option("--harmonics", harmonics, "coercivity: harmonics 1..K");
  auto* o_trials = app.add_option("--trials", trials, "coercivity: random fields per b");
  o_nu->excludes(o_grid);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ksspec::kExitConfig;
  }

  ksspec::RunConfig cfg;
  try {
    if (*o_config) ksspec::apply_config_file(cfg, config);
    cfg.command = ksspec::parse_command(command);
    if (*o_beta) cfg.beta = beta;
    if (*o_nu) cfg.nu_list = ksspec::parse_real_list(nu);
    if (*o_grid) cfg.nu_list = ksspec::parse_nu_grid(nu_grid);
    if (*o_nmax) cfg.n_max = n_max;
    if (*o_zeta0) cfg.zeta0 = zeta0;
    if (*o_points) cfg.grid_points = grid_points;
    if (*o_seed) cfg.seed = seed;
    if (*o_output) cfg.output_path = output;
    if (*o_format) {
      cfg.format = ksspec::parse_format(format);
      cfg.format_given = true;
    }
    if (*o_harm) cfg.harmonics = harmonics;
    if (*o_trials) cfg.trials = trials;
  } catch (const ksspec::Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return ksspec::kExitConfig;
  }
  return ksspec::run(cfg, std::cout, std::cerr);
}
