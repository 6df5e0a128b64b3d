#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ksspec {

enum class Command { eigen_table, match, profiles, perturb, coercivity, validate };
enum class Format { csv, json };

Command parse_command(const std::string& s);
const char* to_string(Command c);
Format parse_format(const std::string& s);

struct RunConfig {
  Command command = Command::eigen_table;
  double beta = 0.5;
  std::vector<double> nu_list{1e-3};  // sorted descending, each in (0, 0.1]
  int n_max = 2;
  double zeta0 = 0.1;
  std::size_t grid_points = 0;  // 0: module defaults
  std::string output_path;      // empty: stdout
  std::uint64_t seed = 42;
  Format format = Format::csv;
  bool format_given = false;  // otherwise csv for eigen-table/profiles, json for the rest
  int harmonics = 4;          // coercivity
  int trials = 100;           // coercivity
  double nu_tilde_factor = 0.0;  // perturb: nu_tilde = nu (1 + factor / |ln nu|), 0 means factor 1

  // Sorts nu_list and checks every field; throws Error(Config).
  void validate();
  Format effective_format() const;
};

// "a:b:count", log-spaced from a to b inclusive.
std::vector<double> parse_nu_grid(const std::string& spec);
// Comma separated list of reals.
std::vector<double> parse_real_list(const std::string& spec);

// key = value lines, '#' comments. Keys: command, beta, nu, nu_grid, n_max, zeta0, grid_points,
// output, seed, format, harmonics, trials, nu_tilde_factor. Unknown keys are a config error.
void apply_config_file(RunConfig& cfg, const std::string& path);
void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin = "<text>");

// 17 significant digits, '.' decimal, independent of the global locale.
std::string format_real(double x);

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitInvariant = 3;

// Runs one command; the report goes to cfg.output_path (or `out`), progress and errors to `log`.
// Numerical failures also write <output>.diagnostic.txt (or ksspec-diagnostic.txt).
int run(RunConfig cfg, std::ostream& out, std::ostream& log);

// The report body without writing anything (used by run and the tests); throws ksspec::Error.
std::string render_report(const RunConfig& cfg, std::ostream& log);

}  // namespace ksspec
