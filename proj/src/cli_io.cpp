#include "ksspec/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ksspec/direct_spectrum.hpp"
#include "ksspec/error.hpp"
#include "ksspec/matching.hpp"
#include "ksspec/nonradial.hpp"
#include "ksspec/perturbation.hpp"
#include "ksspec/validation.hpp"

namespace ksspec {

using nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_real(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    fail(ErrorKind::Config, what + ": not a real number: '" + s + "'");
  return v;
}

long long parse_integer(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  long long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    fail(ErrorKind::Config, what + ": not an integer: '" + s + "'");
  return v;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Results in input order; at most hardware_concurrency tasks in flight.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
  const std::size_t width = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t start = 0; start < n; start += width) {
    std::vector<std::future<T>> batch;
    for (std::size_t i = start; i < std::min(n, start + width); ++i)
      batch.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async, f, i));
    for (auto& fut : batch) out.push_back(fut.get());
  }
  return out;
}

// A flat table that renders to CSV or to a JSON array of row objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string csv(const std::string& header) const {
    std::ostringstream os;
    os << "# " << header << '\n';
    for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << columns[j];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << format_real(r[j]);
      os << '\n';
    }
    return os.str();
  }
  ordered_json json() const {
    ordered_json a = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json o;
      for (std::size_t j = 0; j < r.size(); ++j) o[columns[j]] = std::isfinite(r[j]) ? ordered_json(r[j]) : ordered_json();
      a.push_back(o);
    }
    return a;
  }
};

ordered_json num(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(); }

SpectrumOptions spectrum_options(const RunConfig& c) {
  SpectrumOptions o;
  o.nodes = c.grid_points;
  return o;
}

struct Rendered {
  Table table;
  ordered_json json;  // null: use the table
};

Rendered eigen_table(const RunConfig& c, std::ostream& log) {
  Rendered out;
  out.table.columns = {"beta", "nu", "b", "n", "lambda_direct", "alpha_direct", "alpha_matched", "alpha_pred_o1",
                       "alpha_pred_o2", "scaled_residual_o1", "scaled_residual_o2", "scaled_matched_vs_direct"};
  const auto per_nu = parallel_map<std::vector<std::vector<double>>>(c.nu_list.size(), [&](std::size_t k) {
    const double nu = c.nu_list[k];
    const Parameters p = Parameters::make(c.beta, nu, c.zeta0, c.n_max);
    const double L = std::abs(std::log(p.b));
    const auto d = direct_spectrum(p, c.n_max + 1, spectrum_options(c));
    std::vector<std::vector<double>> rows;
    for (int n = 0; n <= c.n_max; ++n) {
      const double ad = d.eigenvalues[n];
      double am = kNaN;
      if (p.b <= 1e-4) am = solve_eigenvalue(p, n).alpha;
      const double o1 = predicted_eigenvalue(p, n, 1), o2 = predicted_eigenvalue(p, n, 2);
      rows.push_back({c.beta, nu, p.b, double(n), ad / (nu * nu), ad, am, o1, o2, std::abs(ad - o1) * L * L / (2.0 * p.b),
                      std::abs(ad - o2) * L * L * L / (2.0 * p.b), std::abs(am - ad) * L * L / (2.0 * p.b)});
    }
    return rows;
  });
  for (std::size_t k = 0; k < per_nu.size(); ++k) {
    if (Parameters::make(c.beta, c.nu_list[k]).b > 1e-4)
      log << "note: nu = " << c.nu_list[k] << " gives b above 1e-4, matched column left empty\n";
    for (const auto& r : per_nu[k]) out.table.rows.push_back(r);
  }
  return out;
}

Rendered match(const RunConfig& c, std::ostream&) {
  Rendered out;
  out.table.columns = {"beta", "nu", "b", "n", "alpha_bar", "alpha_tilde", "alpha", "lambda", "theta", "beta0",
                       "mismatch_at_root", "b_dalpha_tilde", "bracket_widenings", "derivative_jump", "sign_changes"};
  const auto per_nu = parallel_map<std::vector<MatchedEigenpair>>(c.nu_list.size(), [&](std::size_t k) {
    const Parameters p = Parameters::make(c.beta, c.nu_list[k], c.zeta0, c.n_max);
    std::vector<MatchedEigenpair> v;
    for (int n = 0; n <= c.n_max; ++n) v.push_back(solve_eigenvalue(p, n));
    return v;
  });
  ordered_json runs = ordered_json::array();
  for (const auto& modes : per_nu) {
    const Parameters& p = modes.front().params;
    ordered_json run;
    run["beta"] = p.beta;
    run["nu"] = p.nu;
    run["b"] = p.b;
    run["zeta0"] = p.zeta0;
    run["R0"] = p.R0;
    run["z0"] = p.z0;
    ordered_json arr = ordered_json::array();
    for (const auto& e : modes) {
      const int zc = sign_changes(e.glued.phi.values);
      ordered_json m;
      m["n"] = e.n;
      m["alpha_bar"] = num(e.alpha_bar);
      m["alpha_tilde"] = num(e.alpha_tilde);
      m["alpha"] = num(e.alpha);
      m["lambda"] = num(e.lambda);
      m["theta"] = num(e.theta);
      m["beta0"] = num(e.beta0);
      m["mismatch_at_root"] = num(e.mismatch_at_root);
      m["b_dalpha_tilde"] = num(e.b_dalpha_tilde);
      m["bracket_widenings"] = e.bracket_widenings;
      m["derivative_jump"] = num(e.glued.derivative_jump);
      m["sign_changes"] = zc;
      arr.push_back(m);
      out.table.rows.push_back({p.beta, p.nu, p.b, double(e.n), e.alpha_bar, e.alpha_tilde, e.alpha, e.lambda, e.theta,
                                e.beta0, e.mismatch_at_root, e.b_dalpha_tilde, double(e.bracket_widenings),
                                e.glued.derivative_jump, double(zc)});
    }
    run["modes"] = arr;
    runs.push_back(run);
  }
  out.json = {{"command", "match"}, {"runs", runs}};
  return out;
}

// Direct eigenfunctions (construction normalisation), glued matched ones where available, and T_j.
Rendered profiles(const RunConfig& c, std::ostream& log) {
  Rendered out;
  const double nu = c.nu_list.front();
  if (c.nu_list.size() > 1) log << "note: profiles uses the first nu only (" << nu << ")\n";
  const Parameters p = Parameters::make(c.beta, nu, c.zeta0, c.n_max);
  const SturmOperator op = assemble_ground_state(p, spectrum_grid(p, spectrum_options(c)));
  SpectrumResult res = solve_spectrum(op, c.n_max + 1);
  construction_normalize(op, res);
  std::vector<MatchedEigenpair> matched;
  if (p.b <= 1e-4)
    for (int n = 0; n <= c.n_max; ++n) matched.push_back(solve_eigenvalue(p, n));
  const KernelTable& table = default_kernel_table();
  out.table.columns = {"r", "zeta"};
  for (int n = 0; n <= c.n_max; ++n) out.table.columns.push_back("phi_direct_" + std::to_string(n));
  for (int n = 0; n <= c.n_max; ++n) out.table.columns.push_back("phi_matched_" + std::to_string(n));
  for (int j = 0; j <= table.j_max; ++j) out.table.columns.push_back("T_" + std::to_string(j));
  const auto& r = res.eigenvectors.front().nodes();
  const double tmin = table.grid->front(), tmax = table.grid->back();
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double x = r[i];
    std::vector<double> row{x, nu * x};
    for (int n = 0; n <= c.n_max; ++n) row.push_back(res.eigenvectors[n][i]);
    for (int n = 0; n <= c.n_max; ++n) {
      double v = kNaN;
      if (!matched.empty()) {
        const auto& g = matched[n].glued.phi;
        if (x >= g.nodes().front() && x <= g.nodes().back()) v = g.at(x);
      }
      row.push_back(v);
    }
    row.push_back(stationary_profiles(x).psi0);  // T_0 = psi0
    for (int j = 1; j <= table.j_max; ++j) row.push_back(x >= tmin && x <= tmax ? table.T[j].at(x) : kNaN);
    out.table.rows.push_back(std::move(row));
  }
  return out;
}

Rendered perturb(const RunConfig& c, std::ostream&) {
  Rendered out;
  out.table.columns = {"beta", "nu", "nu_tilde", "n", "lambda", "lambda_bar", "scaled_eigenvalue",
                       "eigenfunction_distance", "scaled_eigenfunction"};
  const double factor = c.nu_tilde_factor == 0.0 ? 1.0 : c.nu_tilde_factor;
  const int N = std::min(c.n_max, 4);
  struct Item {
    PerturbationSpec spec;
    StabilityReport rep;
  };
  const auto items = parallel_map<Item>(c.nu_list.size(), [&](std::size_t k) {
    const double nu = c.nu_list[k];
    const Parameters p = Parameters::make(c.beta, nu, c.zeta0, c.n_max);
    auto spec = default_potential(nu, nu * (1.0 + factor / std::abs(std::log(nu))), c.beta);
    auto rep = stability_report(p, spec, N, spectrum_options(c));
    return Item{std::move(spec), std::move(rep)};
  });
  ordered_json runs = ordered_json::array();
  for (const auto& it : items) {
    const auto& s = it.spec;
    const auto& r = it.rep;
    ordered_json j;
    j["beta"] = s.beta;
    j["nu"] = s.nu;
    j["nu_tilde"] = s.nu_tilde;
    j["admissibility_M"] = num(s.admissibility_M);
    j["admissibility_M_P"] = num(s.admissibility_M_P);
    j["min_gap_bar"] = num(r.min_gap_bar);
    j["max_asymmetry"] = num(r.max_asymmetry);
    ordered_json modes = ordered_json::array();
    for (int n = 0; n <= N; ++n) {
      modes.push_back({{"n", n},
                       {"lambda", num(r.lambda[n])},
                       {"lambda_bar", num(r.lambda_bar[n])},
                       {"scaled_eigenvalue", num(r.scaled_eigenvalue[n])},
                       {"eigenfunction_distance", num(r.eigenfunction_distance[n])},
                       {"scaled_eigenfunction", num(r.scaled_eigenfunction[n])}});
      out.table.rows.push_back({s.beta, s.nu, s.nu_tilde, double(n), r.lambda[n], r.lambda_bar[n], r.scaled_eigenvalue[n],
                                r.eigenfunction_distance[n], r.scaled_eigenfunction[n]});
    }
    j["modes"] = modes;
    runs.push_back(j);
  }
  out.json = {{"command", "perturb"}, {"runs", runs}};
  return out;
}

Rendered coercivity(const RunConfig& c, std::ostream& log) {
  Rendered out;
  out.table.columns = {"b", "K", "trials", "seed", "min_quotient", "mean_quotient", "max_quotient", "argmin",
                       "max_G_constant", "max_G_literal_constant", "min_inner_ratio", "max_identity_mismatch"};
  for (int k = 1; k <= c.harmonics; ++k) out.table.columns.push_back("min_quotient_K" + std::to_string(k));
  const auto reps = parallel_map<CoercivityReport>(c.nu_list.size(), [&](std::size_t k) {
    const double b = c.beta * c.nu_list[k] * c.nu_list[k];
    return c.grid_points ? coercivity_scan(b, c.harmonics, c.trials, c.seed, c.grid_points)
                         : coercivity_scan(b, c.harmonics, c.trials, c.seed);
  });
  ordered_json runs = ordered_json::array();
  for (const auto& r : reps) {
    log << "coercivity b = " << r.b << ": " << r.seconds << " s\n";
    ordered_json j;
    j["b"] = r.b;
    j["K"] = r.K;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["min_quotient"] = num(r.min_quotient);
    j["mean_quotient"] = num(r.mean_quotient);
    j["max_quotient"] = num(r.max_quotient);
    j["argmin"] = r.argmin;
    j["min_quotient_by_K"] = r.min_quotient_by_K;
    j["max_G_constant"] = num(r.max_G_constant);
    j["max_G_literal_constant"] = num(r.max_G_literal_constant);
    j["min_inner_ratio"] = num(r.min_inner_ratio);
    j["max_identity_mismatch"] = num(r.max_identity_mismatch);
    runs.push_back(j);
    std::vector<double> row{r.b,
                            double(r.K),
                            double(r.trials),
                            double(r.seed),
                            r.min_quotient,
                            r.mean_quotient,
                            r.max_quotient,
                            double(r.argmin),
                            r.max_G_constant,
                            r.max_G_literal_constant,
                            r.min_inner_ratio,
                            r.max_identity_mismatch};
    for (double q : r.min_quotient_by_K) row.push_back(q);
    out.table.rows.push_back(std::move(row));
  }
  out.json = {{"command", "coercivity"}, {"runs", runs}};
  return out;
}

}  // namespace

Command parse_command(const std::string& s) {
  if (s == "eigen-table") return Command::eigen_table;
  if (s == "match") return Command::match;
  if (s == "profiles") return Command::profiles;
  if (s == "perturb") return Command::perturb;
  if (s == "coercivity") return Command::coercivity;
  if (s == "validate") return Command::validate;
  fail(ErrorKind::Config, "unknown command '" + s + "'");
}

const char* to_string(Command c) {
  switch (c) {
    case Command::eigen_table: return "eigen-table";
    case Command::match: return "match";
    case Command::profiles: return "profiles";
    case Command::perturb: return "perturb";
    case Command::coercivity: return "coercivity";
    case Command::validate: return "validate";
  }
  return "?";
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  fail(ErrorKind::Config, "unknown format '" + s + "' (csv or json)");
}

void RunConfig::validate() {
  if (!(beta > 0.0) || !std::isfinite(beta)) fail(ErrorKind::Config, "beta must be positive");
  if (nu_list.empty()) fail(ErrorKind::Config, "nu list is empty");
  for (double nu : nu_list)
    if (!(nu > 0.0 && nu <= 0.1)) fail(ErrorKind::Config, "every nu must lie in (0, 0.1], got " + format_real(nu));
  std::sort(nu_list.begin(), nu_list.end(), std::greater<>());
  if (n_max < 0 || n_max > 6) fail(ErrorKind::Config, "n_max must lie in [0, 6]");
  if (!(zeta0 > 0.0 && zeta0 < 1.0)) fail(ErrorKind::Config, "zeta0 must lie in (0, 1)");
  if (grid_points != 0 && grid_points < 100) fail(ErrorKind::Config, "grid_points must be 0 or at least 100");
  if (harmonics < 1 || harmonics > 6) fail(ErrorKind::Config, "harmonics must lie in [1, 6]");
  if (trials < 1) fail(ErrorKind::Config, "trials must be positive");
  if (nu_tilde_factor < 0.0 || !std::isfinite(nu_tilde_factor)) fail(ErrorKind::Config, "nu_tilde_factor must be >= 0");
}

Format RunConfig::effective_format() const {
  if (format_given) return format;
  return command == Command::eigen_table || command == Command::profiles ? Format::csv : Format::json;
}

std::vector<double> parse_nu_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) fail(ErrorKind::Config, "nu grid must read a:b:count, got '" + spec + "'");
  const double a = parse_real(parts[0], "nu grid"), b = parse_real(parts[1], "nu grid");
  const long long n = parse_integer(parts[2], "nu grid");
  if (!(a > 0.0 && b > 0.0) || n < 1) fail(ErrorKind::Config, "nu grid needs positive ends and count >= 1");
  if (n == 1 && a != b) fail(ErrorKind::Config, "nu grid with count 1 needs a = b");
  std::vector<double> v(n);
  for (long long i = 0; i < n; ++i)
    v[i] = n == 1 ? a : std::exp(std::log(a) + (std::log(b) - std::log(a)) * double(i) / double(n - 1));
  if (n > 1) {
    v.front() = a;
    v.back() = b;
  }
  return v;
}

std::vector<double> parse_real_list(const std::string& spec) {
  std::vector<double> v;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) v.push_back(parse_real(item, "real list"));
  if (v.empty()) fail(ErrorKind::Config, "empty list");
  return v;
}

void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) fail(ErrorKind::Config, where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key == "command") {
      cfg.command = parse_command(value);
    } else if (key == "beta") {
      cfg.beta = parse_real(value, where);
    } else if (key == "nu") {
      cfg.nu_list = parse_real_list(value);
    } else if (key == "nu_grid") {
      cfg.nu_list = parse_nu_grid(value);
    } else if (key == "n_max") {
      cfg.n_max = static_cast<int>(parse_integer(value, where));
    } else if (key == "zeta0") {
      cfg.zeta0 = parse_real(value, where);
    } else if (key == "grid_points") {
      const long long g = parse_integer(value, where);
      if (g < 0) fail(ErrorKind::Config, where + ": grid_points must be >= 0");
      cfg.grid_points = static_cast<std::size_t>(g);
    } else if (key == "output") {
      cfg.output_path = value;
    } else if (key == "seed") {
      const long long s = parse_integer(value, where);
      if (s < 0) fail(ErrorKind::Config, where + ": seed must be >= 0");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "format") {
      cfg.format = parse_format(value);
      cfg.format_given = true;
    } else if (key == "harmonics") {
      cfg.harmonics = static_cast<int>(parse_integer(value, where));
    } else if (key == "trials") {
      cfg.trials = static_cast<int>(parse_integer(value, where));
    } else if (key == "nu_tilde_factor") {
      cfg.nu_tilde_factor = parse_real(value, where);
    } else {
      fail(ErrorKind::Config, where + ": unknown key '" + key + "'");
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), path);
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string render_report(const RunConfig& cfg, std::ostream& log) {
  Rendered r;
  switch (cfg.command) {
    case Command::eigen_table: r = eigen_table(cfg, log); break;
    case Command::match: r = match(cfg, log); break;
    case Command::profiles: r = profiles(cfg, log); break;
    case Command::perturb: r = perturb(cfg, log); break;
    case Command::coercivity: r = coercivity(cfg, log); break;
    case Command::validate: {
      SuiteOptions o;
      o.seed = cfg.seed;
      o.beta = cfg.beta;
      int failed = 0;
      const auto results = run_invariant_suite(o, [&](const CheckResult& c) {
        log << (c.passed ? "PASS " : "FAIL ") << c.module << ": " << c.name << " = " << c.value
            << (c.lower ? " >= " : " <= ") << c.limit << (c.note.empty() ? "" : "  [" + c.note + "]") << '\n';
      });
      r.table.columns = {"index", "passed", "value", "limit", "lower"};
      ordered_json arr = ordered_json::array();
      for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& c = results[i];
        if (!c.passed) ++failed;
        r.table.rows.push_back({double(i), c.passed ? 1.0 : 0.0, c.value, c.limit, c.lower ? 1.0 : 0.0});
        arr.push_back({{"module", c.module},
                       {"name", c.name},
                       {"passed", c.passed},
                       {"value", num(c.value)},
                       {"limit", c.limit},
                       {"bound", c.lower ? "lower" : "upper"},
                       {"note", c.note}});
      }
      r.json = {{"command", "validate"}, {"failed", failed}, {"checks", arr}};
      // names do not fit the numeric table, they go into the header
      if (cfg.effective_format() == Format::csv) {
        std::ostringstream names;
        for (std::size_t i = 0; i < results.size(); ++i)
          names << "\n# " << i << ": " << results[i].module << ": " << results[i].name;
        const std::string body = r.table.csv("ksspec validate, generated " + utc_timestamp() + names.str());
        if (failed) fail(ErrorKind::Invariant, body);
        return body;
      }
      const std::string body = ordered_json({{"generated", utc_timestamp()}, {"report", r.json}}).dump(2) + "\n";
      if (failed) fail(ErrorKind::Invariant, body);
      return body;
    }
  }
  const std::string header = std::string("ksspec ") + to_string(cfg.command) + ", generated " + utc_timestamp();
  if (cfg.effective_format() == Format::csv) return r.table.csv(header);
  ordered_json body = r.json.is_null() ? ordered_json{{"command", to_string(cfg.command)}, {"rows", r.table.json()}} : r.json;
  return ordered_json({{"generated", header}, {"report", body}}).dump(2) + "\n";
}

namespace {

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Config, "cannot write '" + path + "'");
  f << text;
}

}  // namespace

int run(RunConfig cfg, std::ostream& out, std::ostream& log) {
  try {
    cfg.validate();
    write_text(cfg.output_path, render_report(cfg, log), out);
    return kExitOk;
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::Config:
        log << "configuration error: " << e.what() << '\n';
        return kExitConfig;
      case ErrorKind::Invariant:
        // the report is still written so the failing checks can be inspected
        log << "invariant violation\n";
        try {
          write_text(cfg.output_path, e.what(), out);
        } catch (const Error&) {
        }
        return kExitInvariant;
      case ErrorKind::Domain:
      case ErrorKind::Numerical: {
        const std::string diag = cfg.output_path.empty() ? "ksspec-diagnostic.txt" : cfg.output_path + ".diagnostic.txt";
        std::ofstream f(diag);
        f << "command: " << to_string(cfg.command) << "\nbeta: " << format_real(cfg.beta) << "\nnu:";
        for (double nu : cfg.nu_list) f << ' ' << format_real(nu);
        f << "\nn_max: " << cfg.n_max << "\nzeta0: " << format_real(cfg.zeta0) << "\ngrid_points: " << cfg.grid_points
          << "\nseed: " << cfg.seed << "\nerror: " << e.what() << '\n';
        log << "numerical failure: " << e.what() << " (details in " << diag << ")\n";
        return kExitNumerical;
      }
    }
  } catch (const std::exception& e) {
    log << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitNumerical;
}

}  // namespace ksspec
