#include "beg/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "beg/experiments.hpp"
#include "beg/results_io.hpp"
#include "beg/rng.hpp"
#include "beg/theory.hpp"

namespace beg::cli {
namespace {

/// Raised for flag values that parse but make no sense together.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double parse_real(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path);
}

void print_summary(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << std::left << std::setw(8) << "N" << std::setw(8) << "gamma" << std::setw(15) << "alpha" << std::setw(10)
      << "M" << std::setw(10) << "unstable" << std::setw(22) << "95% CI" << std::setw(9) << "zero_on" << std::setw(9)
      << "erase" << "flip\n";
  for (const auto& r : rows) {
    std::ostringstream ci;
    ci << '[' << std::fixed << std::setprecision(3) << r.ci_lo << ", " << r.ci_hi << ']';
    out << std::left << std::setw(8) << r.n << std::setw(8) << format_real(r.gamma) << std::setw(15)
        << format_real(r.alpha) << std::setw(10) << r.m << std::fixed << std::setprecision(3) << std::setw(10)
        << r.unstable_fraction << std::setw(22) << ci.str() << std::setw(9) << r.zero_on_fraction << std::setw(9)
        << r.erase_fraction << r.flip_fraction << '\n';
    out.unsetf(std::ios::floatfield);
  }
}

/// Flags shared by every simulation subcommand.
struct SimulationFlags {
  std::string variant = "thresholded";
  std::string n_spec;
  std::string gamma_spec = "1.5";
  int trials = 200;
  int patterns_per_set = 1;
  std::uint64_t seed = 1;
  int threads = default_threads();
  bool timing = false;
  std::uint64_t max_cells = GenerationLimits{}.max_cells;

  void attach(CLI::App& app) {
    app.add_option("--variant", variant, "Dynamics: original or thresholded")
        ->check(CLI::IsMember({"original", "thresholded"}))
        ->capture_default_str();
    app.add_option("--N", n_spec, "Neuron counts: comma list or lo:hi:step")->required();
    app.add_option("--gamma", gamma_spec, "Threshold coefficients: comma list or lo:hi:step (ignored by original)")
        ->capture_default_str();
    app.add_option("--trials", trials, "Pattern sets per cell")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--patterns-per-set", patterns_per_set, "Stored patterns tested per set")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", seed, "Master seed")->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--timing", timing, "Record wall_seconds (otherwise written as 0 for byte-stable output)");
    app.add_option("--max-cells", max_cells, "Budget on M*N per pattern set")->capture_default_str();
  }

  ExperimentConfig config() const {
    ExperimentConfig cfg;
    cfg.variant = parse_variant(variant);
    cfg.n_list = parse_int_grid(n_spec);
    cfg.gamma_list = parse_real_grid(gamma_spec);
    cfg.trials = trials;
    cfg.patterns_per_set = patterns_per_set;
    cfg.master_seed = seed;
    cfg.threads = threads;
    cfg.record_timing = timing;
    cfg.max_cells = max_cells;
    return cfg;
  }
};

int cmd_theory(const std::string& gamma_spec, const std::string& out_path, std::ostream& out) {
  const auto grid = parse_real_grid(gamma_spec);
  std::vector<theory::TheoryPoint> points;
  for (double g : grid) {
    if (!(g > 0.0 && g <= 2.0 + 1e-12))
      throw UsageError("gamma " + format_real(g) + " outside the admissible range (0, 2]");
    points.push_back(theory::theory_point(std::min(g, 2.0)));
  }
  std::ostringstream csv;
  write_theory_csv(csv, points);
  write_text(out_path, csv.str(), out);
  return kSuccess;
}

int cmd_simulate(const SimulationFlags& flags, const std::string& alpha_spec, const std::string& csv_path,
                 const std::string& manifest_path, std::ostream& out) {
  auto cfg = flags.config();
  cfg.alpha_list = parse_real_grid(alpha_spec);
  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto rows = run_grid(cfg);
  emit_results(rows, csv_path, manifest_path, make_manifest(cfg, "simulate"));
  print_summary(out, rows);
  return kSuccess;
}

int cmd_scan(const SimulationFlags& flags, double rel_lo, double rel_hi, int points, const std::string& csv_path,
             const std::string& manifest_path, std::ostream& out) {
  auto cfg = flags.config();
  if (cfg.variant != Variant::thresholded) throw UsageError("scan sweeps loads relative to alpha*(gamma); use --variant thresholded");
  if (!(rel_lo > 0.0) || !(rel_hi > rel_lo) || points < 2) throw UsageError("scan needs 0 < rel-lo < rel-hi and points >= 2");
  for (double g : cfg.gamma_list)
    if (!(g > 0.0 && g <= 2.0)) throw UsageError("scan needs every gamma in (0, 2]");
  std::vector<double> rel(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    rel[static_cast<std::size_t>(i)] = rel_lo * std::pow(rel_hi / rel_lo, static_cast<double>(i) / (points - 1));

  auto ns = cfg.n_list;
  auto gammas = cfg.gamma_list;
  std::sort(ns.begin(), ns.end());
  std::sort(gammas.begin(), gammas.end());
  for (double g : gammas)
    for (double r : rel) cfg.alpha_list.push_back(r * theory::alpha_star(g));
  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const auto opts = cfg.run_options();
  std::vector<ResultRow> rows;
  std::uint64_t cell = 0;
  for (auto n : ns)
    for (double g : gammas)
      for (double r : rel)
        rows.push_back(run_cell({cfg.variant, n, g, r * theory::alpha_star(g)}, opts, derive_seed(cfg.master_seed, cell++)));

  auto manifest = make_manifest(cfg, "scan");
  manifest["scan"] = {{"rel_lo", rel_lo}, {"rel_hi", rel_hi}, {"points", points}};
  emit_results(rows, csv_path, manifest_path, manifest);
  print_summary(out, rows);
  return kSuccess;
}

int cmd_critical(const SimulationFlags& flags, const BisectionSpec& spec, const std::string& csv_path,
                 const std::string& summary_path, const std::string& manifest_path, std::ostream& out,
                 std::ostream& err) {
  auto cfg = flags.config();
  cfg.bisection = spec;
  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto outcomes = run_critical(cfg);

  std::vector<ResultRow> rows;
  nlohmann::json summary = nlohmann::json::array();
  bool failed = false;
  for (const auto& o : outcomes) {
    rows.insert(rows.end(), o.rows.begin(), o.rows.end());
    nlohmann::json entry = {{"gamma", o.gamma}, {"N", o.n}, {"alpha_hat", nullptr}, {"rows", csv_path}};
    if (o.alpha_hat) {
      entry["alpha_hat"] = *o.alpha_hat;
      out << "N=" << o.n << " gamma=" << format_real(o.gamma) << " alpha_hat=" << format_real(*o.alpha_hat) << '\n';
    } else {
      entry["error"] = o.error;
      err << "N=" << o.n << " gamma=" << format_real(o.gamma) << ": " << o.error << '\n';
      failed = true;
    }
    summary.push_back(std::move(entry));
  }
  emit_results(rows, csv_path, manifest_path, make_manifest(cfg, "critical"));
  write_text(summary_path, summary.dump(2) + "\n", out);
  return failed ? kRuntimeError : kSuccess;
}

}  // namespace

std::vector<double> parse_real_grid(const std::string& spec) {
  if (spec.empty()) throw std::invalid_argument("empty grid");
  std::vector<double> values;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw std::invalid_argument("range must be lo:hi:step, got '" + spec + "'");
    const double lo = parse_real(parts[0]);
    const double hi = parse_real(parts[1]);
    const double step = parse_real(parts[2]);
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("range needs lo <= hi and step > 0");
    // Count first, then lo + i*step, so no error accumulates along the grid.
    const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 1'000'000) throw std::invalid_argument("range has too many points");
    for (std::int64_t i = 0; i < count; ++i) values.push_back(lo + static_cast<double>(i) * step);
    return values;
  }
  for (const auto& part : split(spec, ',')) values.push_back(parse_real(part));
  return values;
}

std::vector<std::int64_t> parse_int_grid(const std::string& spec) {
  std::vector<std::int64_t> out;
  for (double v : parse_real_grid(spec)) {
    if (v != std::floor(v) || std::abs(v) > 9e15) throw std::invalid_argument("not an integer: " + format_real(v));
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse Blume-Emery-Griffiths associative memory: capacity theory and Monte Carlo stability"};
  app.name("beg");
  app.require_subcommand(1);

  std::string theory_gamma = "0.1:2.0:0.1";
  std::string theory_out = "-";
  auto* theory_cmd = app.add_subcommand("theory", "Tabulate x_hat, x* and alpha*(gamma)");
  theory_cmd->add_option("--gamma", theory_gamma, "Gamma grid in (0, 2]: lo:hi:step or comma list")->capture_default_str();
  theory_cmd->add_option("--out", theory_out, "Output CSV path ('-' for stdout)")->capture_default_str();

  SimulationFlags sim_flags;
  std::string sim_alpha;
  std::string sim_out = "results.csv";
  std::string sim_manifest = "results.manifest.json";
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo stability over an N x gamma x alpha grid");
  sim_flags.attach(*sim_cmd);
  sim_cmd->add_option("--alpha", sim_alpha, "Loads: comma list or lo:hi:step")->required();
  sim_cmd->add_option("--out", sim_out, "Results CSV path")->capture_default_str();
  sim_cmd->add_option("--manifest", sim_manifest, "JSON manifest path")->capture_default_str();

  SimulationFlags scan_flags;
  double rel_lo = 0.1;
  double rel_hi = 10.0;
  int points = 8;
  std::string scan_out = "scan.csv";
  std::string scan_manifest = "scan.manifest.json";
  auto* scan_cmd = app.add_subcommand("scan", "Log-spaced load sweep around alpha*(gamma) for each (N, gamma)");
  scan_flags.attach(*scan_cmd);
  scan_cmd->add_option("--rel-lo", rel_lo, "Lowest load as a multiple of alpha*(gamma)")->capture_default_str();
  scan_cmd->add_option("--rel-hi", rel_hi, "Highest load as a multiple of alpha*(gamma)")->capture_default_str();
  scan_cmd->add_option("--points", points, "Number of loads (log-spaced)")->capture_default_str();
  scan_cmd->add_option("--out", scan_out, "Results CSV path")->capture_default_str();
  scan_cmd->add_option("--manifest", scan_manifest, "JSON manifest path")->capture_default_str();

  SimulationFlags crit_flags;
  BisectionSpec bisection;
  std::string crit_out = "critical_rows.csv";
  std::string crit_summary = "critical.json";
  std::string crit_manifest = "critical.manifest.json";
  auto* crit_cmd = app.add_subcommand("critical", "Bisection estimate of the empirical critical load per (N, gamma)");
  crit_flags.attach(*crit_cmd);
  crit_cmd->add_option("--lo", bisection.lo, "Lower load bracket")->required();
  crit_cmd->add_option("--hi", bisection.hi, "Upper load bracket")->required();
  crit_cmd->add_option("--target", bisection.target_fraction, "Unstable fraction defining the crossing")
      ->capture_default_str();
  crit_cmd->add_option("--max-iters", bisection.max_iters, "Bisection steps")->capture_default_str();
  crit_cmd->add_option("--out", crit_out, "Audit rows CSV path")->capture_default_str();
  crit_cmd->add_option("--summary", crit_summary, "Summary JSON path ('-' for stdout)")->capture_default_str();
  crit_cmd->add_option("--manifest", crit_manifest, "JSON manifest path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*theory_cmd) return cmd_theory(theory_gamma, theory_out, out);
    if (*sim_cmd) return cmd_simulate(sim_flags, sim_alpha, sim_out, sim_manifest, out);
    if (*scan_cmd) return cmd_scan(scan_flags, rel_lo, rel_hi, points, scan_out, scan_manifest, out);
    if (*crit_cmd) return cmd_critical(crit_flags, bisection, crit_out, crit_summary, crit_manifest, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace beg::cli
