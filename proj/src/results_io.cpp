#include "beg/results_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace beg {
namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << content;
  f.flush();
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << format_real(r.gamma) << ',' << format_real(r.alpha) << ',' << r.m << ',' << r.trials << ','
        << r.tested_patterns << ',' << format_real(r.unstable_fraction) << ',' << format_real(r.zero_on_fraction)
        << ',' << format_real(r.erase_fraction) << ',' << format_real(r.flip_fraction) << ','
        << format_real(r.ci_lo) << ',' << format_real(r.ci_hi) << ',' << format_real(r.wall_seconds) << ','
        << r.seed << '\n';
  }
}

void write_theory_csv(std::ostream& out, std::span<const theory::TheoryPoint> points) {
  out << kTheoryHeader << '\n';
  for (const auto& p : points)
    out << format_real(p.gamma) << ',' << format_real(p.x_hat) << ',' << format_real(p.x_star) << ','
        << format_real(p.alpha_star) << '\n';
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["variant"] = to_string(cfg.variant);
  j["N"] = cfg.n_list;
  j["gamma"] = cfg.gamma_list;
  j["alpha"] = cfg.alpha_list;
  if (cfg.bisection) {
    j["bisection"] = {{"lo", cfg.bisection->lo},
                      {"hi", cfg.bisection->hi},
                      {"target_fraction", cfg.bisection->target_fraction},
                      {"max_iters", cfg.bisection->max_iters}};
  } else {
    j["bisection"] = nullptr;
  }
  j["trials"] = cfg.trials;
  j["patterns_per_set"] = cfg.patterns_per_set;
  j["master_seed"] = cfg.master_seed;
  j["threads"] = cfg.threads;
  j["record_timing"] = cfg.record_timing;
  j["max_cells"] = cfg.max_cells;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.variant = parse_variant(j.at("variant").get<std::string>());
  cfg.n_list = j.at("N").get<std::vector<std::int64_t>>();
  cfg.gamma_list = j.at("gamma").get<std::vector<double>>();
  cfg.alpha_list = j.at("alpha").get<std::vector<double>>();
  if (const auto& b = j.at("bisection"); !b.is_null()) {
    cfg.bisection = BisectionSpec{b.at("lo").get<double>(), b.at("hi").get<double>(),
                                  b.at("target_fraction").get<double>(), b.at("max_iters").get<int>()};
  }
  cfg.trials = j.at("trials").get<int>();
  cfg.patterns_per_set = j.at("patterns_per_set").get<int>();
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  cfg.threads = j.at("threads").get<int>();
  cfg.record_timing = j.at("record_timing").get<bool>();
  cfg.max_cells = j.at("max_cells").get<std::uint64_t>();
  return cfg;
}

nlohmann::json make_manifest(const ExperimentConfig& cfg, std::string_view command) {
  return {{"tool", kToolName},
          {"version", kToolVersion},
          {"command", command},
          {"master_seed", cfg.master_seed},
          {"config", config_to_json(cfg)}};
}

void emit_results(std::span<const ResultRow> rows, const std::filesystem::path& csv_path,
                  const std::filesystem::path& manifest_path, const nlohmann::json& manifest) {
  std::ostringstream csv;
  write_results_csv(csv, rows);
  write_file(csv_path, csv.str());
  write_file(manifest_path, manifest.dump(2) + "\n");
}

}  // namespace beg
