#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "beg/results_io.hpp"

using namespace beg;

namespace {

ResultRow sample_row() {
  ResultRow r;
  r.n = 2000;
  r.gamma = 1.5;
  r.alpha = 0.1 / 3.0;
  r.m = sparse_pattern_count(2000, r.alpha);
  r.trials = 200;
  r.tested_patterns = 200;
  r.unstable_fraction = 0.415;
  r.zero_on_fraction = 0.0;
  r.erase_fraction = 0.415;
  r.flip_fraction = 0.0;
  r.ci_lo = 0.348844126;
  r.ci_hi = 0.484;
  r.seed = 18446744073709551615ull;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("results CSV header is exact") {
  std::ostringstream out;
  write_results_csv(out, {});
  CHECK(out.str() ==
        "N,gamma,alpha,M,trials,tested_patterns,unstable_fraction,zero_on_fraction,erase_fraction,flip_fraction,"
        "ci_lo,ci_hi,wall_seconds,seed\n");
}

TEST_CASE("results rows use nine significant digits and LF endings") {
  const ResultRow r = sample_row();
  const std::vector<ResultRow> rows{r, r};
  std::ostringstream a, b;
  write_results_csv(a, rows);
  write_results_csv(b, rows);
  CHECK(a.str() == b.str());
  const std::string expected_line = "2000,1.5,0.0333333333," + std::to_string(r.m) +
                                    ",200,200,0.415,0,0.415,0,0.348844126,0.484,0,18446744073709551615\n";
  CHECK(a.str() == std::string(kResultsHeader) + "\n" + expected_line + expected_line);
  CHECK(a.str().find('\r') == std::string::npos);
}

TEST_CASE("format_real") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(1.0 / 3.0) == "0.333333333");
  CHECK(format_real(123456789012.0) == "1.23456789e+11");
  CHECK(format_real(0.0) == "0");
}

TEST_CASE("theory CSV") {
  std::ostringstream out;
  const std::vector<theory::TheoryPoint> pts{theory::theory_point(1.0), theory::theory_point(2.0)};
  write_theory_csv(out, pts);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == kTheoryHeader);
  std::getline(in, line);
  CHECK(line.rfind("1,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("2,2.71828183,4.92155363,0.51000195", 0) == 0);
}

TEST_CASE("manifest round-trips the config") {
  ExperimentConfig cfg;
  cfg.variant = Variant::thresholded;
  cfg.n_list = {1000, 2000};
  cfg.gamma_list = {1.5, 2.0};
  cfg.alpha_list = {0.1 / 3.0, 0.7};
  cfg.bisection = BisectionSpec{0.05, 2.0, 0.4, 5};
  cfg.trials = 77;
  cfg.patterns_per_set = 2;
  cfg.master_seed = 18446744073709551557ull;
  cfg.threads = 3;
  cfg.max_cells = 12345;

  const auto manifest = make_manifest(cfg, "critical");
  CHECK(manifest["tool"] == "beg");
  CHECK(manifest["version"] == std::string(kToolVersion));
  CHECK(manifest["command"] == "critical");
  CHECK(manifest["master_seed"] == cfg.master_seed);

  const auto back = config_from_json(nlohmann::json::parse(manifest.dump()).at("config"));
  CHECK(back == cfg);

  cfg.bisection.reset();
  cfg.variant = Variant::original;
  CHECK(config_from_json(nlohmann::json::parse(config_to_json(cfg).dump())) == cfg);
}

TEST_CASE("emit_results writes both files") {
  const auto dir = std::filesystem::temp_directory_path() / "beg_results_io_test";
  std::filesystem::create_directories(dir);
  ExperimentConfig cfg;
  cfg.n_list = {2000};
  cfg.gamma_list = {1.5};
  cfg.alpha_list = {0.1 / 3.0};
  const std::vector<ResultRow> rows{sample_row()};
  emit_results(rows, dir / "a.csv", dir / "a.json", make_manifest(cfg, "simulate"));
  emit_results(rows, dir / "b.csv", dir / "b.json", make_manifest(cfg, "simulate"));
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(config_from_json(nlohmann::json::parse(slurp(dir / "a.json")).at("config")) == cfg);

  emit_results({}, dir / "empty.csv", dir / "empty.json", make_manifest(cfg, "simulate"));
  CHECK(slurp(dir / "empty.csv") == std::string(kResultsHeader) + "\n");

  CHECK_THROWS_AS(emit_results(rows, dir / "missing" / "x.csv", dir / "x.json", make_manifest(cfg, "simulate")),
                  std::runtime_error);
  std::filesystem::remove_all(dir);
}
