#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "beg/experiments.hpp"
#include "beg/theory.hpp"

namespace beg {

inline constexpr std::string_view kToolName = "beg";
inline constexpr std::string_view kToolVersion = "1.0.0";

inline constexpr std::string_view kResultsHeader =
    "N,gamma,alpha,M,trials,tested_patterns,unstable_fraction,zero_on_fraction,erase_fraction,"
    "flip_fraction,ci_lo,ci_hi,wall_seconds,seed";

inline constexpr std::string_view kTheoryHeader = "gamma,x_hat,x_star,alpha_star";

/// Shortest-form rendering with 9 significant digits ("%.9g").
std::string format_real(double v);

/// Header plus one LF-terminated line per row.
void write_results_csv(std::ostream& out, std::span<const ResultRow> rows);
void write_theory_csv(std::ostream& out, std::span<const theory::TheoryPoint> points);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// {"tool", "version", "command", "master_seed", "config"}.
nlohmann::json make_manifest(const ExperimentConfig& cfg, std::string_view command);

/// Writes the results CSV and the manifest. Throws std::runtime_error on
/// I/O failure.
void emit_results(std::span<const ResultRow> rows, const std::filesystem::path& csv_path,
                  const std::filesystem::path& manifest_path, const nlohmann::json& manifest);

}  // namespace beg
