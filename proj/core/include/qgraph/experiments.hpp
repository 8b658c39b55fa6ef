#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qgraph/config.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/scattering.hpp"

namespace qgraph {

enum class Command { gap_sweep, w_stats, source_scaling, contraction_check, coset_verify, form_factor };

std::string_view to_string(Command command) noexcept;
std::optional<Command> parse_command(std::string_view name) noexcept;
const std::vector<Command>& all_commands() noexcept;

/// Pass/fail against one numbered acceptance criterion.
struct CriterionResult {
  int number = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Numerical failure on one size; the run continues with the next size.
struct SizeError {
  int size = 0;
  std::string code;
  std::string message;
};

struct RunReport {
  Command command = Command::gap_sweep;
  std::vector<CriterionResult> criteria;
  std::vector<SizeError> errors;
  std::vector<std::string> files;  // written, relative to the output directory
  std::string json;                // full report including the "meta" block
  std::string deterministic_json;  // same without "meta"
  double runtime_seconds = 0.0;

  bool all_passed() const noexcept;
  /// 0 when every criterion passed, 2 otherwise.
  int exit_code() const noexcept;
};

/// Graph of the configured family with V vertices (random-regular graphs
/// draw from derive_seed(seed, V)).
Graph build_family_graph(const ExperimentConfig& config, int vertex_count);

/// Runs one command over the configured sweep and writes
/// <command>.csv, <command>.json and <command>.dat (plus command-specific
/// extra tables) into config.output_dir, creating it if needed.
RunReport run_experiment(Command command, const ExperimentConfig& config);

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace qgraph
