#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "qgraph/coset.hpp"
#include "qgraph/scattering.hpp"

namespace qgraph {

enum class GraphFamily { complete, random_regular };
enum class GapMethodChoice { automatic, dense, deflated_power, both };

/// Experiment settings read from an INI file. Every key is documented in
/// tools/qgraph.reference.ini; unknown sections or keys are rejected.
struct ExperimentConfig {
  // [graph]
  GraphFamily family = GraphFamily::complete;
  std::vector<int> sizes{8, 16, 24, 32};
  int degree = 3;
  VertexKind vertex_kind = VertexKind::dft;
  double length_low = 1.0;
  double length_high = 2.0;

  // [run]
  std::uint64_t seed = 1;
  int threads = 1;
  std::string output_dir = "qgraph-out";

  // [tolerances]
  double unitarity_tolerance = 1e-12;
  double perron_tolerance = 1e-10;
  double resolvent_tolerance = 1e-8;
  double evaluator_tolerance = 1e-10;
  double coset_tolerance = 1e-9;

  // [gap]
  GapMethodChoice gap_method = GapMethodChoice::automatic;
  int dense_limit = 1000;  // largest 2B solved densely under "auto"
  double gap_threshold = 6.0 / 7.0;
  double gap_threshold_slack = 1e-9;

  // [w]
  int chain_order = 3;
  int chain_samples = 2000;

  // [scaling]
  double t_slope_target = -1.0;
  double t_slope_tolerance = 0.15;
  double term1_slope_target = -1.0;
  double term1_slope_tolerance = 0.2;

  // [contraction]
  std::vector<int> contraction_sizes{3, 8, 16};
  int brute_force_limit = 6;  // largest 2B for the brute-force index sum

  // [coset]
  std::vector<int> generator_counts{2, 4, 6};
  int coset_points = 20;
  CosetProfile coset_profile = CosetProfile::generic;

  // [form_factor]
  int ff_n_max = 0;  // 0: 4B
  int ff_samples = 200;
  int ff_window_lo = 1;
  int ff_window_hi = 0;  // 0: 4B
  double ff_threshold = 0.1;
  double ff_standard_errors = 5.0;
};

/// Throws invalid_argument naming the offending key on malformed input.
ExperimentConfig parse_config(std::istream& in);
/// Throws io_error when the file is missing.
ExperimentConfig load_config(const std::filesystem::path& path);
void validate_config(const ExperimentConfig& config);

/// INI text that parses back to `config`; used for the run report echo.
std::string config_to_ini(const ExperimentConfig& config);

std::string_view to_string(GraphFamily family) noexcept;
std::string_view to_string(VertexKind kind) noexcept;
std::string_view to_string(GapMethodChoice choice) noexcept;
std::string_view to_string(CosetProfile profile) noexcept;

}  // namespace qgraph
