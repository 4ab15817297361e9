#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "beacon_forge/core.hpp"
#include "beacon_forge/error.hpp"

namespace beacon_forge {

enum class Command { Run, Table1, AttackHash, Entropy, PredictabilityMap };

const char* to_string(Command c) noexcept;
/// Throws ConfigParse for an unknown command name.
Command parse_command(std::string_view name);

/// Rectangular grid of (x, t) points, both ends inclusive.
struct Grid {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t x_steps = 1;
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t t_steps = 1;

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Grid spanning every beacon position, from the earliest index-i emission
/// until light from the farthest beacon has crossed the whole array.
Grid default_grid(const ValidatedScenario& scenario, std::size_t i);

enum class Region { PublicComputable, AccompliceOnly, Unknown };
const char* to_string(Region r) noexcept;

struct RegionCell {
  double x = 0.0;
  double t = 0.0;
  Region label = Region::Unknown;
};

/// Labels every grid point for stream index i, t-major then x. With no
/// dishonest beacon nothing is AccompliceOnly.
std::vector<RegionCell> predictability_map(const ValidatedScenario& scenario, const Grid& grid, std::size_t i);

/// CSV `x,t,label`.
void write_predictability_csv(std::ostream& out, std::span<const RegionCell> cells);

struct ExperimentConfig {
  std::filesystem::path scenario_path;
  Command command = Command::Run;
  std::filesystem::path output_dir;
  /// Replaces the scenario's master_seed when set.
  std::optional<std::uint64_t> seed_override;
  std::uint64_t trials = 10000;
  /// Worker threads for Monte Carlo work; 0 means hardware concurrency.
  /// Outputs do not depend on this.
  unsigned threads = 1;
  /// Stream index for predictability-map and the bias attack.
  std::size_t index = 0;
  std::optional<Grid> grid;
  /// entropy: Monte Carlo estimate with `trials` samples instead of exact enumeration.
  bool empirical = false;
};

/// Runs one command and returns the files written, in write order.
/// Throws Error; map it to a process status with exit_code.
std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& config);

/// 0 success, 2 ConfigParse, 3 invalid scenario, 4 EnumerationTooLarge, 1 other.
int exit_code(ErrorCode code) noexcept;

}  // namespace beacon_forge
