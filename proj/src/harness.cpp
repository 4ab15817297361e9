#include "beacon_forge/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "beacon_forge/adversary.hpp"
#include "beacon_forge/beacons.hpp"
#include "beacon_forge/combiners.hpp"
#include "beacon_forge/entropy.hpp"
#include "beacon_forge/format.hpp"
#include "beacon_forge/scenario_io.hpp"
#include "beacon_forge/spacetime.hpp"

namespace beacon_forge {

const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::Run: return "run";
    case Command::Table1: return "table1";
    case Command::AttackHash: return "attack-hash";
    case Command::Entropy: return "entropy";
    case Command::PredictabilityMap: return "predictability-map";
  }
  return "?";
}

Command parse_command(std::string_view name) {
  for (Command c : {Command::Run, Command::Table1, Command::AttackHash, Command::Entropy,
                    Command::PredictabilityMap}) {
    if (name == to_string(c)) return c;
  }
  fail(ErrorCode::ConfigParse, "unknown command '" + std::string(name) + "'");
}

const char* to_string(Region r) noexcept {
  switch (r) {
    case Region::PublicComputable: return "PublicComputable";
    case Region::AccompliceOnly: return "AccompliceOnly";
    case Region::Unknown: return "Unknown";
  }
  return "?";
}

Grid default_grid(const ValidatedScenario& s, std::size_t i) {
  double x_lo = s.emission(0, i).position, x_hi = x_lo;
  double t_lo = s.emission(0, i).time, t_hi = t_lo;
  for (BeaconId b = 1; b < s.beacon_count(); ++b) {
    const SpacetimeEvent& e = s.emission(b, i);
    x_lo = std::min(x_lo, e.position);
    x_hi = std::max(x_hi, e.position);
    t_lo = std::min(t_lo, e.time);
    t_hi = std::max(t_hi, e.time);
  }
  const double span = std::max(x_hi - x_lo, 1.0);
  return Grid{x_lo - span / 2, x_hi + span / 2, 41, t_lo, t_hi + 2 * span, 41};
}

namespace {

double grid_point(double lo, double hi, std::size_t steps, std::size_t j) {
  if (steps <= 1) return lo;
  return lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(steps - 1);
}

void check_grid(const Grid& g) {
  const bool finite = std::isfinite(g.x_min) && std::isfinite(g.x_max) && std::isfinite(g.t_min) &&
                      std::isfinite(g.t_max);
  if (!finite || g.x_steps == 0 || g.t_steps == 0 || g.x_min > g.x_max || g.t_min > g.t_max) {
    fail(ErrorCode::InvalidArgument, "grid must be finite with min <= max and at least one step");
  }
}

}  // namespace

std::vector<RegionCell> predictability_map(const ValidatedScenario& s, const Grid& grid, std::size_t i) {
  check_grid(grid);
  if (i >= s.length()) fail(ErrorCode::IndexOutOfRange, "stream index " + std::to_string(i));
  const bool any_dishonest = !s.dishonest().empty();
  std::vector<RegionCell> cells;
  cells.reserve(grid.x_steps * grid.t_steps);
  for (std::size_t a = 0; a < grid.t_steps; ++a) {
    const double t = grid_point(grid.t_min, grid.t_max, grid.t_steps, a);
    for (std::size_t b = 0; b < grid.x_steps; ++b) {
      const double x = grid_point(grid.x_min, grid.x_max, grid.x_steps, b);
      const SpacetimeEvent here = make_event(x, t);
      Region label = Region::Unknown;
      if (can_compute_resultant(s, here, i)) {
        label = Region::PublicComputable;
      } else if (any_dishonest && in_predictability_gap(s, here, i)) {
        label = Region::AccompliceOnly;
      }
      cells.push_back({x, t, label});
    }
  }
  return cells;
}

void write_predictability_csv(std::ostream& out, std::span<const RegionCell> cells) {
  out << "x,t,label\n";
  for (const RegionCell& c : cells) {
    out << format_real(c.x) << ',' << format_real(c.t) << ',' << to_string(c.label) << '\n';
  }
}

namespace {

class Outputs {
 public:
  explicit Outputs(const std::filesystem::path& dir) : dir_(dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) fail(ErrorCode::Io, "cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& contents) {
    const auto path = dir_ / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    f << contents;
    f.close();
    if (!f) fail(ErrorCode::Io, "write to " + path.string() + " failed");
    written_.push_back(path);
  }

  std::vector<std::filesystem::path> take() { return std::move(written_); }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
};

void run_ledger(const ValidatedScenario& s, Outputs& out) {
  const auto ledger = run_emission_schedule(s);
  std::ostringstream csv;
  write_ledger_csv(csv, ledger);
  out.write("ledger.csv", csv.str());
  std::ostringstream resultant;
  write_resultant_csv(resultant, s, ledger);
  out.write("resultant.csv", resultant.str());
}

void run_attack(const ValidatedScenario& s, const ExperimentConfig& cfg, Outputs& out) {
  if (s.combiner() != CombinerKind::Hash) {
    fail(ErrorCode::InvalidStrategy, "attack-hash needs a scenario with the hash combiner");
  }
  const HashSpec& spec = s.hash_spec();
  const unsigned d = spec.output_bits;
  const AttackConfig attack = spec.attack.value_or(AttackConfig{});
  AttackReport report;
  switch (attack.kind) {
    case AttackKind::AdaptiveTarget:
      report = simulate_adaptive_target(d, attack.budget.value_or(std::uint64_t{1} << d), cfg.trials,
                                        s.master_seed(), cfg.threads)
                   .report;
      break;
    case AttackKind::ForceBits:
      report = simulate_force_bits(d, attack.mask_bits, attack.budget.value_or(std::uint64_t{1} << attack.mask_bits),
                                   cfg.trials, s.master_seed(), cfg.threads);
      break;
    case AttackKind::Bias:
      report = bias_attack_report(d, attack.bit_position, attack.forced_value, cfg.index, cfg.threads);
      break;
  }
  out.write("attack.json", attack_report_json(report));
}

void run_entropy(const ValidatedScenario& s, const ExperimentConfig& cfg, Outputs& out) {
  const SabotageModel model{s.dishonest().size(), SubsetKnowledge::Known};
  const ProtocolChoice protocol = protocol_of(s.combiner());
  const EntropyReport report =
      cfg.empirical ? empirical_entropy_report(s, protocol, model, cfg.trials, s.master_seed(), cfg.threads)
                    : exact_entropy_report(s, protocol, model);
  out.write("entropy.json", entropy_report_json(report));
}

}  // namespace

std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials == 0) fail(ErrorCode::ConfigParse, "trials must be >= 1");
  if (cfg.output_dir.empty()) fail(ErrorCode::ConfigParse, "output directory is required");
  ValidatedScenario s = load_scenario(cfg.scenario_path);
  if (cfg.seed_override) s = s.with_seed(*cfg.seed_override);

  Outputs out(cfg.output_dir);
  switch (cfg.command) {
    case Command::Run:
      run_ledger(s, out);
      break;
    case Command::Table1: {
      std::ostringstream csv;
      write_table1_csv(csv, table1(s.beacon_count(), s.dishonest().size()));
      out.write("table1.csv", csv.str());
      break;
    }
    case Command::AttackHash:
      run_attack(s, cfg, out);
      break;
    case Command::Entropy:
      run_entropy(s, cfg, out);
      break;
    case Command::PredictabilityMap: {
      if (cfg.index >= s.length()) fail(ErrorCode::IndexOutOfRange, "stream index " + std::to_string(cfg.index));
      const Grid grid = cfg.grid.value_or(default_grid(s, cfg.index));
      std::ostringstream csv;
      write_predictability_csv(csv, predictability_map(s, grid, cfg.index));
      out.write("predictability.csv", csv.str());
      break;
    }
  }
  return out.take();
}

int exit_code(ErrorCode code) noexcept {
  if (code == ErrorCode::ConfigParse) return 2;
  if (is_scenario_error(code)) return 3;
  if (code == ErrorCode::EnumerationTooLarge) return 4;
  return 1;
}

}  // namespace beacon_forge
