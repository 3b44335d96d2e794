#pragma once

// Policy comparison grid over intersections, zone patterns and cycle lengths.
//
// Demand depends only on the pattern (seed derived from the base seed and the
// pattern's position), so every intersection, policy and cycle of a pattern
// sees the same vehicles. Programs do not depend on geometry and are built
// once per (pattern, policy, cycle).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tmcsig/core_model.hpp"
#include "tmcsig/keyed_config.hpp"
#include "tmcsig/reference_data.hpp"
#include "tmcsig/rl_scheduler.hpp"
#include "tmcsig/signals.hpp"
#include "tmcsig/sim.hpp"
#include "tmcsig/trafficgen.hpp"

namespace tmcsig {

struct ExperimentSpec {
  std::vector<IntersectionGeometry> intersections = reference_geometries();
  std::vector<ZonePattern> patterns = pattern_library();
  std::vector<Policy> policies{kPolicies.begin(), kPolicies.end()};
  std::vector<int> cycles{60, 90, 120, 150};
  DemandSpec demand;  // pattern and seed are set per cell
  std::uint64_t seed = 1;
  int yellow = 3;
  int min_green = 5;
  RlHyperParams rl{.episodes = 20, .epsilon = {}};
  SimConfig sim;

  /// Keys: intersections (`default` or a geometry CSV, relative to
  /// `base_dir`), patterns, policies, cycles, seed, yellow, min_green,
  /// rl_episodes, headway, permissive_left_factor, plus the demand keys read
  /// by DemandSpec::from_config.
  static ExperimentSpec from_config(const KeyedConfig& cfg, const std::filesystem::path& base_dir);

  void validate() const;
};

struct CellResult {
  std::string intersection;
  std::string pattern;
  Policy policy = Policy::Static;
  int cycle = 0;
  std::int64_t total_wait = 0;
  double nwt = 0.0;
  std::int64_t injected = 0;
  std::int64_t served = 0;
  std::int64_t residual = 0;

  bool operator==(const CellResult&) const = default;
};

/// Rows ordered by (intersection, pattern, policy, cycle), each in the order
/// the spec lists them.
struct ExperimentMatrix {
  std::vector<CellResult> rows;
};

/// Any cell failure is rethrown as std::runtime_error naming the cell.
ExperimentMatrix run_experiment(const ExperimentSpec& spec);

void write_report(std::ostream& out, const ExperimentMatrix& matrix);

/// Relative margin under which policies count as tied.
inline constexpr double kWinnerTieThreshold = 0.005;

/// Policy NWT for one (intersection, pattern): the best over its cycles.
double best_nwt(const ExperimentMatrix& m, const std::string& intersection,
                const std::string& pattern, Policy policy);

struct WinnerCell {
  std::string intersection;
  std::string pattern;
  Policy winner = Policy::Static;
};

/// Argmin of best_nwt per (intersection, pattern). Policies within the tie
/// threshold of the minimum are tied and the earliest in S, D, H, RL wins.
std::vector<WinnerCell> winners(const ExperimentMatrix& m);

/// CSV `pattern,<intersection ids...>` with policy letters.
void write_winners(std::ostream& out, const ExperimentMatrix& m);

}  // namespace tmcsig
