#pragma once

// Synthetic demand: bimodal hourly totals -> zone split -> movement split ->
// per-vehicle departures -> per-minute TMC.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmcsig/core_model.hpp"
#include "tmcsig/random.hpp"

namespace tmcsig {

class KeyedConfig;

enum class HourKind : std::uint8_t { OffPeak, Peak };

/// Hourly vehicle totals drawn from one normal law for off-peak hours and
/// another for peak hours (vehicles/hour).
struct BimodalProfile {
  double mu_offpeak = 2500.0;
  double sigma_offpeak = 300.0;
  double mu_peak = 20000.0;
  double sigma_peak = 400.0;
  std::vector<HourKind> hours{HourKind::OffPeak, HourKind::Peak, HourKind::Peak,
                              HourKind::OffPeak};

  void validate() const;
  int minutes() const noexcept { return static_cast<int>(hours.size()) * 60; }
  int seconds() const noexcept { return static_cast<int>(hours.size()) * 3600; }
};

/// One draw per hour, rounded and clamped at zero.
std::vector<std::int64_t> hourly_counts(const BimodalProfile& profile, std::uint64_t seed);

/// Share of the hourly total entering from each zone (W, N, E, S).
struct ZonePattern {
  std::string name;
  std::array<double, 4> weights{0.25, 0.25, 0.25, 0.25};

  /// Each weight in [0, 1], sum 1 within 1e-9.
  void validate() const;
  double sum() const noexcept;
};

/// PU = {0.5, 0.5, 0.5, 0.5}; not a distribution, only used to build complements.
ZonePattern universal_pattern();

/// PU - p, componentwise.
ZonePattern complement(const ZonePattern& p, std::string name);

/// PA..PG in that order.
const std::vector<ZonePattern>& pattern_library();

std::optional<ZonePattern> find_pattern(std::string_view name);

enum class SplitMode : std::uint8_t { Deterministic, Sampled };

/// Deterministic mode uses largest remainder and ignores `rng`; sampled mode
/// draws a multinomial. Both conserve `total`.
std::array<std::int64_t, 4> split_by_zone(std::int64_t total, const ZonePattern& pattern,
                                          SplitMode mode, Rng& rng);

/// Per-zone (left, through, right) fractions.
struct TurnRatio {
  std::array<std::array<double, 3>, 4> split{};

  static TurnRatio uniform(double left, double through, double right);
  static TurnRatio defaults() { return uniform(0.25, 0.60, 0.15); }

  void validate() const;
};

TmcTable split_by_movement(const std::array<std::int64_t, 4>& zone_counts, const TurnRatio& ratios,
                           SplitMode mode, Rng& rng);

struct VehiclePlan {
  std::string id;
  std::int64_t depart = 0;  // seconds from simulation start
  Movement movement = Movement::WBL;

  bool operator==(const VehiclePlan&) const = default;
};

/// Table `h` of `hourly` holds the vehicles departing in [3600h, 3600h+3600).
/// The result is sorted by departure, ties by id.
std::vector<VehiclePlan> schedule_departures(std::span<const TmcTable> hourly, Rng& rng);

using MinuteTmc = std::vector<TmcTable>;

/// Throws std::out_of_range for a departure at or beyond `minutes` * 60.
MinuteTmc aggregate_per_minute(std::span<const VehiclePlan> plans, int minutes);

bool is_sorted_by_depart(std::span<const VehiclePlan> plans);

struct DemandSpec {
  BimodalProfile profile;
  ZonePattern pattern = pattern_library().front();
  TurnRatio turns = TurnRatio::defaults();
  SplitMode mode = SplitMode::Deterministic;
  std::uint64_t seed = 1;

  /// Reads profile keys (mu_offpeak, sigma_offpeak, mu_peak, sigma_peak,
  /// hours), `pattern` (name or four weights), `turn_ratio` (all zones) or
  /// `turn_ratio.W` etc., `mode` and `seed`. Missing keys keep defaults.
  static DemandSpec from_config(const KeyedConfig& cfg);
};

struct Demand {
  std::vector<std::int64_t> hourly_totals;
  std::vector<TmcTable> hourly;
  std::vector<VehiclePlan> plans;
  MinuteTmc minutes;
};

Demand generate_demand(const DemandSpec& spec);

}  // namespace tmcsig
