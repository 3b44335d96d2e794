#pragma once

// Zones, turning movements, intersection geometry and TMC tables.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tmcsig {

/// Approach zones in their canonical order. Every 4-vector in the library is
/// indexed West, North, East, South (labels 1..4 in edge ids such as "2i").
enum class Zone : std::uint8_t { West = 0, North = 1, East = 2, South = 3 };

inline constexpr std::array<Zone, 4> kZones = {Zone::West, Zone::North, Zone::East,
                                               Zone::South};

constexpr std::size_t index(Zone z) noexcept { return static_cast<std::size_t>(z); }

/// 1-based edge label used by the geometry file and SUMO edge ids.
constexpr int zone_label(Zone z) noexcept { return static_cast<int>(z) + 1; }

std::string_view zone_name(Zone z) noexcept;       // "West"
char zone_letter(Zone z) noexcept;                 // 'W'

enum class Turn : std::uint8_t { Left = 0, Through = 1, Right = 2 };

inline constexpr std::array<Turn, 3> kTurns = {Turn::Left, Turn::Through, Turn::Right};

/// The twelve turning movements, grouped by origin zone then (L, T, R).
enum class Movement : std::uint8_t {
  WBL, WBT, WBR,
  NBL, NBT, NBR,
  EBL, EBT, EBR,
  SBL, SBT, SBR,
};

inline constexpr std::size_t kMovementCount = 12;

inline constexpr std::array<Movement, kMovementCount> kMovements = {
    Movement::WBL, Movement::WBT, Movement::WBR, Movement::NBL,
    Movement::NBT, Movement::NBR, Movement::EBL, Movement::EBT,
    Movement::EBR, Movement::SBL, Movement::SBT, Movement::SBR};

constexpr std::size_t index(Movement m) noexcept { return static_cast<std::size_t>(m); }

constexpr Movement make_movement(Zone origin, Turn turn) noexcept {
  return static_cast<Movement>(index(origin) * 3 + static_cast<std::size_t>(turn));
}

constexpr Zone origin(Movement m) noexcept { return static_cast<Zone>(index(m) / 3); }

constexpr Turn turn(Movement m) noexcept { return static_cast<Turn>(index(m) % 3); }

/// Right-hand traffic: zones are arranged clockwise W, N, E, S, so a left turn
/// exits one zone clockwise from the origin, through two, right three.
constexpr Zone destination(Movement m) noexcept {
  const std::size_t offset = static_cast<std::size_t>(turn(m)) + 1;
  return static_cast<Zone>((index(origin(m)) + offset) % 4);
}

std::string_view movement_name(Movement m) noexcept;
std::optional<Movement> parse_movement(std::string_view name) noexcept;

/// Movement entering at `from` and leaving at `to`; nullopt for U-turns.
std::optional<Movement> movement_between(Zone from, Zone to) noexcept;

/// Four-leg junction with per-edge lane counts.
struct IntersectionGeometry {
  std::string id;
  std::array<int, 4> lanes_in{1, 1, 1, 1};
  std::array<int, 4> lanes_out{1, 1, 1, 1};

  int total_lanes() const noexcept;

  /// Throws std::invalid_argument if any lane count is below 1.
  void validate() const;

  bool operator==(const IntersectionGeometry&) const = default;
};

/// Counts for all twelve movements. Movements that were not observed are 0.
class TmcTable {
 public:
  TmcTable() = default;
  explicit TmcTable(const std::array<std::int64_t, kMovementCount>& counts);

  std::int64_t operator[](Movement m) const noexcept { return counts_[index(m)]; }
  std::int64_t& operator[](Movement m) noexcept { return counts_[index(m)]; }

  /// Throws std::invalid_argument on a negative count.
  void set(Movement m, std::int64_t count);
  void add(Movement m, std::int64_t count = 1);

  std::int64_t total() const noexcept;
  const std::array<std::int64_t, kMovementCount>& counts() const noexcept { return counts_; }

  TmcTable& operator+=(const TmcTable& other) noexcept;

  bool operator==(const TmcTable&) const = default;

 private:
  std::array<std::int64_t, kMovementCount> counts_{};
};

/// Sum of the movements whose origin is `z`.
std::int64_t inflow_count(const TmcTable& tmc, Zone z) noexcept;

/// Sum of the movements whose destination is `z`.
std::int64_t outflow_count(const TmcTable& tmc, Zone z) noexcept;

/// Count per lane on every edge plus the intersection-wide total rate.
struct CapacityReport {
  std::array<std::int64_t, 4> inflow_rate{};
  std::array<std::int64_t, 4> outflow_rate{};
  std::int64_t total_rate = 0;

  bool operator==(const CapacityReport&) const = default;
};

/// Integer ratio rounded half away from zero.
std::int64_t rounded_ratio(std::int64_t numerator, std::int64_t denominator);

CapacityReport zone_capacity_rates(const IntersectionGeometry& geo, const TmcTable& tmc);

}  // namespace tmcsig
