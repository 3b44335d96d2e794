#include "tmcsig/core_model.hpp"

#include <numeric>
#include <stdexcept>

namespace tmcsig {

namespace {

constexpr std::array<std::string_view, kMovementCount> kMovementNames = {
    "WBL", "WBT", "WBR", "NBL", "NBT", "NBR", "EBL", "EBT", "EBR", "SBL", "SBT", "SBR"};

}  // namespace

std::string_view zone_name(Zone z) noexcept {
  switch (z) {
    case Zone::West: return "West";
    case Zone::North: return "North";
    case Zone::East: return "East";
    case Zone::South: return "South";
  }
  return "?";
}

char zone_letter(Zone z) noexcept { return zone_name(z).front(); }

std::string_view movement_name(Movement m) noexcept { return kMovementNames[index(m)]; }

std::optional<Movement> parse_movement(std::string_view name) noexcept {
  for (Movement m : kMovements) {
    if (kMovementNames[index(m)] == name) return m;
  }
  return std::nullopt;
}

std::optional<Movement> movement_between(Zone from, Zone to) noexcept {
  for (Turn t : kTurns) {
    const Movement m = make_movement(from, t);
    if (destination(m) == to) return m;
  }
  return std::nullopt;
}

int IntersectionGeometry::total_lanes() const noexcept {
  return std::accumulate(lanes_in.begin(), lanes_in.end(), 0) +
         std::accumulate(lanes_out.begin(), lanes_out.end(), 0);
}

void IntersectionGeometry::validate() const {
  for (Zone z : kZones) {
    if (lanes_in[index(z)] < 1 || lanes_out[index(z)] < 1) {
      throw std::invalid_argument("geometry '" + id + "': " + std::string(zone_name(z)) +
                                  " edge needs at least one lane in each direction");
    }
  }
}

TmcTable::TmcTable(const std::array<std::int64_t, kMovementCount>& counts) {
  for (Movement m : kMovements) set(m, counts[index(m)]);
}

void TmcTable::set(Movement m, std::int64_t count) {
  if (count < 0) {
    throw std::invalid_argument("negative count for " + std::string(movement_name(m)));
  }
  counts_[index(m)] = count;
}

void TmcTable::add(Movement m, std::int64_t count) { set(m, counts_[index(m)] + count); }

std::int64_t TmcTable::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

TmcTable& TmcTable::operator+=(const TmcTable& other) noexcept {
  for (std::size_t i = 0; i < kMovementCount; ++i) counts_[i] += other.counts_[i];
  return *this;
}

std::int64_t inflow_count(const TmcTable& tmc, Zone z) noexcept {
  std::int64_t sum = 0;
  for (Turn t : kTurns) sum += tmc[make_movement(z, t)];
  return sum;
}

std::int64_t outflow_count(const TmcTable& tmc, Zone z) noexcept {
  std::int64_t sum = 0;
  for (Movement m : kMovements) {
    if (destination(m) == z) sum += tmc[m];
  }
  return sum;
}

std::int64_t rounded_ratio(std::int64_t numerator, std::int64_t denominator) {
  if (denominator <= 0) throw std::invalid_argument("rounded_ratio: denominator must be positive");
  // Exact integer form of round-half-away-from-zero for n/d with d > 0.
  const std::int64_t twice = 2 * numerator;
  if (numerator >= 0) return (twice + denominator) / (2 * denominator);
  return -((-twice + denominator) / (2 * denominator));
}

CapacityReport zone_capacity_rates(const IntersectionGeometry& geo, const TmcTable& tmc) {
  geo.validate();
  CapacityReport report;
  for (Zone z : kZones) {
    report.inflow_rate[index(z)] = rounded_ratio(inflow_count(tmc, z), geo.lanes_in[index(z)]);
    report.outflow_rate[index(z)] = rounded_ratio(outflow_count(tmc, z), geo.lanes_out[index(z)]);
  }
  report.total_rate = rounded_ratio(tmc.total(), geo.total_lanes());
  return report;
}

}  // namespace tmcsig
