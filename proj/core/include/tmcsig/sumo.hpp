#pragma once

// SUMO interchange: route files and static tlLogic programs.
//
// Edge ids follow the zone labels: "1i" is the inbound edge of zone 1 (West),
// "2o" the outbound edge of zone 2 (North). State strings have one character
// per movement in WBL, WBT, ..., SBR order. SUMO derives link order from the
// network's connections, so that network must be built with the same order.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tmcsig/signals.hpp"
#include "tmcsig/trafficgen.hpp"

namespace tmcsig {

std::string inbound_edge(Zone z);
std::string outbound_edge(Zone z);
/// "1i 2o" for WBL.
std::string route_edges(Movement m);
/// Inverse of route_edges; throws std::invalid_argument on unknown edges.
Movement movement_from_edges(std::string_view edges);

/// Routes document for sorted plans; throws std::invalid_argument otherwise.
std::string emit_routes(std::span<const VehiclePlan> plans);
/// Reads back vehicles written by emit_routes. Departures must be whole seconds.
std::vector<VehiclePlan> parse_routes(const std::string& xml);

struct TlsPhase {
  int duration = 0;
  std::string state;

  bool operator==(const TlsPhase&) const = default;
};

struct TlsProgram {
  std::string program_id;
  std::vector<TlsPhase> phases;

  int cycle() const noexcept;
  bool operator==(const TlsProgram&) const = default;
};

/// Green then yellow for each of the four phases.
TlsProgram tls_program(const PhasePlan& plan, std::string program_id);

/// Distinct plans of a program in first-use order, and the program index
/// in effect for each minute.
struct TlsExport {
  std::vector<TlsProgram> programs;
  std::vector<std::size_t> schedule;
};

TlsExport emit_tls(const SignalProgram& program);

/// `<additional>` document holding one tlLogic per program.
std::string render_tls(std::span<const TlsProgram> programs, std::string_view tls_id = "C");
std::vector<TlsProgram> parse_tls(const std::string& xml);

/// CSV `minute,program_id`.
void write_switch_schedule(std::ostream& out, const TlsExport& tls);

}  // namespace tmcsig
