#pragma once

// Discrete-time point-queue simulator for one signalized intersection.
//
// Each 1 s tick: arrivals join their movement's FIFO queue; movements with
// green discharge effective_lanes / headway vehicles per second (fractional
// service carries over while the queue stays non-empty; permissive lefts run
// at a reduced rate); nothing moves on yellow; every vehicle still queued
// accrues one second of waiting. A new minute's plan takes effect at the next
// cycle start, so phases are never truncated.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "tmcsig/core_model.hpp"
#include "tmcsig/rl_scheduler.hpp"
#include "tmcsig/signals.hpp"
#include "tmcsig/trafficgen.hpp"

namespace tmcsig {

struct SimConfig {
  int step = 1;                          // seconds; only 1 is supported
  double saturation_headway = 2.0;       // s / vehicle / lane
  double permissive_left_factor = 0.5;
  std::int64_t horizon = 0;              // seconds; 0 means the program length

  void validate() const;
};

/// Effective lanes serving each movement.
struct LaneAssignment {
  std::array<double, kMovementCount> lanes{};

  double operator[](Movement m) const noexcept { return lanes[index(m)]; }
};

/// Three or more inbound lanes: one left lane, the rest split 2:1 between
/// through and right by largest remainder. Fewer: shares (1, 2, 1) / 4.
LaneAssignment assign_lanes(const IntersectionGeometry& geo);

struct SimResult {
  std::int64_t total_wait = 0;   // vehicle-seconds
  double nwt = 0.0;              // total_wait / max(1, injected)
  std::int64_t injected = 0;
  std::int64_t served = 0;
  std::int64_t residual = 0;
  /// Per minute, the largest queue seen on each approach (W, N, E, S).
  std::vector<std::array<std::int64_t, 4>> queue_series;
  /// Indexed like the input plans; waits and service ticks (-1 while still
  /// queued at the horizon, or never injected).
  std::vector<std::int64_t> vehicle_wait;
  std::vector<std::int64_t> service_tick;

  bool operator==(const SimResult&) const = default;
};

/// Throws std::invalid_argument if the plans are unsorted, the program does
/// not cover the horizon, or a plan has an empty cycle.
SimResult run(const IntersectionGeometry& geo, std::span<const VehiclePlan> plans,
              const SignalProgram& program, const SimConfig& cfg);

struct EvaluateOptions {
  SignalParams signal;
  std::vector<bool> peak;            // hybrid only; empty means default_peak_mask
  const QFunction* q = nullptr;      // rl only; trained on the demand when null
  RlHyperParams rl;
  std::uint64_t rl_seed = 1;
};

/// Program for `policy` built from the per-minute TMC of `plans`.
SignalProgram plan_program(std::span<const TmcTable> minute_tmcs, Policy policy,
                           const EvaluateOptions& opts);

/// Builds the program for `policy` from the demand itself and simulates it.
SimResult evaluate(const IntersectionGeometry& geo, std::span<const VehiclePlan> plans,
                   Policy policy, const EvaluateOptions& opts, const SimConfig& cfg);

}  // namespace tmcsig
