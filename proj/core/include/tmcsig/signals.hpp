#pragma once

// Four-phase signal plans and the static, dynamic and hybrid timing policies.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tmcsig/core_model.hpp"

namespace tmcsig {

class MovementSet {
 public:
  constexpr MovementSet() = default;
  constexpr MovementSet(std::initializer_list<Movement> ms) {
    for (Movement m : ms) insert(m);
  }

  constexpr void insert(Movement m) noexcept { bits_ |= bit(m); }
  constexpr bool contains(Movement m) const noexcept { return (bits_ & bit(m)) != 0; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr bool intersects(MovementSet o) const noexcept { return (bits_ & o.bits_) != 0; }
  constexpr MovementSet operator|(MovementSet o) const noexcept {
    MovementSet r;
    r.bits_ = static_cast<std::uint16_t>(bits_ | o.bits_);
    return r;
  }
  constexpr std::uint16_t mask() const noexcept { return bits_; }

  constexpr bool operator==(const MovementSet&) const = default;

 private:
  static constexpr std::uint16_t bit(Movement m) noexcept {
    return static_cast<std::uint16_t>(1u << index(m));
  }
  std::uint16_t bits_ = 0;
};

/// Green interval followed by its yellow. `permissive` movements may proceed
/// during the green while yielding to the protected ones.
struct Phase {
  MovementSet served;
  MovementSet permissive;
  int green = 0;
  int yellow = 0;

  bool operator==(const Phase&) const = default;
};

/// Which movements each of the four phases serves.
///  - ProtectedLeft: P1 W/E through+right (W/E lefts permissive), P2 W/E lefts,
///    P3 N/S through+right (N/S lefts permissive), P4 N/S lefts.
///  - Split: one phase per approach in W, N, E, S order.
enum class PhaseLayout : std::uint8_t { ProtectedLeft, Split };

struct PhasePlan {
  PhaseLayout layout = PhaseLayout::ProtectedLeft;
  std::array<Phase, 4> phases{};

  int cycle() const noexcept;
  std::array<int, 4> greens() const noexcept;

  bool operator==(const PhasePlan&) const = default;
};

PhasePlan make_plan(PhaseLayout layout, const std::array<int, 4>& greens, int yellow);

struct SignalParams {
  int cycle = 90;
  int yellow = 3;
  int min_green = 5;

  int usable_green() const noexcept { return cycle - 4 * yellow; }

  /// Throws std::invalid_argument unless cycle >= 4 * (yellow + min_green).
  void validate() const;
};

struct CriticalCounts {
  std::array<double, 4> values{};  // a, b, c, d

  double total() const noexcept { return values[0] + values[1] + values[2] + values[3]; }
};

/// a = max((WBT+WBR)/2, (EBT+EBR)/2), b = max(WBL, EBL),
/// c = max((NBT+NBR)/2, (SBT+SBR)/2), d = max(NBL, SBL).
CriticalCounts critical_counts(const TmcTable& tmc) noexcept;

/// Integer greens summing to `usable` with each at least `min_green`.
/// `targets` are the unrounded greens; phases whose target falls below the
/// floor are pinned there and the rest of the budget is re-split
/// proportionally to the remaining targets by largest remainder.
std::array<int, 4> allocate_greens(const std::array<double, 4>& targets, int usable,
                                   int min_green);

/// Equal greens; leftover seconds go one each to the earliest phases.
PhasePlan static_plan(const SignalParams& params);

/// Greens proportional to the critical counts: (x / total) * cycle - yellow,
/// floored at min_green and made to sum to the cycle. Zero demand falls back
/// to the static plan.
PhasePlan dynamic_plan(const TmcTable& tmc, const SignalParams& params);

enum class Policy : std::uint8_t { Static, Dynamic, Hybrid, Rl };

inline constexpr std::array<Policy, 4> kPolicies = {Policy::Static, Policy::Dynamic,
                                                    Policy::Hybrid, Policy::Rl};

std::string_view policy_name(Policy p) noexcept;    // "static"
std::string_view policy_letter(Policy p) noexcept;  // "S"
std::optional<Policy> parse_policy(std::string_view name) noexcept;

/// One plan per simulated minute.
struct SignalProgram {
  std::vector<PhasePlan> minutes;

  std::size_t size() const noexcept { return minutes.size(); }
  const PhasePlan& at_minute(std::size_t m) const { return minutes.at(m); }

  bool operator==(const SignalProgram&) const = default;
};

/// Peak mask covering [first, last) of a `minutes`-long horizon.
std::vector<bool> peak_mask_range(int minutes, int first, int last);

/// All but the first and last hour; minutes 60..179 for a 4-hour run.
std::vector<bool> default_peak_mask(int minutes);

/// Static, dynamic or hybrid program. Hybrid uses the dynamic plan where
/// `peak` is true and the static plan elsewhere; an empty mask means no peak.
/// Policy::Rl is rejected here (see rl_program).
SignalProgram build_program(std::span<const TmcTable> minute_tmcs, Policy policy,
                            const SignalParams& params, const std::vector<bool>& peak = {});

}  // namespace tmcsig
