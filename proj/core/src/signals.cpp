#include "tmcsig/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tmcsig/apportion.hpp"

namespace tmcsig {

namespace {

using M = Movement;

std::array<std::pair<MovementSet, MovementSet>, 4> layout_sets(PhaseLayout layout) {
  if (layout == PhaseLayout::Split) {
    return {{{{M::WBL, M::WBT, M::WBR}, {}},
             {{M::NBL, M::NBT, M::NBR}, {}},
             {{M::EBL, M::EBT, M::EBR}, {}},
             {{M::SBL, M::SBT, M::SBR}, {}}}};
  }
  return {{{{M::WBT, M::WBR, M::EBT, M::EBR}, {M::WBL, M::EBL}},
           {{M::WBL, M::EBL}, {}},
           {{M::NBT, M::NBR, M::SBT, M::SBR}, {M::NBL, M::SBL}},
           {{M::NBL, M::SBL}, {}}}};
}

}  // namespace

int PhasePlan::cycle() const noexcept {
  int c = 0;
  for (const auto& p : phases) c += p.green + p.yellow;
  return c;
}

std::array<int, 4> PhasePlan::greens() const noexcept {
  return {phases[0].green, phases[1].green, phases[2].green, phases[3].green};
}

PhasePlan make_plan(PhaseLayout layout, const std::array<int, 4>& greens, int yellow) {
  PhasePlan plan;
  plan.layout = layout;
  const auto sets = layout_sets(layout);
  for (std::size_t i = 0; i < 4; ++i) {
    plan.phases[i] = {sets[i].first, sets[i].second, greens[i], yellow};
  }
  return plan;
}

void SignalParams::validate() const {
  if (yellow < 0) throw std::invalid_argument("yellow time must be non-negative");
  if (min_green < 1) throw std::invalid_argument("minimum green must be at least 1 s");
  if (cycle < 4 * (yellow + min_green)) {
    throw std::invalid_argument("cycle " + std::to_string(cycle) + " s is shorter than 4 x (" +
                                std::to_string(yellow) + " s yellow + " +
                                std::to_string(min_green) + " s minimum green)");
  }
}

CriticalCounts critical_counts(const TmcTable& tmc) noexcept {
  auto pair_avg = [&](M a, M b) { return static_cast<double>(tmc[a] + tmc[b]) / 2.0; };
  auto count = [&](M m) { return static_cast<double>(tmc[m]); };
  return {{std::max(pair_avg(M::WBT, M::WBR), pair_avg(M::EBT, M::EBR)),
           std::max(count(M::WBL), count(M::EBL)),
           std::max(pair_avg(M::NBT, M::NBR), pair_avg(M::SBT, M::SBR)),
           std::max(count(M::NBL), count(M::SBL))}};
}

std::array<int, 4> allocate_greens(const std::array<double, 4>& targets, int usable,
                                   int min_green) {
  if (usable < 4 * min_green) {
    throw std::invalid_argument("allocate_greens: budget below four minimum greens");
  }
  std::array<bool, 4> pinned{};
  std::array<int, 4> out{};
  while (true) {
    int budget = usable;
    double free_weight = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      if (pinned[i]) {
        budget -= min_green;
      } else {
        free_weight += std::max(targets[i], 0.0);
      }
    }
    std::array<double, 4> weights{};
    for (std::size_t i = 0; i < 4; ++i) {
      if (pinned[i]) continue;
      // All-zero free targets share the budget equally.
      weights[i] = free_weight > 0.0 ? std::max(targets[i], 0.0) : 1.0;
    }
    const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (weight_sum <= 0.0) {
      // Unreachable while usable >= 4 * min_green; keep the plan feasible anyway.
      return allocate_greens({1.0, 1.0, 1.0, 1.0}, usable, min_green);
    }
    bool changed = false;
    for (std::size_t i = 0; i < 4; ++i) {
      if (!pinned[i] && weights[i] * budget / weight_sum < min_green) {
        pinned[i] = true;
        changed = true;
      }
    }
    if (changed) continue;

    const auto seats = largest_remainder(budget, weights);
    for (std::size_t i = 0; i < 4; ++i) {
      out[i] = pinned[i] ? min_green : static_cast<int>(seats[i]);
    }
    // Rounding can still leave a free phase one second under the floor; pin it.
    bool below = false;
    for (std::size_t i = 0; i < 4; ++i) {
      if (!pinned[i] && out[i] < min_green) {
        pinned[i] = true;
        below = true;
      }
    }
    if (!below) return out;
  }
}

PhasePlan static_plan(const SignalParams& params) {
  params.validate();
  const int usable = params.usable_green();
  std::array<int, 4> greens{};
  for (int i = 0; i < 4; ++i) greens[static_cast<std::size_t>(i)] = usable / 4 + (i < usable % 4 ? 1 : 0);
  return make_plan(PhaseLayout::ProtectedLeft, greens, params.yellow);
}

PhasePlan dynamic_plan(const TmcTable& tmc, const SignalParams& params) {
  params.validate();
  const CriticalCounts cc = critical_counts(tmc);
  const double total = cc.total();
  if (total <= 0.0) return static_plan(params);
  std::array<double, 4> targets{};
  for (std::size_t i = 0; i < 4; ++i) {
    targets[i] = cc.values[i] / total * params.cycle - params.yellow;
  }
  return make_plan(PhaseLayout::ProtectedLeft,
                   allocate_greens(targets, params.usable_green(), params.min_green),
                   params.yellow);
}

std::string_view policy_name(Policy p) noexcept {
  switch (p) {
    case Policy::Static: return "static";
    case Policy::Dynamic: return "dynamic";
    case Policy::Hybrid: return "hybrid";
    case Policy::Rl: return "rl";
  }
  return "?";
}

std::string_view policy_letter(Policy p) noexcept {
  switch (p) {
    case Policy::Static: return "S";
    case Policy::Dynamic: return "D";
    case Policy::Hybrid: return "H";
    case Policy::Rl: return "RL";
  }
  return "?";
}

std::optional<Policy> parse_policy(std::string_view name) noexcept {
  for (Policy p : kPolicies) {
    if (policy_name(p) == name || policy_letter(p) == name) return p;
  }
  return std::nullopt;
}

std::vector<bool> peak_mask_range(int minutes, int first, int last) {
  std::vector<bool> mask(static_cast<std::size_t>(std::max(minutes, 0)), false);
  for (int m = std::max(first, 0); m < std::min(last, minutes); ++m) {
    mask[static_cast<std::size_t>(m)] = true;
  }
  return mask;
}

std::vector<bool> default_peak_mask(int minutes) { return peak_mask_range(minutes, 60, minutes - 60); }

SignalProgram build_program(std::span<const TmcTable> minute_tmcs, Policy policy,
                            const SignalParams& params, const std::vector<bool>& peak) {
  if (policy == Policy::Rl) {
    throw std::invalid_argument("build_program: rl programs need a trained Q-network");
  }
  if (!peak.empty() && peak.size() != minute_tmcs.size()) {
    throw std::invalid_argument("build_program: peak mask length differs from the horizon");
  }
  const PhasePlan fixed = static_plan(params);
  SignalProgram program;
  program.minutes.reserve(minute_tmcs.size());
  for (std::size_t m = 0; m < minute_tmcs.size(); ++m) {
    const bool adaptive = policy == Policy::Dynamic ||
                          (policy == Policy::Hybrid && !peak.empty() && peak[m]);
    program.minutes.push_back(adaptive ? dynamic_plan(minute_tmcs[m], params) : fixed);
  }
  return program;
}

}  // namespace tmcsig
