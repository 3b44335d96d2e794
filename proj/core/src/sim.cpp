#include "tmcsig/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "tmcsig/apportion.hpp"

namespace tmcsig {

void SimConfig::validate() const {
  if (step != 1) throw std::invalid_argument("simulator: only a 1 s step is supported");
  if (!(saturation_headway > 0.0)) throw std::invalid_argument("simulator: headway must be positive");
  if (permissive_left_factor < 0.0 || permissive_left_factor > 1.0) {
    throw std::invalid_argument("simulator: permissive left factor must lie in [0, 1]");
  }
  if (horizon < 0) throw std::invalid_argument("simulator: negative horizon");
}

LaneAssignment assign_lanes(const IntersectionGeometry& geo) {
  geo.validate();
  LaneAssignment out;
  for (Zone z : kZones) {
    const int n = geo.lanes_in[index(z)];
    std::array<double, 3> share{};
    if (n >= 3) {
      const std::array<double, 2> weights{2.0, 1.0};
      const auto seats = largest_remainder(n - 1, weights);
      share = {1.0, static_cast<double>(seats[0]), static_cast<double>(seats[1])};
    } else {
      share = {0.25 * n, 0.5 * n, 0.25 * n};
    }
    for (Turn t : kTurns) out.lanes[index(make_movement(z, t))] = share[static_cast<std::size_t>(t)];
  }
  return out;
}

namespace {

// Walks the program's phases, switching plans only at cycle boundaries.
class SignalClock {
 public:
  explicit SignalClock(const SignalProgram& program) : program_(program) {
    plan_ = &program_.at_minute(0);
  }

  void advance_to(std::int64_t t) {
    if (t - cycle_start_ >= plan_->cycle()) {
      cycle_start_ = t;
      plan_ = &program_.at_minute(static_cast<std::size_t>(t / 60));
    }
  }

  /// Phase whose green is showing, or nullptr during yellow.
  const Phase* green_phase(std::int64_t t) const {
    std::int64_t offset = t - cycle_start_;
    for (const auto& p : plan_->phases) {
      if (offset < p.green) return &p;
      offset -= p.green;
      if (offset < p.yellow) return nullptr;
      offset -= p.yellow;
    }
    return nullptr;
  }

 private:
  const SignalProgram& program_;
  const PhasePlan* plan_ = nullptr;
  std::int64_t cycle_start_ = 0;
};

}  // namespace

SimResult run(const IntersectionGeometry& geo, std::span<const VehiclePlan> plans,
              const SignalProgram& program, const SimConfig& cfg) {
  cfg.validate();
  if (!is_sorted_by_depart(plans)) throw std::invalid_argument("simulator: plans must be sorted by depart");
  if (!plans.empty() && plans.front().depart < 0) {
    throw std::invalid_argument("simulator: negative departure");
  }
  if (program.size() == 0) throw std::invalid_argument("simulator: empty signal program");
  const std::int64_t horizon =
      cfg.horizon > 0 ? cfg.horizon : static_cast<std::int64_t>(program.size()) * 60;
  if (static_cast<std::int64_t>(program.size()) * 60 < horizon) {
    throw std::invalid_argument("simulator: program covers " + std::to_string(program.size()) +
                                " minutes but the horizon is " + std::to_string(horizon) + " s");
  }
  for (std::size_t m = 0; m < program.size(); ++m) {
    if (program.minutes[m].cycle() <= 0) {
      throw std::invalid_argument("simulator: plan for minute " + std::to_string(m) +
                                  " has an empty cycle");
    }
  }

  const LaneAssignment lanes = assign_lanes(geo);
  std::array<double, kMovementCount> rate{};
  for (Movement m : kMovements) rate[index(m)] = lanes[m] / cfg.saturation_headway;

  SimResult res;
  res.vehicle_wait.assign(plans.size(), 0);
  res.service_tick.assign(plans.size(), -1);
  res.queue_series.assign(static_cast<std::size_t>((horizon + 59) / 60), {});

  std::array<std::deque<std::size_t>, kMovementCount> queues;
  std::array<double, kMovementCount> credit{};
  SignalClock clock(program);
  std::size_t next = 0;
  std::int64_t queued = 0;

  for (std::int64_t t = 0; t < horizon; ++t) {
    while (next < plans.size() && plans[next].depart <= t) {
      queues[index(plans[next].movement)].push_back(next);
      ++res.injected;
      ++queued;
      ++next;
    }

    clock.advance_to(t);
    const Phase* phase = clock.green_phase(t);
    for (Movement m : kMovements) {
      const std::size_t i = index(m);
      double r = 0.0;
      if (phase != nullptr) {
        if (phase->served.contains(m)) {
          r = rate[i];
        } else if (phase->permissive.contains(m)) {
          r = rate[i] * cfg.permissive_left_factor;
        }
      }
      if (r == 0.0 || queues[i].empty()) {
        credit[i] = 0.0;
        continue;
      }
      credit[i] += r;
      while (credit[i] >= 1.0 && !queues[i].empty()) {
        res.service_tick[queues[i].front()] = t;
        queues[i].pop_front();
        credit[i] -= 1.0;
        ++res.served;
        --queued;
      }
      if (queues[i].empty()) credit[i] = 0.0;
    }

    res.total_wait += queued;
    auto& q_minute = res.queue_series[static_cast<std::size_t>(t / 60)];
    for (Zone z : kZones) {
      std::int64_t len = 0;
      for (Turn tr : kTurns) len += static_cast<std::int64_t>(queues[index(make_movement(z, tr))].size());
      q_minute[index(z)] = std::max(q_minute[index(z)], len);
    }
  }

  res.residual = queued;
  for (std::size_t v = 0; v < plans.size(); ++v) {
    if (plans[v].depart >= horizon) continue;
    const std::int64_t end = res.service_tick[v] >= 0 ? res.service_tick[v] : horizon;
    res.vehicle_wait[v] = end - plans[v].depart;
  }
  res.nwt = static_cast<double>(res.total_wait) / static_cast<double>(std::max<std::int64_t>(1, res.injected));
  return res;
}

SignalProgram plan_program(std::span<const TmcTable> minute_tmcs, Policy policy,
                           const EvaluateOptions& opts) {
  if (policy == Policy::Rl) {
    if (opts.q != nullptr) return rl_program(*opts.q, minute_tmcs, opts.signal);
    const TrainResult trained = train(minute_tmcs, opts.signal, opts.rl_seed, opts.rl);
    return rl_program(trained.q, minute_tmcs, opts.signal);
  }
  const int minutes = static_cast<int>(minute_tmcs.size());
  const std::vector<bool> peak = opts.peak.empty() ? default_peak_mask(minutes) : opts.peak;
  return build_program(minute_tmcs, policy, opts.signal, peak);
}

SimResult evaluate(const IntersectionGeometry& geo, std::span<const VehiclePlan> plans,
                   Policy policy, const EvaluateOptions& opts, const SimConfig& cfg) {
  std::int64_t horizon = cfg.horizon;
  if (horizon <= 0) {
    const std::int64_t last = plans.empty() ? 0 : plans.back().depart;
    horizon = (last / 60 + 1) * 60;
  }
  const auto minutes = static_cast<int>((horizon + 59) / 60);
  MinuteTmc minute_tmcs(static_cast<std::size_t>(minutes));
  for (const auto& p : plans) {
    if (p.depart >= 0 && p.depart < horizon) minute_tmcs[static_cast<std::size_t>(p.depart / 60)].add(p.movement);
  }
  SimConfig run_cfg = cfg;
  run_cfg.horizon = horizon;
  return run(geo, plans, plan_program(minute_tmcs, policy, opts), run_cfg);
}

}  // namespace tmcsig
