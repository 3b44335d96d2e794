#include "tmcsig/trafficgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "tmcsig/apportion.hpp"
#include "tmcsig/keyed_config.hpp"

namespace tmcsig {

namespace {

constexpr double kWeightTolerance = 1e-9;

std::int64_t draw_hour(double mu, double sigma, Rng& rng) {
  // std::normal_distribution requires sigma > 0.
  const double x = sigma > 0.0 ? std::normal_distribution<double>(mu, sigma)(rng) : mu;
  return std::max<std::int64_t>(0, std::llround(x));
}

template <std::size_t N>
std::array<std::int64_t, N> apportion(std::int64_t total, const std::array<double, N>& w,
                                      SplitMode mode, Rng& rng) {
  std::array<std::int64_t, N> out{};
  if (total == 0) return out;
  if (mode == SplitMode::Deterministic) {
    const auto seats = largest_remainder(total, w);
    std::copy(seats.begin(), seats.end(), out.begin());
    return out;
  }
  // Multinomial as a chain of conditional binomials.
  std::int64_t remaining = total;
  double mass = std::accumulate(w.begin(), w.end(), 0.0);
  for (std::size_t i = 0; i + 1 < N && remaining > 0; ++i) {
    const double p = mass > 0.0 ? std::clamp(w[i] / mass, 0.0, 1.0) : 0.0;
    out[i] = std::binomial_distribution<std::int64_t>(remaining, p)(rng);
    remaining -= out[i];
    mass -= w[i];
  }
  out[N - 1] += remaining;
  return out;
}

}  // namespace

void BimodalProfile::validate() const {
  if (sigma_offpeak < 0.0 || sigma_peak < 0.0) {
    throw std::invalid_argument("bimodal profile: standard deviations must be non-negative");
  }
  if (!std::isfinite(mu_offpeak) || !std::isfinite(mu_peak)) {
    throw std::invalid_argument("bimodal profile: means must be finite");
  }
  if (hours.empty()) throw std::invalid_argument("bimodal profile: no hours");
}

std::vector<std::int64_t> hourly_counts(const BimodalProfile& profile, std::uint64_t seed) {
  profile.validate();
  Rng rng(seed);
  std::vector<std::int64_t> counts;
  counts.reserve(profile.hours.size());
  for (HourKind kind : profile.hours) {
    counts.push_back(kind == HourKind::Peak
                         ? draw_hour(profile.mu_peak, profile.sigma_peak, rng)
                         : draw_hour(profile.mu_offpeak, profile.sigma_offpeak, rng));
  }
  return counts;
}

double ZonePattern::sum() const noexcept {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void ZonePattern::validate() const {
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw std::invalid_argument("zone pattern '" + name + "': weights must lie in [0, 1]");
    }
  }
  if (std::abs(sum() - 1.0) > kWeightTolerance) {
    throw std::invalid_argument("zone pattern '" + name + "': weights must sum to 1");
  }
}

ZonePattern universal_pattern() { return {"PU", {0.5, 0.5, 0.5, 0.5}}; }

ZonePattern complement(const ZonePattern& p, std::string name) {
  const ZonePattern pu = universal_pattern();
  ZonePattern out{std::move(name), {}};
  for (std::size_t i = 0; i < 4; ++i) out.weights[i] = pu.weights[i] - p.weights[i];
  return out;
}

const std::vector<ZonePattern>& pattern_library() {
  static const std::vector<ZonePattern> library = [] {
    const ZonePattern pa{"PA", {0.25, 0.25, 0.25, 0.25}};
    const ZonePattern pb{"PB", {0.4, 0.4, 0.1, 0.1}};
    const ZonePattern pc{"PC", {0.4, 0.1, 0.4, 0.1}};
    const ZonePattern pe{"PE", {0.1, 0.4, 0.4, 0.1}};
    return std::vector<ZonePattern>{pa,
                                    pb,
                                    pc,
                                    complement(pc, "PD"),
                                    pe,
                                    complement(pb, "PF"),
                                    complement(pe, "PG")};
  }();
  return library;
}

std::optional<ZonePattern> find_pattern(std::string_view name) {
  for (const auto& p : pattern_library()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

std::array<std::int64_t, 4> split_by_zone(std::int64_t total, const ZonePattern& pattern,
                                          SplitMode mode, Rng& rng) {
  if (total < 0) throw std::invalid_argument("split_by_zone: negative total");
  pattern.validate();
  return apportion(total, pattern.weights, mode, rng);
}

TurnRatio TurnRatio::uniform(double left, double through, double right) {
  TurnRatio r;
  r.split.fill({left, through, right});
  return r;
}

void TurnRatio::validate() const {
  for (Zone z : kZones) {
    const auto& t = split[index(z)];
    for (double f : t) {
      if (!(f >= 0.0 && f <= 1.0)) {
        throw std::invalid_argument("turn ratio for " + std::string(zone_name(z)) +
                                    ": fractions must lie in [0, 1]");
      }
    }
    if (std::abs(t[0] + t[1] + t[2] - 1.0) > kWeightTolerance) {
      throw std::invalid_argument("turn ratio for " + std::string(zone_name(z)) +
                                  ": fractions must sum to 1");
    }
  }
}

TmcTable split_by_movement(const std::array<std::int64_t, 4>& zone_counts, const TurnRatio& ratios,
                           SplitMode mode, Rng& rng) {
  ratios.validate();
  TmcTable tmc;
  for (Zone z : kZones) {
    if (zone_counts[index(z)] < 0) throw std::invalid_argument("split_by_movement: negative count");
    const auto parts = apportion(zone_counts[index(z)], ratios.split[index(z)], mode, rng);
    for (Turn t : kTurns) tmc.set(make_movement(z, t), parts[static_cast<std::size_t>(t)]);
  }
  return tmc;
}

std::vector<VehiclePlan> schedule_departures(std::span<const TmcTable> hourly, Rng& rng) {
  struct Draft {
    std::int64_t depart;
    Movement movement;
    std::size_t sequence;
  };
  std::vector<Draft> drafts;
  std::uniform_int_distribution<std::int64_t> second_of_hour(0, 3599);
  for (std::size_t h = 0; h < hourly.size(); ++h) {
    const auto hour_start = static_cast<std::int64_t>(h) * 3600;
    for (Movement m : kMovements) {
      for (std::int64_t k = 0; k < hourly[h][m]; ++k) {
        drafts.push_back({hour_start + second_of_hour(rng), m, drafts.size()});
      }
    }
  }
  std::sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
    return std::tie(a.depart, a.sequence) < std::tie(b.depart, b.sequence);
  });

  // Zero-padded ordinals make string order of ids agree with departure order.
  const std::size_t width = std::to_string(drafts.empty() ? 0 : drafts.size() - 1).size();
  std::vector<VehiclePlan> plans;
  plans.reserve(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    std::string ordinal = std::to_string(i);
    plans.push_back({"veh" + std::string(width - ordinal.size(), '0') + ordinal, drafts[i].depart,
                     drafts[i].movement});
  }
  return plans;
}

MinuteTmc aggregate_per_minute(std::span<const VehiclePlan> plans, int minutes) {
  if (minutes < 0) throw std::invalid_argument("aggregate_per_minute: negative horizon");
  MinuteTmc out(static_cast<std::size_t>(minutes));
  for (const auto& p : plans) {
    if (p.depart < 0 || p.depart >= static_cast<std::int64_t>(minutes) * 60) {
      throw std::out_of_range("vehicle " + p.id + " departs outside the " +
                              std::to_string(minutes) + "-minute horizon");
    }
    out[static_cast<std::size_t>(p.depart / 60)].add(p.movement);
  }
  return out;
}

bool is_sorted_by_depart(std::span<const VehiclePlan> plans) {
  return std::is_sorted(plans.begin(), plans.end(), [](const VehiclePlan& a, const VehiclePlan& b) {
    return std::tie(a.depart, a.id) < std::tie(b.depart, b.id);
  });
}

DemandSpec DemandSpec::from_config(const KeyedConfig& cfg) {
  DemandSpec spec;
  auto& pr = spec.profile;
  pr.mu_offpeak = cfg.get_double("mu_offpeak", pr.mu_offpeak);
  pr.sigma_offpeak = cfg.get_double("sigma_offpeak", pr.sigma_offpeak);
  pr.mu_peak = cfg.get_double("mu_peak", pr.mu_peak);
  pr.sigma_peak = cfg.get_double("sigma_peak", pr.sigma_peak);
  if (cfg.contains("hours")) {
    pr.hours.clear();
    for (const auto& h : cfg.get_list("hours")) {
      if (h == "peak") {
        pr.hours.push_back(HourKind::Peak);
      } else if (h == "offpeak") {
        pr.hours.push_back(HourKind::OffPeak);
      } else {
        throw std::invalid_argument("hours: unknown hour kind '" + h + "'");
      }
    }
  }
  pr.validate();

  if (const auto p = cfg.find("pattern")) {
    if (auto named = find_pattern(*p)) {
      spec.pattern = *named;
    } else {
      const auto w = cfg.get_doubles("pattern");
      if (w.size() != 4) {
        throw std::invalid_argument("pattern: expected a name PA..PG or four weights");
      }
      spec.pattern = {"custom", {w[0], w[1], w[2], w[3]}};
    }
  }
  spec.pattern.validate();

  if (cfg.contains("turn_ratio")) {
    const auto r = cfg.get_doubles("turn_ratio");
    if (r.size() != 3) throw std::invalid_argument("turn_ratio: expected left, through, right");
    spec.turns = TurnRatio::uniform(r[0], r[1], r[2]);
  }
  for (Zone z : kZones) {
    const std::string key = std::string("turn_ratio.") + zone_letter(z);
    if (!cfg.contains(key)) continue;
    const auto r = cfg.get_doubles(key);
    if (r.size() != 3) throw std::invalid_argument(key + ": expected left, through, right");
    spec.turns.split[index(z)] = {r[0], r[1], r[2]};
  }
  spec.turns.validate();

  const std::string mode = cfg.get_string("mode", "deterministic");
  if (mode == "deterministic") {
    spec.mode = SplitMode::Deterministic;
  } else if (mode == "sampled") {
    spec.mode = SplitMode::Sampled;
  } else {
    throw std::invalid_argument("mode: expected deterministic or sampled");
  }
  const long long seed = cfg.get_int("seed", static_cast<long long>(spec.seed));
  if (seed < 0) throw std::invalid_argument("seed must be non-negative");
  spec.seed = static_cast<std::uint64_t>(seed);
  return spec;
}

Demand generate_demand(const DemandSpec& spec) {
  spec.pattern.validate();
  spec.turns.validate();

  Demand d;
  d.hourly_totals = hourly_counts(spec.profile, derive_seed(spec.seed, 0));
  Rng zone_rng(derive_seed(spec.seed, 1));
  Rng turn_rng(derive_seed(spec.seed, 2));
  Rng depart_rng(derive_seed(spec.seed, 3));
  for (std::int64_t total : d.hourly_totals) {
    const auto zones = split_by_zone(total, spec.pattern, spec.mode, zone_rng);
    d.hourly.push_back(split_by_movement(zones, spec.turns, spec.mode, turn_rng));
  }
  d.plans = schedule_departures(d.hourly, depart_rng);
  d.minutes = aggregate_per_minute(d.plans, spec.profile.minutes());
  return d;
}

}  // namespace tmcsig
