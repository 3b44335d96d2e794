#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "tmcsig/keyed_config.hpp"
#include "tmcsig/trafficgen.hpp"

using namespace tmcsig;

namespace {

std::int64_t sum4(const std::array<std::int64_t, 4>& a) { return a[0] + a[1] + a[2] + a[3]; }

ZonePattern pattern(const char* name) { return *find_pattern(name); }

}  // namespace

TEST(HourlyCounts, DefaultPeakHoursWithinFiveSigma) {
  const BimodalProfile p;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto h = hourly_counts(p, seed);
    ASSERT_EQ(h.size(), 4u);
    EXPECT_GE(h[1], 18000);
    EXPECT_LE(h[1], 22000);
    EXPECT_GE(h[2], 18000);
    EXPECT_LE(h[2], 22000);
  }
}

TEST(HourlyCounts, ZeroSigmaIsExact) {
  BimodalProfile p{100, 0, 200, 0};
  EXPECT_EQ(hourly_counts(p, 5), (std::vector<std::int64_t>{100, 200, 200, 100}));
}

TEST(HourlyCounts, Deterministic) {
  EXPECT_EQ(hourly_counts(BimodalProfile{}, 42), hourly_counts(BimodalProfile{}, 42));
}

TEST(HourlyCounts, NegativeDrawsClampToZero) {
  BimodalProfile p{-500, 10, -500, 10};
  for (auto c : hourly_counts(p, 1)) EXPECT_EQ(c, 0);
}

TEST(HourlyCounts, MeanOverSeeds) {
  // First hour is off-peak: mean of 200 draws within mu +- 4 sigma / sqrt(200).
  const BimodalProfile p;
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) sum += static_cast<double>(hourly_counts(p, seed)[0]);
  EXPECT_NEAR(sum / 200.0, 2500.0, 4.0 * 300.0 / std::sqrt(200.0));
}

TEST(Patterns, LibraryValues) {
  EXPECT_EQ(pattern("PA").weights, (std::array<double, 4>{.25, .25, .25, .25}));
  EXPECT_EQ(pattern("PB").weights, (std::array<double, 4>{.4, .4, .1, .1}));
  EXPECT_EQ(pattern("PC").weights, (std::array<double, 4>{.4, .1, .4, .1}));
  EXPECT_EQ(pattern("PE").weights, (std::array<double, 4>{.1, .4, .4, .1}));
  const auto pd = pattern("PD").weights;
  const auto pf = pattern("PF").weights;
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(pd[i], (std::array<double, 4>{.1, .4, .1, .4})[i]);
    EXPECT_DOUBLE_EQ(pf[i], (std::array<double, 4>{.1, .1, .4, .4})[i]);
  }
}

TEST(Patterns, ComplementAlgebraIsExact) {
  const auto pu = universal_pattern().weights;
  for (auto [a, b] : {std::pair{"PD", "PC"}, {"PF", "PB"}, {"PG", "PE"}}) {
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_EQ(pattern(a).weights[i] + pattern(b).weights[i], pu[i]) << a << "+" << b;
    }
  }
}

TEST(Patterns, EverySumsToOne) {
  EXPECT_EQ(pattern_library().size(), 7u);
  for (const auto& p : pattern_library()) EXPECT_NEAR(p.sum(), 1.0, 1e-12) << p.name;
  EXPECT_FALSE(find_pattern("PZ"));
}

TEST(Patterns, InvalidWeightsRejected) {
  EXPECT_THROW((ZonePattern{"x", {0.5, 0.5, 0.5, 0.5}}.validate()), std::invalid_argument);
  EXPECT_THROW((ZonePattern{"x", {1.2, -0.2, 0, 0}}.validate()), std::invalid_argument);
}

TEST(SplitByZone, Examples) {
  Rng rng(1);
  EXPECT_EQ(split_by_zone(100, pattern("PA"), SplitMode::Deterministic, rng),
            (std::array<std::int64_t, 4>{25, 25, 25, 25}));
  EXPECT_EQ(split_by_zone(0, pattern("PC"), SplitMode::Sampled, rng),
            (std::array<std::int64_t, 4>{0, 0, 0, 0}));
  EXPECT_EQ(split_by_zone(10, pattern("PB"), SplitMode::Deterministic, rng),
            (std::array<std::int64_t, 4>{4, 4, 1, 1}));
}

TEST(SplitByZone, ConservesTotalInBothModes) {
  Rng rng(3);
  std::uniform_int_distribution<std::int64_t> tot(0, 50000);
  for (int i = 0; i < 1000; ++i) {
    const auto& p = pattern_library()[static_cast<std::size_t>(i) % 7];
    const auto n = tot(rng);
    ASSERT_EQ(sum4(split_by_zone(n, p, SplitMode::Deterministic, rng)), n);
    ASSERT_EQ(sum4(split_by_zone(n, p, SplitMode::Sampled, rng)), n);
  }
}

TEST(SplitByZone, SampledMeanTracksWeights) {
  Rng rng(4);
  std::array<double, 4> acc{};
  const int trials = 400;
  for (int i = 0; i < trials; ++i) {
    const auto s = split_by_zone(1000, pattern("PB"), SplitMode::Sampled, rng);
    for (std::size_t z = 0; z < 4; ++z) acc[z] += static_cast<double>(s[z]);
  }
  // Binomial sd of the mean for p = 0.4, n = 1000 over 400 trials is about 0.77.
  EXPECT_NEAR(acc[0] / trials, 400.0, 5.0);
  EXPECT_NEAR(acc[2] / trials, 100.0, 5.0);
}

TEST(SplitByMovement, Examples) {
  Rng rng(1);
  const TmcTable t = split_by_movement({20, 0, 0, 0}, TurnRatio::defaults(), SplitMode::Deterministic, rng);
  EXPECT_EQ(t[Movement::WBL], 5);
  EXPECT_EQ(t[Movement::WBT], 12);
  EXPECT_EQ(t[Movement::WBR], 3);
  const TmcTable l = split_by_movement({7, 8, 9, 10}, TurnRatio::uniform(1, 0, 0), SplitMode::Sampled, rng);
  EXPECT_EQ(l[Movement::WBL] + l[Movement::NBL] + l[Movement::EBL] + l[Movement::SBL], 34);
}

TEST(SplitByMovement, ConservesZoneTotals) {
  Rng rng(5);
  std::uniform_int_distribution<std::int64_t> d(0, 5000);
  for (int i = 0; i < 500; ++i) {
    const std::array<std::int64_t, 4> zc{d(rng), d(rng), d(rng), d(rng)};
    for (SplitMode mode : {SplitMode::Deterministic, SplitMode::Sampled}) {
      const TmcTable t = split_by_movement(zc, TurnRatio::defaults(), mode, rng);
      for (Zone z : kZones) ASSERT_EQ(inflow_count(t, z), zc[index(z)]);
    }
  }
}

TEST(TurnRatio, Validation) {
  EXPECT_NO_THROW(TurnRatio::defaults().validate());
  EXPECT_THROW(TurnRatio::uniform(0.5, 0.6, 0.1).validate(), std::invalid_argument);
  EXPECT_THROW(TurnRatio::uniform(-0.1, 1.0, 0.1).validate(), std::invalid_argument);
}

TEST(ScheduleDepartures, SingleVehicleInHourTwo) {
  std::vector<TmcTable> hours(3);
  hours[2].add(Movement::NBT);
  Rng rng(9);
  const auto plans = schedule_departures(hours, rng);
  ASSERT_EQ(plans.size(), 1u);
  EXPECT_GE(plans[0].depart, 7200);
  EXPECT_LT(plans[0].depart, 10800);
  EXPECT_EQ(plans[0].movement, Movement::NBT);
}

TEST(ScheduleDepartures, HourIndexingMatchesRange) {
  // A vehicle in the second table (index 1) departs in [3600, 7200).
  std::vector<TmcTable> hours(2);
  hours[1].add(Movement::WBL);
  Rng rng(2);
  const auto plans = schedule_departures(hours, rng);
  ASSERT_EQ(plans.size(), 1u);
  EXPECT_GE(plans[0].depart, 3600);
  EXPECT_LT(plans[0].depart, 7200);
}

TEST(ScheduleDepartures, EmptyDemand) {
  Rng rng(1);
  EXPECT_TRUE(schedule_departures(std::vector<TmcTable>(4), rng).empty());
}

TEST(ScheduleDepartures, UniformMeanOracle) {
  // Uniform integer seconds on [0, 3600): mean 1799.5, sd about 1039.
  std::vector<TmcTable> hours(1);
  hours[0].set(Movement::EBT, 1000);
  Rng rng(17);
  const auto plans = schedule_departures(hours, rng);
  double mean = 0.0;
  for (const auto& p : plans) mean += static_cast<double>(p.depart);
  mean /= static_cast<double>(plans.size());
  EXPECT_GE(mean, 1500.0);
  EXPECT_LE(mean, 2100.0);
  EXPECT_NEAR(mean, 1799.5, 5.0 * 1039.2 / std::sqrt(1000.0));
}

TEST(ScheduleDepartures, SortedUniqueIds) {
  std::vector<TmcTable> hours(2);
  hours[0].set(Movement::WBT, 300);
  hours[1].set(Movement::SBL, 200);
  Rng rng(8);
  const auto plans = schedule_departures(hours, rng);
  EXPECT_TRUE(is_sorted_by_depart(plans));
  std::set<std::string> ids;
  for (const auto& p : plans) ids.insert(p.id);
  EXPECT_EQ(ids.size(), plans.size());
}

TEST(AggregatePerMinute, SingleVehicleAt61) {
  const std::vector<VehiclePlan> plans{{"v", 61, Movement::WBL}};
  const auto m = aggregate_per_minute(plans, 3);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0].total(), 0);
  EXPECT_EQ(m[1][Movement::WBL], 1);
  EXPECT_EQ(m[1].total(), 1);
  EXPECT_EQ(m[2].total(), 0);
}

TEST(AggregatePerMinute, EmptyIsAllZero) {
  const auto m = aggregate_per_minute({}, 5);
  ASSERT_EQ(m.size(), 5u);
  for (const auto& t : m) EXPECT_EQ(t.total(), 0);
}

TEST(AggregatePerMinute, OutsideHorizonThrows) {
  const std::vector<VehiclePlan> plans{{"v", 120, Movement::WBL}};
  EXPECT_THROW(aggregate_per_minute(plans, 2), std::out_of_range);
}

TEST(GenerateDemand, ConservationAtEveryStage) {
  for (SplitMode mode : {SplitMode::Deterministic, SplitMode::Sampled}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      DemandSpec spec;
      spec.profile = BimodalProfile{300, 40, 900, 60};
      spec.pattern = pattern_library()[seed % 7];
      spec.mode = mode;
      spec.seed = seed;
      const Demand d = generate_demand(spec);
      ASSERT_EQ(d.hourly.size(), d.hourly_totals.size());
      std::int64_t hours = 0, tables = 0, minutes = 0;
      for (std::size_t h = 0; h < d.hourly.size(); ++h) {
        ASSERT_EQ(d.hourly[h].total(), d.hourly_totals[h]);
        hours += d.hourly_totals[h];
        tables += d.hourly[h].total();
      }
      for (const auto& t : d.minutes) minutes += t.total();
      EXPECT_EQ(hours, tables);
      EXPECT_EQ(static_cast<std::int64_t>(d.plans.size()), hours);
      EXPECT_EQ(minutes, hours);
      EXPECT_EQ(d.minutes.size(), 240u);
    }
  }
}

TEST(GenerateDemand, BitIdenticalForSameSeed) {
  DemandSpec spec;
  spec.mode = SplitMode::Sampled;
  spec.seed = 99;
  const Demand a = generate_demand(spec);
  const Demand b = generate_demand(spec);
  EXPECT_EQ(a.plans, b.plans);
  EXPECT_EQ(a.minutes, b.minutes);
  spec.seed = 100;
  EXPECT_NE(generate_demand(spec).plans, a.plans);
}

TEST(DemandSpec, FromConfig) {
  const auto cfg = KeyedConfig::parse(
      "mu_offpeak = 10\nsigma_offpeak = 0\nmu_peak = 20\nsigma_peak = 0\n"
      "hours = peak, offpeak\npattern = PC\nturn_ratio = 0.2, 0.7, 0.1\n"
      "turn_ratio.S = 1, 0, 0\nmode = sampled\nseed = 7\n");
  const DemandSpec s = DemandSpec::from_config(cfg);
  EXPECT_EQ(s.profile.hours, (std::vector<HourKind>{HourKind::Peak, HourKind::OffPeak}));
  EXPECT_EQ(s.pattern.name, "PC");
  EXPECT_EQ(s.turns.split[0], (std::array<double, 3>{0.2, 0.7, 0.1}));
  EXPECT_EQ(s.turns.split[3], (std::array<double, 3>{1, 0, 0}));
  EXPECT_EQ(s.mode, SplitMode::Sampled);
  EXPECT_EQ(s.seed, 7u);
  EXPECT_EQ(generate_demand(s).hourly_totals, (std::vector<std::int64_t>{20, 10}));
}

TEST(DemandSpec, ExplicitWeightsAndErrors) {
  const DemandSpec s = DemandSpec::from_config(KeyedConfig::parse("pattern = 0.7, 0.1, 0.1, 0.1\n"));
  EXPECT_EQ(s.pattern.weights, (std::array<double, 4>{0.7, 0.1, 0.1, 0.1}));
  EXPECT_THROW(DemandSpec::from_config(KeyedConfig::parse("pattern = 0.7, 0.1\n")), std::invalid_argument);
  EXPECT_THROW(DemandSpec::from_config(KeyedConfig::parse("hours = busy\n")), std::invalid_argument);
  EXPECT_THROW(DemandSpec::from_config(KeyedConfig::parse("sigma_peak = -1\n")), std::invalid_argument);
  EXPECT_THROW(DemandSpec::from_config(KeyedConfig::parse("mode = random\n")), std::invalid_argument);
}
