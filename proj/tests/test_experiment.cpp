#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "tmcsig/csv_io.hpp"
#include "tmcsig/experiment.hpp"

using namespace tmcsig;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.intersections = {reference_geometries()[0], reference_geometries()[2]};
  s.patterns = {*find_pattern("PA"), *find_pattern("PC")};
  s.cycles = {60, 120};
  s.demand.profile.hours = {HourKind::OffPeak};
  s.demand.profile.mu_offpeak = 1500;
  s.rl.episodes = 2;
  s.seed = 9;
  return s;
}

std::string report_of(const ExperimentMatrix& m) {
  std::ostringstream out;
  write_report(out, m);
  return out.str();
}

CellResult cell(const std::string& inter, const std::string& pat, Policy p, int cycle, double nwt) {
  return {inter, pat, p, cycle, 0, nwt, 0, 0, 0};
}

}  // namespace

TEST(Experiment, GridIsCompleteAndOrdered) {
  const ExperimentSpec spec = small_spec();
  const ExperimentMatrix m = run_experiment(spec);
  ASSERT_EQ(m.rows.size(), 2u * 2u * 4u * 2u);
  std::size_t k = 0;
  for (const auto& g : spec.intersections) {
    for (const auto& p : spec.patterns) {
      for (Policy q : spec.policies) {
        for (int c : spec.cycles) {
          const CellResult& r = m.rows[k++];
          EXPECT_EQ(r.intersection, g.id);
          EXPECT_EQ(r.pattern, p.name);
          EXPECT_EQ(r.policy, q);
          EXPECT_EQ(r.cycle, c);
          EXPECT_EQ(r.injected, r.served + r.residual);
          EXPECT_NEAR(r.nwt, static_cast<double>(r.total_wait) / std::max<std::int64_t>(1, r.injected), 1e-9);
          EXPECT_GT(r.injected, 0);
        }
      }
    }
  }
}

TEST(Experiment, SameDemandAcrossPoliciesAndIntersections) {
  const ExperimentMatrix m = run_experiment(small_spec());
  for (const auto& r : m.rows) {
    if (r.pattern == m.rows.front().pattern) EXPECT_EQ(r.injected, m.rows.front().injected);
  }
}

TEST(Experiment, ReportIsDeterministic) {
  const std::string a = report_of(run_experiment(small_spec()));
  const std::string b = report_of(run_experiment(small_spec()));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')),
            "intersection,pattern,policy,cycle,total_wait,nwt,injected,served,residual");
}

TEST(Experiment, ValidationErrors) {
  ExperimentSpec s = small_spec();
  s.cycles.clear();
  EXPECT_THROW(run_experiment(s), std::invalid_argument);
  s = small_spec();
  s.cycles = {20};
  EXPECT_THROW(run_experiment(s), std::invalid_argument);
  s = small_spec();
  s.rl.episodes = 0;
  EXPECT_THROW(run_experiment(s), std::invalid_argument);
}

TEST(Winners, TieBreakAndThreshold) {
  ExperimentMatrix m;
  // Best over cycles: S 10.0, D 9.96 (within 0.5%), H 12, RL 9.9 (outside).
  m.rows = {cell("A", "PA", Policy::Static, 60, 10.0), cell("A", "PA", Policy::Static, 90, 11.0),
            cell("A", "PA", Policy::Dynamic, 60, 9.96), cell("A", "PA", Policy::Hybrid, 60, 12.0),
            cell("A", "PA", Policy::Rl, 60, 9.90),
            cell("B", "PA", Policy::Static, 60, 10.0), cell("B", "PA", Policy::Dynamic, 60, 9.96),
            cell("B", "PA", Policy::Hybrid, 60, 12.0), cell("B", "PA", Policy::Rl, 60, 9.97)};
  EXPECT_DOUBLE_EQ(best_nwt(m, "A", "PA", Policy::Static), 10.0);
  const auto w = winners(m);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0].intersection, "A");
  EXPECT_EQ(w[0].winner, Policy::Rl);
  EXPECT_EQ(w[1].intersection, "B");
  EXPECT_EQ(w[1].winner, Policy::Static);  // all of S, D, RL tie

  std::ostringstream out;
  write_winners(out, m);
  EXPECT_EQ(out.str(), "pattern,A,B\nPA,RL,S\n");
}

TEST(ExperimentSpec, FromConfig) {
  const auto cfg = KeyedConfig::parse(
      "patterns = PB, PD\npolicies = dynamic, static\ncycles = 90\nseed = 4\n"
      "rl_episodes = 3\nheadway = 2.5\nhours = peak\n");
  const auto s = ExperimentSpec::from_config(cfg, ".");
  ASSERT_EQ(s.patterns.size(), 2u);
  EXPECT_EQ(s.patterns[1].name, "PD");
  EXPECT_EQ(s.policies, (std::vector<Policy>{Policy::Dynamic, Policy::Static}));
  EXPECT_EQ(s.cycles, (std::vector<int>{90}));
  EXPECT_EQ(s.seed, 4u);
  EXPECT_EQ(s.rl.episodes, 3);
  EXPECT_DOUBLE_EQ(s.sim.saturation_headway, 2.5);
  EXPECT_EQ(s.demand.profile.hours, (std::vector<HourKind>{HourKind::Peak}));
  EXPECT_EQ(s.intersections.size(), 6u);

  EXPECT_THROW(ExperimentSpec::from_config(KeyedConfig::parse("patterns = PZ"), "."),
               std::invalid_argument);
  EXPECT_THROW(ExperimentSpec::from_config(KeyedConfig::parse("policies = fuzzy"), "."),
               std::invalid_argument);
}

TEST(ExperimentSpec, ShippedDefaultFile) {
  const std::filesystem::path dir(TMCSIG_DATA_DIR);
  const auto s = ExperimentSpec::from_config(KeyedConfig::load(dir / "experiment_default.txt"), dir);
  const ExperimentSpec def;
  EXPECT_EQ(s.intersections, def.intersections);
  EXPECT_EQ(s.cycles, def.cycles);
  EXPECT_EQ(s.policies, def.policies);
  EXPECT_EQ(s.patterns.size(), 7u);
  EXPECT_EQ(s.rl.episodes, 20);
  EXPECT_NO_THROW(s.validate());
}
