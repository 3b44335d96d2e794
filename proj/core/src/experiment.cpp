#include "tmcsig/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tmcsig/csv_io.hpp"
#include "tmcsig/random.hpp"

namespace tmcsig {

ExperimentSpec ExperimentSpec::from_config(const KeyedConfig& cfg,
                                           const std::filesystem::path& base_dir) {
  ExperimentSpec spec;
  const std::string inters = cfg.get_string("intersections", "default");
  if (inters != "default") {
    std::filesystem::path p(inters);
    if (p.is_relative()) p = base_dir / p;
    std::istringstream in(read_file(p));
    spec.intersections = read_geometries(in, p.string());
  }
  if (cfg.contains("patterns")) {
    spec.patterns.clear();
    for (const auto& name : cfg.get_list("patterns")) {
      const auto p = find_pattern(name);
      if (!p) throw std::invalid_argument("patterns: unknown pattern '" + name + "'");
      spec.patterns.push_back(*p);
    }
  }
  if (cfg.contains("policies")) {
    spec.policies.clear();
    for (const auto& name : cfg.get_list("policies")) {
      const auto p = parse_policy(name);
      if (!p) throw std::invalid_argument("policies: unknown policy '" + name + "'");
      spec.policies.push_back(*p);
    }
  }
  if (cfg.contains("cycles")) {
    spec.cycles.clear();
    for (const auto& c : cfg.get_list("cycles")) spec.cycles.push_back(static_cast<int>(parse_int(c)));
  }
  const long long seed = cfg.get_int("seed", static_cast<long long>(spec.seed));
  if (seed < 0) throw std::invalid_argument("seed must be non-negative");
  spec.seed = static_cast<std::uint64_t>(seed);
  spec.yellow = static_cast<int>(cfg.get_int("yellow", spec.yellow));
  spec.min_green = static_cast<int>(cfg.get_int("min_green", spec.min_green));
  spec.rl.episodes = static_cast<int>(cfg.get_int("rl_episodes", spec.rl.episodes));
  spec.sim.saturation_headway = cfg.get_double("headway", spec.sim.saturation_headway);
  spec.sim.permissive_left_factor =
      cfg.get_double("permissive_left_factor", spec.sim.permissive_left_factor);
  spec.demand = DemandSpec::from_config(cfg);
  spec.validate();
  return spec;
}

void ExperimentSpec::validate() const {
  if (intersections.empty() || patterns.empty() || policies.empty() || cycles.empty()) {
    throw std::invalid_argument("experiment: every grid axis needs at least one entry");
  }
  for (const auto& g : intersections) g.validate();
  for (const auto& p : patterns) p.validate();
  for (int c : cycles) SignalParams{c, yellow, min_green}.validate();
  demand.profile.validate();
  demand.turns.validate();
  sim.validate();
  if (rl.episodes < 1) throw std::invalid_argument("experiment: rl_episodes must be positive");
}

namespace {

std::string cell_name(const std::string& inter, const std::string& pattern, Policy policy,
                      int cycle) {
  return "(" + inter + ", " + pattern + ", " + std::string(policy_name(policy)) + ", " +
         std::to_string(cycle) + ")";
}

}  // namespace

ExperimentMatrix run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t ni = spec.intersections.size();
  const std::size_t np = spec.patterns.size();
  const std::size_t nq = spec.policies.size();
  const std::size_t nc = spec.cycles.size();

  ExperimentMatrix matrix;
  matrix.rows.resize(ni * np * nq * nc);
  auto slot = [&](std::size_t i, std::size_t p, std::size_t q, std::size_t c) -> CellResult& {
    return matrix.rows[((i * np + p) * nq + q) * nc + c];
  };

  for (std::size_t p = 0; p < np; ++p) {
    DemandSpec ds = spec.demand;
    ds.pattern = spec.patterns[p];
    ds.seed = derive_seed(spec.seed, p);
    Demand demand;
    try {
      demand = generate_demand(ds);
    } catch (const std::exception& e) {
      throw std::runtime_error("experiment: demand for pattern " + ds.pattern.name + ": " + e.what());
    }
    SimConfig cfg = spec.sim;
    cfg.horizon = static_cast<std::int64_t>(demand.minutes.size()) * 60;

    for (std::size_t c = 0; c < nc; ++c) {
      EvaluateOptions opts;
      opts.signal = {spec.cycles[c], spec.yellow, spec.min_green};
      opts.rl = spec.rl;
      opts.rl_seed = derive_seed(ds.seed, 100 + static_cast<std::uint64_t>(spec.cycles[c]));
      for (std::size_t q = 0; q < nq; ++q) {
        const Policy policy = spec.policies[q];
        SignalProgram program;
        try {
          program = plan_program(demand.minutes, policy, opts);
        } catch (const std::exception& e) {
          throw std::runtime_error("experiment: cell " +
                                   cell_name("*", ds.pattern.name, policy, spec.cycles[c]) +
                                   " failed: " + e.what());
        }
        for (std::size_t i = 0; i < ni; ++i) {
          const auto& geo = spec.intersections[i];
          CellResult& cell = slot(i, p, q, c);
          try {
            const SimResult r = run(geo, demand.plans, program, cfg);
            cell = {geo.id, ds.pattern.name, policy, spec.cycles[c], r.total_wait, r.nwt,
                    r.injected, r.served, r.residual};
          } catch (const std::exception& e) {
            throw std::runtime_error("experiment: cell " +
                                     cell_name(geo.id, ds.pattern.name, policy, spec.cycles[c]) +
                                     " failed: " + e.what());
          }
        }
      }
    }
  }
  return matrix;
}

void write_report(std::ostream& out, const ExperimentMatrix& matrix) {
  out << "intersection,pattern,policy,cycle,total_wait,nwt,injected,served,residual\n";
  for (const auto& r : matrix.rows) {
    out << r.intersection << ',' << r.pattern << ',' << policy_name(r.policy) << ',' << r.cycle
        << ',' << r.total_wait << ',' << format_double(r.nwt) << ',' << r.injected << ','
        << r.served << ',' << r.residual << '\n';
  }
}

double best_nwt(const ExperimentMatrix& m, const std::string& intersection,
                const std::string& pattern, Policy policy) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : m.rows) {
    if (r.intersection == intersection && r.pattern == pattern && r.policy == policy) {
      best = std::min(best, r.nwt);
    }
  }
  return best;
}

std::vector<WinnerCell> winners(const ExperimentMatrix& m) {
  // Axes in first-seen order, which is the grid order.
  std::vector<std::string> inters, patterns;
  std::vector<Policy> policies;
  auto note = [](auto& v, const auto& x) {
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
  };
  for (const auto& r : m.rows) {
    note(inters, r.intersection);
    note(patterns, r.pattern);
    note(policies, r.policy);
  }
  std::sort(policies.begin(), policies.end());

  std::vector<WinnerCell> out;
  for (const auto& pat : patterns) {
    for (const auto& inter : inters) {
      double lo = std::numeric_limits<double>::infinity();
      for (Policy q : policies) lo = std::min(lo, best_nwt(m, inter, pat, q));
      for (Policy q : policies) {
        if (best_nwt(m, inter, pat, q) <= lo * (1.0 + kWinnerTieThreshold)) {
          out.push_back({inter, pat, q});
          break;
        }
      }
    }
  }
  return out;
}

void write_winners(std::ostream& out, const ExperimentMatrix& m) {
  const auto w = winners(m);
  std::vector<std::string> inters;
  for (const auto& c : w) {
    if (std::find(inters.begin(), inters.end(), c.intersection) == inters.end()) {
      inters.push_back(c.intersection);
    }
  }
  out << "pattern";
  for (const auto& i : inters) out << ',' << i;
  out << '\n';
  for (std::size_t k = 0; k < w.size(); k += inters.size()) {
    out << w[k].pattern;
    for (std::size_t j = 0; j < inters.size(); ++j) out << ',' << policy_letter(w[k + j].winner);
    out << '\n';
  }
}

}  // namespace tmcsig
