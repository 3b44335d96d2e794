// tmcsig command-line front end.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tmcsig/csv_io.hpp"
#include "tmcsig/experiment.hpp"
#include "tmcsig/keyed_config.hpp"
#include "tmcsig/reference_data.hpp"
#include "tmcsig/rl_scheduler.hpp"
#include "tmcsig/signals.hpp"
#include "tmcsig/sim.hpp"
#include "tmcsig/sumo.hpp"
#include "tmcsig/trafficgen.hpp"
#include "tmcsig/trajectory.hpp"

namespace fs = std::filesystem;
using namespace tmcsig;

namespace {

struct Common {
  std::optional<long long> seed;
  int cycle = 90;
  int yellow = 3;
  int min_green = 5;
  std::string pattern;
  std::string policy = "static";
  std::string geometry;
  std::string intersection;
  std::string out_dir = ".";
};

SignalParams signal_params(const Common& c) {
  SignalParams p{c.cycle, c.yellow, c.min_green};
  p.validate();
  return p;
}

Policy policy_arg(const std::string& name) {
  const auto p = parse_policy(name);
  if (!p) throw std::invalid_argument("unknown policy '" + name + "' (static, dynamic, hybrid, rl)");
  return *p;
}

fs::path out_path(const Common& c, const std::string& name) {
  fs::create_directories(c.out_dir);
  return fs::path(c.out_dir) / name;
}

template <typename F>
void write_to(const fs::path& path, F&& body) {
  std::ostringstream out;
  body(out);
  write_file(path, out.str());
  std::cout << "wrote " << path.string() << '\n';
}

IntersectionGeometry pick_geometry(const Common& c) {
  std::vector<IntersectionGeometry> geos;
  if (c.geometry.empty()) {
    geos = reference_geometries();
  } else {
    std::istringstream in(read_file(c.geometry));
    geos = read_geometries(in, c.geometry);
  }
  if (geos.empty()) throw std::invalid_argument("geometry file has no intersections");
  if (c.intersection.empty()) return geos.front();
  for (const auto& g : geos) {
    if (g.id == c.intersection) return g;
  }
  throw std::invalid_argument("intersection '" + c.intersection + "' not found");
}

std::vector<VehiclePlan> load_plans(const std::string& path) {
  std::istringstream in(read_file(path));
  auto plans = read_plans(in, path);
  if (!is_sorted_by_depart(plans)) throw std::invalid_argument(path + ": plans are not sorted by depart");
  return plans;
}

MinuteTmc load_tmc(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_minute_tmc(in, path);
}

PhaseLayout layout_for(Policy p) {
  return p == Policy::Rl ? PhaseLayout::Split : PhaseLayout::ProtectedLeft;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Turning-movement demand, signal timing and queue simulation"};
  app.require_subcommand(1);
  Common c;

  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", c.seed, "Random seed"); };
  auto add_signal = [&](CLI::App* sub) {
    sub->add_option("--cycle", c.cycle, "Cycle length in seconds")->capture_default_str();
    sub->add_option("--yellow", c.yellow, "Yellow per phase in seconds")->capture_default_str();
    sub->add_option("--min-green", c.min_green, "Minimum green in seconds")->capture_default_str();
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out-dir", c.out_dir, "Output directory")->capture_default_str();
  };
  auto add_geometry = [&](CLI::App* sub) {
    sub->add_option("--geometry", c.geometry, "Geometry CSV (default: the six surveyed intersections)");
    sub->add_option("--intersection", c.intersection, "Intersection id (default: first in file)");
  };

  // gen
  std::string demand_file;
  auto* gen = app.add_subcommand("gen", "Generate vehicle plans and per-minute TMC");
  gen->add_option("--config", demand_file, "Demand spec file (key = value)");
  gen->add_option("--pattern", c.pattern, "Zone pattern PA..PG");
  add_seed(gen);
  add_out(gen);
  gen->callback([&] {
    DemandSpec spec;
    if (!demand_file.empty()) spec = DemandSpec::from_config(KeyedConfig::load(demand_file));
    if (!c.pattern.empty()) {
      const auto p = find_pattern(c.pattern);
      if (!p) throw std::invalid_argument("unknown pattern '" + c.pattern + "'");
      spec.pattern = *p;
    }
    if (c.seed) {
      if (*c.seed < 0) throw std::invalid_argument("seed must be non-negative");
      spec.seed = static_cast<std::uint64_t>(*c.seed);
    }
    const Demand d = generate_demand(spec);
    write_to(out_path(c, "plans.csv"), [&](std::ostream& o) { write_plans(o, d.plans); });
    write_to(out_path(c, "tmc.csv"), [&](std::ostream& o) { write_minute_tmc(o, d.minutes); });
    std::cout << d.plans.size() << " vehicles over " << d.minutes.size() << " minutes\n";
  });

  // tmc
  std::string traj_file, paths_file;
  double eps = 25.0, min_sim = 0.6;
  auto* tmc = app.add_subcommand("tmc", "Classify trajectories against typical paths into a TMC");
  tmc->add_option("--trajectories", traj_file, "Trajectory CSV")->required();
  tmc->add_option("--paths", paths_file, "Typical path CSV")->required();
  tmc->add_option("--eps", eps, "LCSS match radius in pixels")->capture_default_str();
  tmc->add_option("--min-sim", min_sim, "Minimum similarity")->capture_default_str();
  add_out(tmc);
  tmc->callback([&] {
    std::istringstream tin(read_file(traj_file));
    const auto trajs = read_trajectories(tin, traj_file);
    std::istringstream pin(read_file(paths_file));
    const auto paths = read_typical_paths(pin, paths_file);
    ClassifyOptions opts;
    opts.lcss.eps = eps;
    opts.min_similarity = min_sim;
    const MovementCount mc = count_movements(trajs, paths, opts);
    const std::vector<TmcTable> one{mc.tmc};
    write_to(out_path(c, "tmc.csv"), [&](std::ostream& o) { write_minute_tmc(o, one); });
    std::cout << "matched " << mc.matched << ", unmatched " << mc.unmatched << ", pedestrians "
              << mc.pedestrians << '\n';
  });

  // capacity
  std::string observed_file;
  auto* cap = app.add_subcommand("capacity", "Zone capacity rates from lane counts and an observed TMC");
  cap->add_option("--tmc", observed_file, "Labelled TMC CSV (id,WBL,...,SBR); default: surveyed counts");
  cap->add_option("--geometry", c.geometry, "Geometry CSV (default: the six surveyed intersections)");
  add_out(cap);
  cap->callback([&] {
    std::vector<IntersectionGeometry> geos = reference_geometries();
    if (!c.geometry.empty()) {
      std::istringstream in(read_file(c.geometry));
      geos = read_geometries(in, c.geometry);
    }
    std::vector<std::pair<std::string, TmcTable>> observed;
    if (observed_file.empty()) {
      for (const auto& r : reference_intersections()) observed.emplace_back(r.geometry.id, r.observed);
    } else {
      std::istringstream in(read_file(observed_file));
      observed = read_labelled_tmc(in, observed_file);
    }
    std::vector<std::pair<std::string, CapacityReport>> rows;
    for (const auto& [id, t] : observed) {
      const auto g = std::find_if(geos.begin(), geos.end(), [&](const auto& x) { return x.id == id; });
      if (g == geos.end()) throw std::invalid_argument("no geometry for '" + id + "'");
      rows.emplace_back(id, zone_capacity_rates(*g, t));
    }
    write_to(out_path(c, "capacity.csv"), [&](std::ostream& o) { write_capacity(o, rows); });
  });

  // plan
  std::string tmc_file, q_file;
  int episodes = 100;
  auto* plan = app.add_subcommand("plan", "Build a per-minute signal program from a TMC");
  plan->add_option("--tmc", tmc_file, "Per-minute TMC CSV")->required();
  plan->add_option("--policy", c.policy, "static, dynamic, hybrid or rl")->capture_default_str();
  plan->add_option("--q", q_file, "Trained Q-function for --policy rl (trained on the TMC if absent)");
  plan->add_option("--episodes", episodes, "Training episodes when no Q-function is given")
      ->capture_default_str();
  add_signal(plan);
  add_seed(plan);
  add_out(plan);
  plan->callback([&] {
    const MinuteTmc minutes = load_tmc(tmc_file);
    EvaluateOptions opts;
    opts.signal = signal_params(c);
    opts.rl.episodes = episodes;
    opts.rl_seed = static_cast<std::uint64_t>(c.seed.value_or(1));
    std::optional<QFunction> q;
    if (!q_file.empty()) {
      q = load_qfunction(fs::path(q_file));
      opts.q = &*q;
    }
    const SignalProgram program = plan_program(minutes, policy_arg(c.policy), opts);
    write_to(out_path(c, "program.csv"), [&](std::ostream& o) { write_program(o, program); });
  });

  // simulate
  std::string plans_file, program_file;
  auto* simulate = app.add_subcommand("simulate", "Simulate one intersection under one policy");
  simulate->add_option("--plans", plans_file, "Vehicle plan CSV")->required();
  simulate->add_option("--program", program_file, "Signal program CSV (default: built from the plans)");
  simulate->add_option("--policy", c.policy, "static, dynamic, hybrid or rl")->capture_default_str();
  simulate->add_option("--episodes", episodes, "RL training episodes")->capture_default_str();
  add_geometry(simulate);
  add_signal(simulate);
  add_seed(simulate);
  add_out(simulate);
  simulate->callback([&] {
    const IntersectionGeometry geo = pick_geometry(c);
    const auto plans = load_plans(plans_file);
    const Policy policy = policy_arg(c.policy);
    SimResult res;
    if (!program_file.empty()) {
      std::istringstream in(read_file(program_file));
      const SignalProgram program = read_program(in, layout_for(policy), program_file);
      res = run(geo, plans, program, SimConfig{});
    } else {
      EvaluateOptions opts;
      opts.signal = signal_params(c);
      opts.rl.episodes = episodes;
      opts.rl_seed = static_cast<std::uint64_t>(c.seed.value_or(1));
      res = evaluate(geo, plans, policy, opts, SimConfig{});
    }
    write_to(out_path(c, "summary.csv"), [&](std::ostream& o) { write_sim_summary(o, res); });
    write_to(out_path(c, "queues.csv"), [&](std::ostream& o) { write_queue_series(o, res); });
    std::cout << geo.id << ' ' << policy_name(policy) << " NWT " << format_double(res.nwt) << '\n';
  });

  // export-sumo
  std::string layout_name = "protected-left";
  auto* sumo = app.add_subcommand("export-sumo", "Write SUMO route and tlLogic files");
  sumo->add_option("--plans", plans_file, "Vehicle plan CSV");
  sumo->add_option("--program", program_file, "Signal program CSV");
  sumo->add_option("--layout", layout_name, "Phase layout of the program: protected-left or split")
      ->capture_default_str();
  add_out(sumo);
  sumo->callback([&] {
    if (plans_file.empty() && program_file.empty()) {
      throw std::invalid_argument("export-sumo needs --plans, --program or both");
    }
    if (!plans_file.empty()) {
      const auto plans = load_plans(plans_file);
      write_to(out_path(c, "routes.rou.xml"), [&](std::ostream& o) { o << emit_routes(plans); });
    }
    if (!program_file.empty()) {
      PhaseLayout layout;
      if (layout_name == "protected-left") {
        layout = PhaseLayout::ProtectedLeft;
      } else if (layout_name == "split") {
        layout = PhaseLayout::Split;
      } else {
        throw std::invalid_argument("unknown layout '" + layout_name + "'");
      }
      std::istringstream in(read_file(program_file));
      const TlsExport tls = emit_tls(read_program(in, layout, program_file));
      write_to(out_path(c, "tls.add.xml"), [&](std::ostream& o) { o << render_tls(tls.programs); });
      write_to(out_path(c, "tls_schedule.csv"), [&](std::ostream& o) { write_switch_schedule(o, tls); });
    }
  });

  // experiment
  std::string spec_file;
  auto* exp = app.add_subcommand("experiment", "Run the policy comparison grid");
  exp->add_option("--spec", spec_file, "Experiment spec file (default: built-in grid)");
  add_seed(exp);
  add_out(exp);
  exp->callback([&] {
    ExperimentSpec spec;
    if (!spec_file.empty()) {
      spec = ExperimentSpec::from_config(KeyedConfig::load(spec_file),
                                         fs::path(spec_file).parent_path());
    }
    if (c.seed) {
      if (*c.seed < 0) throw std::invalid_argument("seed must be non-negative");
      spec.seed = static_cast<std::uint64_t>(*c.seed);
    }
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentMatrix m = run_experiment(spec);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_to(out_path(c, "report.csv"), [&](std::ostream& o) { write_report(o, m); });
    write_to(out_path(c, "winners.csv"), [&](std::ostream& o) { write_winners(o, m); });
    std::cout << m.rows.size() << " cells in " << format_double(secs) << " s\n";
  });

  // rl-train
  auto* rl = app.add_subcommand("rl-train", "Train the Q-network on a per-minute TMC");
  rl->add_option("--tmc", tmc_file, "Per-minute TMC CSV")->required();
  rl->add_option("--episodes", episodes, "Training episodes")->capture_default_str();
  add_signal(rl);
  add_seed(rl);
  add_out(rl);
  rl->callback([&] {
    const MinuteTmc minutes = load_tmc(tmc_file);
    RlHyperParams hp;
    hp.episodes = episodes;
    const TrainResult tr =
        train(minutes, signal_params(c), static_cast<std::uint64_t>(c.seed.value_or(1)), hp);
    const fs::path qpath = out_path(c, "qfunction.txt");
    save_qfunction(tr.q, qpath);
    std::cout << "wrote " << qpath.string() << '\n';
    write_to(out_path(c, "training_log.csv"), [&](std::ostream& o) {
      o << "episode,epsilon,mean_reward\n";
      for (const auto& e : tr.log) {
        o << e.episode << ',' << format_double(e.epsilon) << ',' << format_double(e.mean_reward) << '\n';
      }
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "tmcsig: error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
