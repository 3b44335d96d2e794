#include "tmcsig/rl_scheduler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tmcsig/keyed_config.hpp"

namespace tmcsig {

Vec4 Action::shares() const noexcept {
  return {tenths[0] / 10.0, tenths[1] / 10.0, tenths[2] / 10.0, tenths[3] / 10.0};
}

const std::vector<Action>& action_set() {
  static const std::vector<Action> actions = [] {
    std::vector<Action> out;
    for (int a = 1; a <= 7; ++a) {
      for (int b = 1; a + b <= 8; ++b) {
        for (int c = 1; a + b + c <= 9; ++c) out.push_back({{a, b, c, 10 - a - b - c}});
      }
    }
    return out;
  }();
  return actions;
}

double delay(const Vec4& volumes, const Vec4& greens) {
  double sum = 0.0;
  for (std::size_t d = 0; d < 4; ++d) {
    if (!(greens[d] > 0.0)) throw std::invalid_argument("delay: green times must be positive");
    sum += volumes[d] / greens[d];
  }
  return sum;
}

Vec4 direction_volumes(const TmcTable& tmc) noexcept {
  Vec4 v{};
  for (Zone z : kZones) v[index(z)] = static_cast<double>(inflow_count(tmc, z));
  return v;
}

double normalization_constant(std::span<const TmcTable> stream) noexcept {
  double norm = 0.0;
  for (const auto& t : stream) {
    for (double v : direction_volumes(t)) norm = std::max(norm, v);
  }
  return norm > 0.0 ? norm : 1.0;
}

Vec4 normalized_state(const TmcTable& tmc, double norm) noexcept {
  Vec4 s = direction_volumes(tmc);
  for (double& x : s) x = std::clamp(x / norm, 0.0, 1.0);
  return s;
}

// ---------------------------------------------------------------------------
// QNetwork

QNetwork::QNetwork(std::vector<std::size_t> layer_sizes, std::uint64_t seed)
    : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("QNetwork: need at least two layers");
  for (std::size_t s : sizes_) {
    if (s == 0) throw std::invalid_argument("QNetwork: empty layer");
  }
  params_.assign(parameter_count(sizes_), 0.0);
  Rng rng(seed);
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const std::size_t in = sizes_[l], out = sizes_[l + 1];
    const bool last = l + 2 == sizes_.size();
    // He-uniform for ReLU layers, LeCun-uniform for the linear head.
    const double limit = std::sqrt((last ? 3.0 : 6.0) / static_cast<double>(in));
    std::uniform_real_distribution<double> init(-limit, limit);
    for (std::size_t k = 0; k < in * out; ++k) params_[offset + k] = init(rng);
    offset += in * out + out;  // biases start at zero
  }
}

std::size_t QNetwork::parameter_count(const std::vector<std::size_t>& sizes) noexcept {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) n += sizes[l] * sizes[l + 1] + sizes[l + 1];
  return n;
}

namespace {

// Forward pass keeping every layer's post-activation output.
std::vector<std::vector<double>> forward_all(const std::vector<std::size_t>& sizes,
                                             std::span<const double> params,
                                             std::span<const double> input) {
  if (input.size() != sizes.front()) throw std::invalid_argument("QNetwork: wrong input size");
  std::vector<std::vector<double>> acts;
  acts.reserve(sizes.size());
  acts.emplace_back(input.begin(), input.end());
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const std::size_t in = sizes[l], out = sizes[l + 1];
    const bool last = l + 2 == sizes.size();
    const double* w = params.data() + offset;
    const double* b = w + in * out;
    const auto& x = acts.back();
    std::vector<double> y(out);
    for (std::size_t o = 0; o < out; ++o) {
      double z = b[o];
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) z += row[i] * x[i];
      y[o] = last ? z : std::max(z, 0.0);
    }
    acts.push_back(std::move(y));
    offset += in * out + out;
  }
  return acts;
}

}  // namespace

std::vector<double> QNetwork::forward(std::span<const double> input) const {
  return forward_all(sizes_, params_, input).back();
}

std::size_t QNetwork::argmax(std::span<const double> input) const {
  const auto q = forward(input);
  return static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin());
}

void QNetwork::accumulate_gradient(std::span<const double> input, std::size_t output_index,
                                   double output_grad, std::span<double> grad) const {
  const auto acts = forward_all(sizes_, params_, input);
  const std::size_t layers = sizes_.size() - 1;

  std::vector<std::size_t> offsets(layers);
  for (std::size_t l = 0, off = 0; l < layers; ++l) {
    offsets[l] = off;
    off += sizes_[l] * sizes_[l + 1] + sizes_[l + 1];
  }

  std::vector<double> delta(sizes_.back(), 0.0);
  delta.at(output_index) = output_grad;
  for (std::size_t l = layers; l-- > 0;) {
    const std::size_t in = sizes_[l], out = sizes_[l + 1];
    const double* w = params_.data() + offsets[l];
    double* gw = grad.data() + offsets[l];
    double* gb = gw + in * out;
    const auto& x = acts[l];
    std::vector<double> prev(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      gb[o] += d;
      for (std::size_t i = 0; i < in; ++i) {
        gw[o * in + i] += d * x[i];
        prev[i] += d * w[o * in + i];
      }
    }
    if (l > 0) {
      for (std::size_t i = 0; i < in; ++i) {
        if (acts[l][i] <= 0.0) prev[i] = 0.0;  // ReLU
      }
    }
    delta = std::move(prev);
  }
}

std::size_t QFunction::greedy_action(const Vec4& state) const { return network.argmax(state); }

// ---------------------------------------------------------------------------
// Snapshots

namespace {

constexpr std::string_view kSnapshotMagic = "tmcsig-qfunction 1";

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void save_qfunction(const QFunction& q, std::ostream& out) {
  out << kSnapshotMagic << '\n' << "layers";
  for (std::size_t s : q.network.layer_sizes()) out << ' ' << s;
  out << '\n'
      << "seed " << q.seed << '\n'
      << "episodes " << q.episodes << '\n'
      << "norm " << shortest(q.norm) << '\n'
      << "params " << q.network.parameters().size() << '\n';
  for (double p : q.network.parameters()) out << shortest(p) << '\n';
}

QFunction load_qfunction(std::istream& in) {
  auto fail = [](const std::string& what) -> QFunction {
    throw std::runtime_error("weight snapshot: " + what);
  };
  std::string line;
  if (!std::getline(in, line) || trim(line) != kSnapshotMagic) return fail("bad header");

  auto field = [&](std::string_view key) {
    if (!std::getline(in, line)) throw std::runtime_error("weight snapshot: missing " + std::string(key));
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    if (k != key) throw std::runtime_error("weight snapshot: expected " + std::string(key));
    std::string rest;
    std::getline(ls, rest);
    return trim(rest);
  };

  std::vector<std::size_t> sizes;
  {
    std::istringstream ls(field("layers"));
    std::size_t s = 0;
    while (ls >> s) sizes.push_back(s);
  }
  QFunction q;
  {
    const std::string text = field("seed");
    const auto res = std::from_chars(text.data(), text.data() + text.size(), q.seed);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return fail("bad seed");
  }
  q.episodes = static_cast<int>(parse_int(field("episodes")));
  q.norm = parse_double(field("norm"));
  const auto count = static_cast<std::size_t>(parse_int(field("params")));
  if (sizes.size() < 2 || count != QNetwork::parameter_count(sizes)) {
    return fail("layer sizes do not match parameter count");
  }
  q.network = QNetwork(sizes, 0);
  auto params = q.network.parameters();
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) return fail("truncated parameter list");
    params[i] = parse_double(line);
  }
  return q;
}

void save_qfunction(const QFunction& q, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  save_qfunction(q, out);
}

QFunction load_qfunction(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_qfunction(in);
}

// ---------------------------------------------------------------------------
// Environment

double step_reward(const TmcTable& tmc, const Action& action, const SignalParams& params) {
  const Vec4 shares = action.shares();
  Vec4 greens{};
  for (std::size_t d = 0; d < 4; ++d) greens[d] = shares[d] * params.usable_green();
  return -delay(direction_volumes(tmc), greens);
}

TmcEnvironment::TmcEnvironment(std::span<const TmcTable> stream, const SignalParams& params,
                               double norm)
    : stream_(stream), params_(params), norm_(norm > 0.0 ? norm : 1.0) {
  params_.validate();
}

Vec4 TmcEnvironment::reset() {
  cursor_ = 0;
  return state();
}

Vec4 TmcEnvironment::state() const noexcept {
  if (cursor_ >= stream_.size()) return {};
  return normalized_state(stream_[cursor_], norm_);
}

StepResult TmcEnvironment::step(const Action& action) {
  if (done()) throw std::logic_error("TmcEnvironment::step past the end of the stream");
  StepResult r;
  r.reward = step_reward(stream_[cursor_], action, params_);
  ++cursor_;
  r.done = done();
  r.next_state = state();
  return r;
}

double EpsilonSchedule::at(int episode) const noexcept {
  return std::max(end, start * std::pow(decay, static_cast<double>(episode)));
}

// ---------------------------------------------------------------------------
// Training

namespace {

struct Transition {
  Vec4 state;
  std::size_t action;
  double reward;
  Vec4 next_state;
  bool done;
};

class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) { data_.reserve(capacity); }

  void push(const Transition& t) {
    if (data_.size() < capacity_) {
      data_.push_back(t);
    } else {
      data_[next_] = t;
    }
    next_ = (next_ + 1) % capacity_;
  }
  std::size_t size() const noexcept { return data_.size(); }
  const Transition& operator[](std::size_t i) const { return data_[i]; }

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> data_;
};

class Adam {
 public:
  explicit Adam(std::size_t n, double lr) : lr_(lr), m_(n, 0.0), v_(n, 0.0) {}

  void step(std::span<double> params, std::span<const double> grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, t_);
    const double c2 = 1.0 - std::pow(kBeta2, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = kBeta1 * m_[i] + (1.0 - kBeta1) * grad[i];
      v_[i] = kBeta2 * v_[i] + (1.0 - kBeta2) * grad[i] * grad[i];
      params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + 1e-8);
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  double lr_;
  double t_ = 0.0;
  std::vector<double> m_, v_;
};

}  // namespace

TrainResult train(std::span<const TmcTable> stream, const SignalParams& params,
                  std::uint64_t seed, const RlHyperParams& hp) {
  if (hp.episodes < 1) throw std::invalid_argument("train: need at least one episode");
  if (hp.target_sync == 0) throw std::invalid_argument("train: target_sync must be positive");
  if (hp.batch_size == 0 || hp.replay_capacity < hp.batch_size) {
    throw std::invalid_argument("train: replay capacity must hold at least one batch");
  }
  params.validate();
  const auto& actions = action_set();

  TrainResult result;
  result.q.norm = normalization_constant(stream);
  result.q.seed = seed;
  result.q.episodes = hp.episodes;
  result.q.network = QNetwork({4, hp.hidden, hp.hidden, actions.size()}, derive_seed(seed, 0));
  if (stream.empty()) return result;

  // TD targets use delay against normalized volumes in units of the usable
  // green; a positive rescaling of the reward that keeps Q-values near 1.
  const double reward_scale = static_cast<double>(params.usable_green()) / result.q.norm;

  Rng rng(derive_seed(seed, 1));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_action(0, actions.size() - 1);

  QNetwork& net = result.q.network;
  QNetwork target_net = net;  // frozen copy for TD targets
  std::size_t updates = 0;
  Adam opt(net.parameters().size(), hp.learning_rate);
  ReplayBuffer replay(hp.replay_capacity);
  std::vector<double> grad(net.parameters().size());
  TmcEnvironment env(stream, params, result.q.norm);

  for (int episode = 0; episode < hp.episodes; ++episode) {
    const double eps = hp.epsilon.at(episode);
    Vec4 s = env.reset();
    double total = 0.0;
    int steps = 0;
    while (!env.done()) {
      const std::size_t a = coin(rng) < eps ? pick_action(rng) : net.argmax(s);
      const StepResult r = env.step(actions[a]);
      replay.push({s, a, r.reward * reward_scale, r.next_state, r.done});
      total += r.reward;
      ++steps;
      s = r.next_state;

      if (replay.size() >= hp.batch_size) {
        std::fill(grad.begin(), grad.end(), 0.0);
        std::uniform_int_distribution<std::size_t> pick(0, replay.size() - 1);
        for (std::size_t k = 0; k < hp.batch_size; ++k) {
          const Transition& t = replay[pick(rng)];
          double target = t.reward;
          if (!t.done) {
            const auto next_q = target_net.forward(t.next_state);
            target += hp.gamma * *std::max_element(next_q.begin(), next_q.end());
          }
          const double q = net.forward(t.state)[t.action];
          // Huber loss with unit threshold.
          const double err = std::clamp(q - target, -1.0, 1.0);
          net.accumulate_gradient(t.state, t.action, err / static_cast<double>(hp.batch_size),
                                  grad);
        }
        opt.step(net.parameters(), grad);
        if (++updates % hp.target_sync == 0) target_net = net;
      }
    }
    result.log.push_back({episode, eps, steps > 0 ? total / steps : 0.0});
  }
  return result;
}

PhasePlan rl_plan(const QFunction& q, const TmcTable& tmc, const SignalParams& params) {
  params.validate();
  const Action& action = action_set().at(q.greedy_action(normalized_state(tmc, q.norm)));
  const Vec4 shares = action.shares();
  std::array<double, 4> targets{};
  for (std::size_t d = 0; d < 4; ++d) targets[d] = shares[d] * params.usable_green();
  return make_plan(PhaseLayout::Split,
                   allocate_greens(targets, params.usable_green(), params.min_green),
                   params.yellow);
}

SignalProgram rl_program(const QFunction& q, std::span<const TmcTable> minute_tmcs,
                         const SignalParams& params) {
  SignalProgram program;
  program.minutes.reserve(minute_tmcs.size());
  for (const auto& t : minute_tmcs) program.minutes.push_back(rl_plan(q, t, params));
  return program;
}

}  // namespace tmcsig
