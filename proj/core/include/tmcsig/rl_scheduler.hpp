#pragma once

// DQN-style green-split learner over direction-level volumes (WB, NB, EB, SB).
//
// The agent picks one of 84 allocations on the 0.1-quantized simplex (each
// direction at least 0.1). A minute's reward is the negative delay
// sum(volume_d / green_d) with green_d = share_d * (cycle - 4 * yellow).
// Q-values come from a 4-32-32-84 ReLU network trained with one-step TD
// targets drawn from a uniform replay buffer.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "tmcsig/core_model.hpp"
#include "tmcsig/random.hpp"
#include "tmcsig/signals.hpp"

namespace tmcsig {

using Vec4 = std::array<double, 4>;

/// Green split in tenths; components >= 1 and summing to exactly 10.
struct Action {
  std::array<int, 4> tenths{};

  Vec4 shares() const noexcept;
  bool operator==(const Action&) const = default;
};

/// All compositions of 10 into four positive parts, lexicographic order.
const std::vector<Action>& action_set();

/// Sum of volume_d / green_d. Throws std::invalid_argument on a non-positive green.
double delay(const Vec4& volumes, const Vec4& greens);

/// (WBL+WBT+WBR, NBL+NBT+NBR, EBL+EBT+EBR, SBL+SBT+SBR).
Vec4 direction_volumes(const TmcTable& tmc) noexcept;

/// Largest direction volume over the stream, or 1 when the stream is empty or all zero.
double normalization_constant(std::span<const TmcTable> stream) noexcept;

/// Volumes divided by `norm`, clamped to [0, 1].
Vec4 normalized_state(const TmcTable& tmc, double norm) noexcept;

/// Fully connected ReLU network with a linear output layer.
class QNetwork {
 public:
  QNetwork() = default;
  QNetwork(std::vector<std::size_t> layer_sizes, std::uint64_t seed);

  const std::vector<std::size_t>& layer_sizes() const noexcept { return sizes_; }
  std::size_t input_size() const noexcept { return sizes_.front(); }
  std::size_t output_size() const noexcept { return sizes_.back(); }

  std::vector<double> forward(std::span<const double> input) const;
  std::size_t argmax(std::span<const double> input) const;

  std::span<const double> parameters() const noexcept { return params_; }
  std::span<double> parameters() noexcept { return params_; }
  static std::size_t parameter_count(const std::vector<std::size_t>& sizes) noexcept;

  /// Adds d(0.5 * loss) / d(params) for one sample whose only non-zero output
  /// gradient is `output_grad` at `output_index`.
  void accumulate_gradient(std::span<const double> input, std::size_t output_index,
                           double output_grad, std::span<double> grad) const;

  bool operator==(const QNetwork&) const = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<double> params_;  // per layer: weights (out x in, row-major) then biases
};

/// Trained network plus the state normalization it was trained with.
struct QFunction {
  QNetwork network;
  double norm = 1.0;
  std::uint64_t seed = 0;
  int episodes = 0;

  std::size_t greedy_action(const Vec4& state) const;

  bool operator==(const QFunction&) const = default;
};

void save_qfunction(const QFunction& q, std::ostream& out);
QFunction load_qfunction(std::istream& in);
void save_qfunction(const QFunction& q, const std::filesystem::path& path);
QFunction load_qfunction(const std::filesystem::path& path);

struct StepResult {
  double reward = 0.0;
  Vec4 next_state{};
  bool done = false;
};

/// Replays a per-minute TMC stream; one step per minute.
class TmcEnvironment {
 public:
  TmcEnvironment(std::span<const TmcTable> stream, const SignalParams& params, double norm);

  Vec4 reset();
  /// Throws std::logic_error once the stream is exhausted.
  StepResult step(const Action& action);

  bool done() const noexcept { return cursor_ >= stream_.size(); }
  Vec4 state() const noexcept;

 private:
  std::span<const TmcTable> stream_;
  SignalParams params_;
  double norm_ = 1.0;
  std::size_t cursor_ = 0;
};

/// Negative delay of `action` against `tmc` at the given cycle.
double step_reward(const TmcTable& tmc, const Action& action, const SignalParams& params);

struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  double decay = 0.97;  // multiplicative, per episode

  double at(int episode) const noexcept;
};

struct RlHyperParams {
  int episodes = 100;
  double gamma = 0.9;
  double learning_rate = 1e-3;
  std::size_t hidden = 32;
  std::size_t replay_capacity = 1000;
  std::size_t batch_size = 32;
  std::size_t target_sync = 100;  // gradient steps between target-network copies
  EpsilonSchedule epsilon;
};

struct EpisodeLog {
  int episode = 0;
  double epsilon = 0.0;
  double mean_reward = 0.0;  // mean per-minute reward
};

struct TrainResult {
  QFunction q;
  std::vector<EpisodeLog> log;
};

/// Epsilon-greedy DQN training over the stream. Deterministic for a fixed seed.
TrainResult train(std::span<const TmcTable> stream, const SignalParams& params,
                  std::uint64_t seed, const RlHyperParams& hp = {});

/// Split-phasing plan from the greedy action for `tmc`.
PhasePlan rl_plan(const QFunction& q, const TmcTable& tmc, const SignalParams& params);

/// rl_plan for every minute.
SignalProgram rl_program(const QFunction& q, std::span<const TmcTable> minute_tmcs,
                         const SignalParams& params);

}  // namespace tmcsig
