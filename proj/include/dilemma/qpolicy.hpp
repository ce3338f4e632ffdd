#ifndef DILEMMA_QPOLICY_HPP
#define DILEMMA_QPOLICY_HPP

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dilemma/core.hpp"
#include "dilemma/nn.hpp"
#include "dilemma/rng.hpp"

namespace dilemma {

class NoValidAction : public Error {
 public:
  using Error::Error;
};

// Anything that maps a state to per-action values and can take a
// gradient step on a batch of (state, action, target) samples.
template <typename F>
concept ValueFunction = requires(const F& cf, F& f, std::span<const double> s, std::span<const Sample> b, double lr) {
  { forward(cf, s) } -> std::convertible_to<std::vector<double>>;
  { cf.output_dim() } -> std::convertible_to<std::size_t>;
  apply_grad_step(f, b, lr);
};

struct Transition {
  std::vector<double> state;
  std::size_t action_index = 0;
  double reward = 0.0;
  std::optional<std::vector<double>> next_state;  // nullopt is Terminal

  bool terminal() const { return !next_state.has_value(); }
};

// Experience of a single episode. Each appended transition becomes the
// successor of the previous one; the newest stays Terminal until another
// one is appended.
class ReplayBuffer {
 public:
  void append_chained(std::vector<double> state, std::size_t action_index, double reward) {
    if (!transitions_.empty()) transitions_.back().next_state = state;
    transitions_.push_back(Transition{std::move(state), action_index, reward, std::nullopt});
  }
  void push(Transition t) { transitions_.push_back(std::move(t)); }
  void clear() { transitions_.clear(); }

  std::size_t size() const { return transitions_.size(); }
  bool empty() const { return transitions_.empty(); }
  const std::vector<Transition>& transitions() const { return transitions_; }

 private:
  std::vector<Transition> transitions_;
};

template <ValueFunction F>
struct BasicQPolicy {
  F net;
  double epsilon = 0.0;
  double gamma = 0.99;
};

using QPolicy = BasicQPolicy<Network>;

// Lowest index wins ties. mask[i] == false excludes action i.
inline std::size_t argmax_valid(std::span<const double> q, std::span<const bool> mask = {}) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!mask.empty() && !mask[i]) continue;
    if (!best || q[i] > q[*best]) best = i;
  }
  if (!best) throw NoValidAction("no valid action under mask");
  return *best;
}

template <ValueFunction F>
std::size_t epsilon_greedy_action(const BasicQPolicy<F>& policy, std::span<const double> state,
                                  std::span<const bool> mask, RngStream& rng) {
  const std::size_t n = policy.net.output_dim();
  if (!mask.empty() && mask.size() != n) throw DimensionMismatch("action mask length does not match output_dim");
  std::size_t n_valid = n;
  if (!mask.empty()) n_valid = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
  if (n_valid == 0) throw NoValidAction("no valid action under mask");

  if (rng.uniform01() < policy.epsilon) {
    std::size_t k = rng.uniform_index(n_valid);
    if (mask.empty()) return k;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i] && k-- == 0) return i;
    }
  }
  const auto q = forward(policy.net, state);
  return argmax_valid(q, mask);
}

template <ValueFunction F>
std::size_t epsilon_greedy_action(const BasicQPolicy<F>& policy, std::span<const double> state, RngStream& rng) {
  return epsilon_greedy_action(policy, state, std::span<const bool>{}, rng);
}

// r + gamma * max_a' Q(s', a'), or r when s' is Terminal.
template <ValueFunction F>
double td_target(const BasicQPolicy<F>& policy, const Transition& t) {
  if (t.terminal() || policy.gamma == 0.0) return t.reward;
  const auto q = forward(policy.net, *t.next_state);
  return t.reward + policy.gamma * *std::max_element(q.begin(), q.end());
}

// Targets are recomputed with the pre-epoch network at the start of each
// epoch, then one full-batch step is taken. The buffer is left untouched.
template <ValueFunction F>
void train_on_buffer(BasicQPolicy<F>& policy, const ReplayBuffer& buffer, double lr, std::size_t epochs) {
  if (buffer.empty()) return;
  const auto& ts = buffer.transitions();
  std::vector<Sample> batch(ts.size());
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    for (std::size_t k = 0; k < ts.size(); ++k) {
      batch[k] = Sample{ts[k].state, ts[k].action_index, td_target(policy, ts[k])};
    }
    apply_grad_step(policy.net, std::span<const Sample>(batch), lr);
  }
}

}  // namespace dilemma

#endif  // DILEMMA_QPOLICY_HPP
