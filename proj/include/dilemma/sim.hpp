#ifndef DILEMMA_SIM_HPP
#define DILEMMA_SIM_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "dilemma/agent.hpp"
#include "dilemma/analysis.hpp"
#include "dilemma/core.hpp"
#include "dilemma/rng.hpp"
#include "dilemma/round_log.hpp"

namespace dilemma {

// Receives one row per finished episode.
class MetricsSink {
 public:
  virtual ~MetricsSink() = default;
  virtual void write(const EpisodeMetrics& m) = 0;
};

// RNG stream layout of a run: everything is derived from the run seed.
struct RunStreams {
  RngStream engine;  // cold-start histories and random matching
  RngStream layout;  // checkpoint layouts

  static RunStreams from_seed(std::uint64_t seed);
  static RngStream agent_stream(std::uint64_t seed, AgentId id);
};

// Agents with cold-start histories: h uniform random actions each, drawn
// from `engine` in id order.
std::vector<Agent> make_population(const ValidatedConfig& cfg, RngStream& engine);

// One selection phase followed by the dilemma games it produced. Games are
// resolved in ascending selector id; every agent observes the round-start
// snapshot; each history is appended once, after all games, with the
// agent's action in its last-resolved game.
RoundLog run_round(std::vector<Agent>& agents, MatchingMode mode, const PayoffMatrix& payoff, RngStream& engine,
                   CreditMode credit = CreditMode::EnsuingReward);

// T rounds, then training of both models for every agent and buffer refresh.
// The round logs are appended to `rounds_out` when it is non-null.
EpisodeMetrics run_episode(std::vector<Agent>& agents, const ValidatedConfig& cfg, RngStream& engine,
                           std::size_t episode, std::vector<RoundLog>* rounds_out = nullptr);

struct RunOptions {
  MetricsSink* sink = nullptr;
  std::function<void(std::size_t episode)> on_episode;  // progress hook
};

RunRecord run_experiment(const ValidatedConfig& cfg, const RunOptions& options = {});

}  // namespace dilemma

#endif  // DILEMMA_SIM_HPP
