#ifndef DILEMMA_ANALYSIS_HPP
#define DILEMMA_ANALYSIS_HPP

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dilemma/agent.hpp"
#include "dilemma/core.hpp"
#include "dilemma/nn.hpp"
#include "dilemma/rng.hpp"
#include "dilemma/round_log.hpp"

namespace dilemma {

class UnsupportedHistoryLength : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

// Deterministic one-step strategies; only meaningful for h == 1.
enum class StrategyClass : std::uint8_t { AllC = 0, AllD = 1, TFT = 2, RevTFT = 3 };

inline constexpr std::size_t kNumStrategies = 4;

std::string_view strategy_name(StrategyClass s);

// First argument is the selector.
Outcome outcome_label(Action a_selector, Action a_partner);

StrategyClass strategy_from_responses(Action after_cooperate, Action after_defect);
// Greedy responses of a dilemma network to the states [1,0] and [0,1].
StrategyClass classify_dilemma_network(const Network& dilemma_net);
// Throws UnsupportedHistoryLength when agent.h != 1.
StrategyClass classify_strategy(const Agent& agent);

struct EpisodeMetrics {
  std::size_t episode = 0;
  std::array<double, kNumOutcomes> outcome_pct{};  // indexed by Outcome
  double selection_accuracy = 0.0;
  double total_reward = 0.0;
  std::vector<double> per_agent_reward;
  std::array<std::size_t, kNumStrategies> strategy_counts{};  // indexed by StrategyClass; all zero unless h == 1
  std::vector<std::size_t> per_agent_selection_count;  // times chosen as partner

  double outcome(Outcome o) const { return outcome_pct[static_cast<std::size_t>(o)]; }
  std::size_t count(StrategyClass s) const { return strategy_counts[static_cast<std::size_t>(s)]; }
};

// Fixed metric column names, without the leading "episode" column:
// mc_pct, ex_pct, de_pct, md_pct, sel_acc, total_reward, n_allc, n_alld,
// n_tft, n_revtft, reward_agent_<i>..., selcount_agent_<i>...
std::vector<std::string> metric_columns(std::size_t n_agents);
// Values in metric_columns order.
std::vector<double> metric_values(const EpisodeMetrics& m);

// Outcome shares, rewards, accuracy and selection counts of one episode's
// rounds. strategy_counts are left zero.
EpisodeMetrics tally_rounds(std::span<const RoundLog> rounds, std::size_t n_agents, std::size_t episode);

// Fraction of selections whose partner's most recent snapshot action was C.
// snapshot_last[r] holds the round-start last actions for rounds[r].
double selection_accuracy(std::span<const RoundLog> rounds, std::span<const std::vector<Action>> snapshot_last);
double selection_accuracy(std::span<const RoundLog> rounds);

struct InteractionNetwork {
  std::size_t n_nodes = 0;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edges;  // (from, to) -> count

  std::size_t total_weight() const;
};

InteractionNetwork build_interaction_network(std::span<const RoundLog> rounds, std::size_t n_agents);

// (distinct in-neighbours + distinct out-neighbours) / (2 (N-1)).
std::vector<double> degree_centrality(const InteractionNetwork& net);

using Point2 = std::array<double, 2>;

// Force-directed layout normalized into [-1, 1]^2 around the origin.
std::vector<Point2> fr_layout(const InteractionNetwork& net, std::size_t iterations, RngStream& rng);

struct Checkpoint {
  std::size_t episode = 0;
  std::vector<std::optional<StrategyClass>> strategies;
  std::vector<std::size_t> selection_counts;
  std::vector<double> rewards;
  InteractionNetwork network;
  std::vector<double> centrality;
  std::vector<Point2> positions;
};

struct RunRecord {
  ExperimentConfig config;
  std::vector<EpisodeMetrics> metrics;
  std::vector<Checkpoint> checkpoints;
};

struct AggregateTable {
  std::vector<std::string> columns;  // metric_columns of the inputs
  std::vector<std::size_t> episodes;
  std::vector<std::vector<double>> mean;  // [episode][column]
  std::vector<std::vector<double>> stddev;  // population standard deviation
  std::size_t n_runs = 0;
};

// Element-wise mean and population standard deviation across runs.
AggregateTable aggregate_runs(std::span<const RunRecord> records);

}  // namespace dilemma

#endif  // DILEMMA_ANALYSIS_HPP
