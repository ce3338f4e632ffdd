#ifndef DILEMMA_CORE_HPP
#define DILEMMA_CORE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dilemma {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

enum class Action : std::uint8_t { Cooperate = 0, Defect = 1 };

inline constexpr std::array<Action, 2> kActions = {Action::Cooperate, Action::Defect};

constexpr std::size_t action_index(Action a) { return static_cast<std::size_t>(a); }
constexpr Action action_from_index(std::size_t i) { return i == 0 ? Action::Cooperate : Action::Defect; }

// C -> [1,0], D -> [0,1]
constexpr std::array<double, 2> one_hot(Action a) {
  return a == Action::Cooperate ? std::array<double, 2>{1.0, 0.0} : std::array<double, 2>{0.0, 1.0};
}

char action_char(Action a);

// Joint outcome from the selector's (first player's) perspective.
enum class Outcome : std::uint8_t { MutualCooperation = 0, Exploitation = 1, Deception = 2, MutualDefection = 3 };

inline constexpr std::size_t kNumOutcomes = 4;

std::pair<Action, Action> joint_actions(Outcome o);
std::string_view outcome_name(Outcome o);

struct PayoffMatrix {
  double T = 4.0;  // temptation
  double R = 3.0;  // reward for mutual cooperation
  double P = 1.0;  // punishment for mutual defection
  double S = 0.0;  // sucker's payoff

  // Repeated prisoner's dilemma values (4, 3, 1, 0).
  static PayoffMatrix rpd() { return {}; }

  // Throws ConstraintViolation unless T > R > P > S and 2R > T + S.
  void validate() const;
};

// (reward to a_self, reward to a_other)
std::pair<double, double> payoff_lookup(const PayoffMatrix& payoff, Action a_self, Action a_other);

struct AgentId {
  std::size_t value = 0;

  friend constexpr bool operator==(AgentId, AgentId) = default;
  friend constexpr auto operator<=>(AgentId, AgentId) = default;
};

// The h most recent dilemma actions of one agent, most recent last.
class HistoryWindow {
 public:
  explicit HistoryWindow(std::size_t capacity = 1);

  void push(Action a);
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return actions_.size(); }
  bool full() const { return actions_.size() == capacity_; }
  bool empty() const { return actions_.empty(); }
  Action last() const;
  Action operator[](std::size_t i) const { return actions_[i]; }
  const std::deque<Action>& actions() const { return actions_; }

 private:
  std::size_t capacity_;
  std::deque<Action> actions_;
};

enum class MatchingMode : std::uint8_t { PartnerSelection, RandomMatching, TwoPlayerFixed };

std::string_view matching_mode_name(MatchingMode m);
// Throws ConstraintViolation listing the valid names.
MatchingMode parse_matching_mode(std::string_view name);

// How the selection model is credited for a partner choice.
enum class CreditMode : std::uint8_t {
  EnsuingReward,  // reward of the game the selection produced
  Zero,           // no direct reward; learned through bootstrapping only
};

std::string_view credit_mode_name(CreditMode c);
CreditMode parse_credit_mode(std::string_view name);

struct ExperimentConfig {
  std::size_t n_agents = 20;
  std::size_t h = 1;
  std::size_t rounds_per_episode = 10;
  std::size_t n_episodes = 20000;
  MatchingMode matching_mode = MatchingMode::PartnerSelection;
  double epsilon_dilemma = 0.05;
  double epsilon_selection = 0.1;
  double gamma = 0.99;
  std::size_t hidden_size = 256;
  double learning_rate = 1e-3;
  std::size_t epochs = 1;
  CreditMode credit_mode = CreditMode::EnsuingReward;
  PayoffMatrix payoff = PayoffMatrix::rpd();
  std::uint64_t seed = 1;
  std::vector<std::size_t> metrics_checkpoints = {0, 2500, 5000, 7500, 10000, 12500, 15000, 17500, 19999};
  std::size_t network_window = 100;
  std::size_t layout_iterations = 200;
};

// A config that has passed validate_config. Immutable.
class ValidatedConfig {
 public:
  const ExperimentConfig& get() const { return cfg_; }
  const ExperimentConfig* operator->() const { return &cfg_; }

 private:
  explicit ValidatedConfig(ExperimentConfig cfg) : cfg_(std::move(cfg)) {}
  friend ValidatedConfig validate_config(ExperimentConfig cfg);
  ExperimentConfig cfg_;
};

ValidatedConfig validate_config(ExperimentConfig cfg);

}  // namespace dilemma

#endif  // DILEMMA_CORE_HPP
