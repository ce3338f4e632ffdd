#ifndef DILEMMA_AGENT_HPP
#define DILEMMA_AGENT_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dilemma/core.hpp"
#include "dilemma/qpolicy.hpp"
#include "dilemma/rng.hpp"

namespace dilemma {

// Dual-model learner: a selection model over the other n-1 agents and a
// dilemma model over {C, D}, plus the agent's own visible history.
struct Agent {
  AgentId id;
  std::size_t n_agents = 0;
  std::size_t h = 1;
  QPolicy selection_policy;
  QPolicy dilemma_policy;
  HistoryWindow history;
  ReplayBuffer selection_buffer;
  ReplayBuffer dilemma_buffer;
  RngStream rng;
};

// Builds both networks from the agent's own stream; checks the 2h and
// 2h(n-1) input-dimension laws.
Agent make_agent(AgentId id, const ExperimentConfig& cfg, RngStream rng);

// One-hot encodings of the opponent's last h actions, oldest first.
std::vector<double> encode_dilemma_state(const HistoryWindow& opponent_history, std::size_t h);
void encode_dilemma_state_into(const HistoryWindow& opponent_history, std::size_t h, std::span<double> out);

// Concatenated dilemma encodings of the other agents, ascending id, self removed.
std::vector<double> encode_selection_state(std::span<const HistoryWindow> others, std::size_t h);

// Snapshot of every agent's history with `self` removed, ascending id.
std::vector<HistoryWindow> others_view(std::span<const HistoryWindow> all, AgentId self);

// Selection-action index -> AgentId, skipping `self`.
constexpr AgentId partner_for_index(AgentId self, std::size_t index) {
  return AgentId{index < self.value ? index : index + 1};
}

struct PartnerChoice {
  AgentId partner;
  std::size_t action_index = 0;
  std::vector<double> state;
};

// `others` excludes the agent's own history (see others_view).
PartnerChoice choose_partner(Agent& agent, std::span<const HistoryWindow> others, RngStream& rng);
// Same decision when the selection state is already encoded.
PartnerChoice choose_partner_encoded(Agent& agent, std::vector<double> selection_state, RngStream& rng);

Action choose_dilemma_action(Agent& agent, std::span<const double> dilemma_state, RngStream& rng);

struct SelectionStep {
  std::vector<double> state;
  std::size_t action_index = 0;
};

// Appends the dilemma transition, and the selection transition when the
// agent was the selector. The history window is updated by the caller at
// the round boundary.
void record_interaction(Agent& agent, std::optional<SelectionStep> selection, std::vector<double> dilemma_state,
                        Action dilemma_action, double dilemma_reward, CreditMode credit = CreditMode::EnsuingReward);

// Trains both models on their buffers and clears the buffers.
void train_and_refresh(Agent& agent, double lr, std::size_t epochs);

}  // namespace dilemma

#endif  // DILEMMA_AGENT_HPP
