#include "dilemma/agent.hpp"

namespace dilemma {

Agent make_agent(AgentId id, const ExperimentConfig& cfg, RngStream rng) {
  const std::size_t n = cfg.n_agents;
  const std::size_t h = cfg.h;
  if (n < 2) throw ConstraintViolation("n_agents >= 2 failed");
  if (id.value >= n) throw ConstraintViolation("agent id out of range");
  RngStream init = rng.split(0);
  Agent a;
  a.id = id;
  a.n_agents = n;
  a.h = h;
  a.selection_policy = QPolicy{init_network(2 * h * (n - 1), cfg.hidden_size, n - 1, init),
                               cfg.epsilon_selection, cfg.gamma};
  a.dilemma_policy = QPolicy{init_network(2 * h, cfg.hidden_size, 2, init), cfg.epsilon_dilemma, cfg.gamma};
  a.history = HistoryWindow(h);
  a.rng = rng.split(1);
  if (a.dilemma_policy.net.input_dim() != 2 * h || a.selection_policy.net.input_dim() != 2 * h * (n - 1)) {
    throw DimensionMismatch("agent model input dimensions violate the 2h / 2h(n-1) laws");
  }
  return a;
}

void encode_dilemma_state_into(const HistoryWindow& hist, std::size_t h, std::span<double> out) {
  if (hist.size() != h) throw DimensionMismatch("history window must hold exactly h actions to be encoded");
  for (std::size_t k = 0; k < h; ++k) {
    const auto oh = one_hot(hist[k]);
    out[2 * k] = oh[0];
    out[2 * k + 1] = oh[1];
  }
}

std::vector<double> encode_dilemma_state(const HistoryWindow& hist, std::size_t h) {
  std::vector<double> v(2 * h);
  encode_dilemma_state_into(hist, h, v);
  return v;
}

std::vector<double> encode_selection_state(std::span<const HistoryWindow> others, std::size_t h) {
  std::vector<double> v(2 * h * others.size());
  for (std::size_t j = 0; j < others.size(); ++j) {
    encode_dilemma_state_into(others[j], h, std::span<double>(v).subspan(2 * h * j, 2 * h));
  }
  return v;
}

std::vector<HistoryWindow> others_view(std::span<const HistoryWindow> all, AgentId self) {
  std::vector<HistoryWindow> out;
  out.reserve(all.size() - 1);
  for (std::size_t j = 0; j < all.size(); ++j) {
    if (j != self.value) out.push_back(all[j]);
  }
  return out;
}

PartnerChoice choose_partner_encoded(Agent& agent, std::vector<double> state, RngStream& rng) {
  const std::size_t idx = epsilon_greedy_action(agent.selection_policy, state, rng);
  return PartnerChoice{partner_for_index(agent.id, idx), idx, std::move(state)};
}

PartnerChoice choose_partner(Agent& agent, std::span<const HistoryWindow> others, RngStream& rng) {
  if (others.size() + 1 != agent.n_agents) throw DimensionMismatch("snapshot must hold the other n-1 histories");
  return choose_partner_encoded(agent, encode_selection_state(others, agent.h), rng);
}

Action choose_dilemma_action(Agent& agent, std::span<const double> state, RngStream& rng) {
  return action_from_index(epsilon_greedy_action(agent.dilemma_policy, state, rng));
}

void record_interaction(Agent& agent, std::optional<SelectionStep> selection, std::vector<double> dilemma_state,
                        Action dilemma_action, double dilemma_reward, CreditMode credit) {
  agent.dilemma_buffer.append_chained(std::move(dilemma_state), action_index(dilemma_action), dilemma_reward);
  if (selection) {
    const double r_s = credit == CreditMode::EnsuingReward ? dilemma_reward : 0.0;
    agent.selection_buffer.append_chained(std::move(selection->state), selection->action_index, r_s);
  }
}

void train_and_refresh(Agent& agent, double lr, std::size_t epochs) {
  train_on_buffer(agent.selection_policy, agent.selection_buffer, lr, epochs);
  train_on_buffer(agent.dilemma_policy, agent.dilemma_buffer, lr, epochs);
  agent.selection_buffer.clear();
  agent.dilemma_buffer.clear();
}

}  // namespace dilemma
