#include "dilemma/sim.hpp"

#include <algorithm>
#include <deque>
#include <optional>

namespace dilemma {

RunStreams RunStreams::from_seed(std::uint64_t seed) {
  RngStream root(seed);
  return RunStreams{root.split(0), root.split(1)};
}

RngStream RunStreams::agent_stream(std::uint64_t seed, AgentId id) {
  return RngStream(seed).split(1000 + id.value);
}

std::vector<Agent> make_population(const ValidatedConfig& vcfg, RngStream& engine) {
  const auto& cfg = vcfg.get();
  std::vector<Agent> agents;
  agents.reserve(cfg.n_agents);
  for (std::size_t i = 0; i < cfg.n_agents; ++i) {
    agents.push_back(make_agent(AgentId{i}, cfg, RunStreams::agent_stream(cfg.seed, AgentId{i})));
  }
  for (auto& a : agents) {
    for (std::size_t k = 0; k < cfg.h; ++k) a.history.push(engine.bernoulli(0.5) ? Action::Cooperate : Action::Defect);
  }
  return agents;
}

RoundLog run_round(std::vector<Agent>& agents, MatchingMode mode, const PayoffMatrix& payoff, RngStream& engine,
                   CreditMode credit) {
  const std::size_t n = agents.size();
  if (n < 2) throw ConstraintViolation("n_agents >= 2 failed");
  if (mode == MatchingMode::TwoPlayerFixed && n != 2) throw ConstraintViolation("TwoPlayerFixed requires n_agents == 2");
  const std::size_t h = agents.front().h;
  const std::size_t block = 2 * h;

  RoundLog log;
  log.snapshot_last.reserve(n);
  std::vector<double> encoded(n * block);
  for (std::size_t j = 0; j < n; ++j) {
    log.snapshot_last.push_back(agents[j].history.last());
    encode_dilemma_state_into(agents[j].history, h, std::span<double>(encoded).subspan(j * block, block));
  }
  auto encoding_of = [&](std::size_t j) {
    return std::vector<double>(encoded.begin() + static_cast<std::ptrdiff_t>(j * block),
                               encoded.begin() + static_cast<std::ptrdiff_t>((j + 1) * block));
  };

  struct Pairing {
    AgentId selector;
    AgentId partner;
    std::optional<SelectionStep> step;
  };
  std::vector<Pairing> pairings;
  pairings.reserve(n);
  switch (mode) {
    case MatchingMode::PartnerSelection:
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> state;
        state.reserve(block * (n - 1));
        state.insert(state.end(), encoded.begin(), encoded.begin() + static_cast<std::ptrdiff_t>(i * block));
        state.insert(state.end(), encoded.begin() + static_cast<std::ptrdiff_t>((i + 1) * block), encoded.end());
        auto choice = choose_partner_encoded(agents[i], std::move(state), agents[i].rng);
        pairings.push_back({AgentId{i}, choice.partner, SelectionStep{std::move(choice.state), choice.action_index}});
      }
      break;
    case MatchingMode::RandomMatching:
      for (std::size_t i = 0; i < n; ++i) {
        pairings.push_back({AgentId{i}, partner_for_index(AgentId{i}, engine.uniform_index(n - 1)), std::nullopt});
      }
      break;
    case MatchingMode::TwoPlayerFixed:
      pairings.push_back({AgentId{0}, AgentId{1}, std::nullopt});
      break;
  }

  std::vector<std::optional<Action>> last_action(n);
  log.games.reserve(pairings.size());
  for (auto& p : pairings) {
    Agent& sel = agents[p.selector.value];
    Agent& par = agents[p.partner.value];
    auto s_sel = encoding_of(p.partner.value);
    auto s_par = encoding_of(p.selector.value);
    const Action a_sel = choose_dilemma_action(sel, s_sel, sel.rng);
    const Action a_par = choose_dilemma_action(par, s_par, par.rng);
    const auto [r_sel, r_par] = payoff_lookup(payoff, a_sel, a_par);
    record_interaction(sel, std::move(p.step), std::move(s_sel), a_sel, r_sel, credit);
    record_interaction(par, std::nullopt, std::move(s_par), a_par, r_par, credit);
    last_action[p.selector.value] = a_sel;
    last_action[p.partner.value] = a_par;
    log.games.push_back(GameRecord{p.selector, p.partner, a_sel, a_par, r_sel, r_par});
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (last_action[i]) agents[i].history.push(*last_action[i]);
  }
  return log;
}

EpisodeMetrics run_episode(std::vector<Agent>& agents, const ValidatedConfig& vcfg, RngStream& engine,
                           std::size_t episode, std::vector<RoundLog>* rounds_out) {
  const auto& cfg = vcfg.get();
  std::vector<RoundLog> rounds;
  rounds.reserve(cfg.rounds_per_episode);
  for (std::size_t t = 0; t < cfg.rounds_per_episode; ++t) {
    rounds.push_back(run_round(agents, cfg.matching_mode, cfg.payoff, engine, cfg.credit_mode));
  }
  EpisodeMetrics m = tally_rounds(rounds, agents.size(), episode);
  for (auto& a : agents) train_and_refresh(a, cfg.learning_rate, cfg.epochs);
  if (cfg.h == 1) {
    for (const auto& a : agents) ++m.strategy_counts[static_cast<std::size_t>(classify_strategy(a))];
  }
  if (rounds_out != nullptr) {
    rounds_out->insert(rounds_out->end(), std::make_move_iterator(rounds.begin()),
                       std::make_move_iterator(rounds.end()));
  }
  return m;
}

RunRecord run_experiment(const ValidatedConfig& vcfg, const RunOptions& options) {
  const auto& cfg = vcfg.get();
  RunRecord record;
  record.config = cfg;
  record.metrics.reserve(cfg.n_episodes);

  auto streams = RunStreams::from_seed(cfg.seed);
  auto agents = make_population(vcfg, streams.engine);

  std::vector<std::size_t> checkpoints;
  for (auto c : cfg.metrics_checkpoints) {
    if (c < cfg.n_episodes) checkpoints.push_back(c);
  }
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

  // Round logs of the most recent network_window episodes.
  std::deque<std::vector<RoundLog>> window;
  const bool keep_window = !checkpoints.empty();

  for (std::size_t ep = 0; ep < cfg.n_episodes; ++ep) {
    std::vector<RoundLog> rounds;
    EpisodeMetrics m = run_episode(agents, vcfg, streams.engine, ep, keep_window ? &rounds : nullptr);
    if (keep_window) {
      window.push_back(std::move(rounds));
      if (window.size() > cfg.network_window) window.pop_front();
    }
    if (std::binary_search(checkpoints.begin(), checkpoints.end(), ep)) {
      Checkpoint cp;
      cp.episode = ep;
      for (const auto& a : agents) {
        cp.strategies.push_back(cfg.h == 1 ? std::optional<StrategyClass>(classify_strategy(a)) : std::nullopt);
      }
      cp.selection_counts = m.per_agent_selection_count;
      cp.rewards = m.per_agent_reward;
      std::vector<RoundLog> flat;
      for (const auto& ep_rounds : window) flat.insert(flat.end(), ep_rounds.begin(), ep_rounds.end());
      cp.network = build_interaction_network(flat, cfg.n_agents);
      cp.centrality = degree_centrality(cp.network);
      RngStream layout_rng = streams.layout.split(ep);
      cp.positions = fr_layout(cp.network, cfg.layout_iterations, layout_rng);
      record.checkpoints.push_back(std::move(cp));
    }
    if (options.sink != nullptr) options.sink->write(m);
    record.metrics.push_back(std::move(m));
    if (options.on_episode) options.on_episode(ep);
  }
  return record;
}

}  // namespace dilemma
