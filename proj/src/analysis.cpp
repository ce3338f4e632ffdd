#include "dilemma/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dilemma {

std::string_view strategy_name(StrategyClass s) {
  switch (s) {
    case StrategyClass::AllC: return "ALLC";
    case StrategyClass::AllD: return "ALLD";
    case StrategyClass::TFT: return "TFT";
    case StrategyClass::RevTFT: return "revTFT";
  }
  return "?";
}

Outcome outcome_label(Action a_selector, Action a_partner) {
  const bool cs = a_selector == Action::Cooperate;
  const bool cp = a_partner == Action::Cooperate;
  if (cs && cp) return Outcome::MutualCooperation;
  if (!cs && cp) return Outcome::Exploitation;
  if (cs && !cp) return Outcome::Deception;
  return Outcome::MutualDefection;
}

StrategyClass strategy_from_responses(Action after_c, Action after_d) {
  const bool cc = after_c == Action::Cooperate;
  const bool cd = after_d == Action::Cooperate;
  if (cc && cd) return StrategyClass::AllC;
  if (!cc && !cd) return StrategyClass::AllD;
  if (cc && !cd) return StrategyClass::TFT;
  return StrategyClass::RevTFT;
}

StrategyClass classify_dilemma_network(const Network& net) {
  if (net.input_dim() != 2 || net.output_dim() != 2) {
    throw UnsupportedHistoryLength("strategy classification needs a 2-input, 2-output dilemma network (h == 1)");
  }
  const std::array<double, 2> saw_c = one_hot(Action::Cooperate);
  const std::array<double, 2> saw_d = one_hot(Action::Defect);
  const Action after_c = action_from_index(argmax_valid(forward(net, saw_c)));
  const Action after_d = action_from_index(argmax_valid(forward(net, saw_d)));
  return strategy_from_responses(after_c, after_d);
}

StrategyClass classify_strategy(const Agent& agent) {
  if (agent.h != 1) throw UnsupportedHistoryLength("strategy classification is defined only for h == 1");
  return classify_dilemma_network(agent.dilemma_policy.net);
}

std::vector<std::string> metric_columns(std::size_t n) {
  std::vector<std::string> cols = {"mc_pct", "ex_pct", "de_pct", "md_pct", "sel_acc", "total_reward",
                                   "n_allc", "n_alld", "n_tft",  "n_revtft"};
  for (std::size_t i = 0; i < n; ++i) cols.push_back("reward_agent_" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) cols.push_back("selcount_agent_" + std::to_string(i));
  return cols;
}

std::vector<double> metric_values(const EpisodeMetrics& m) {
  std::vector<double> v(m.outcome_pct.begin(), m.outcome_pct.end());
  v.push_back(m.selection_accuracy);
  v.push_back(m.total_reward);
  for (auto c : m.strategy_counts) v.push_back(static_cast<double>(c));
  v.insert(v.end(), m.per_agent_reward.begin(), m.per_agent_reward.end());
  for (auto c : m.per_agent_selection_count) v.push_back(static_cast<double>(c));
  return v;
}

EpisodeMetrics tally_rounds(std::span<const RoundLog> rounds, std::size_t n_agents, std::size_t episode) {
  EpisodeMetrics m;
  m.episode = episode;
  m.per_agent_reward.assign(n_agents, 0.0);
  m.per_agent_selection_count.assign(n_agents, 0);
  std::array<std::size_t, kNumOutcomes> counts{};
  std::size_t games = 0;
  for (const auto& round : rounds) {
    for (const auto& g : round.games) {
      ++counts[static_cast<std::size_t>(outcome_label(g.a_selector, g.a_partner))];
      ++games;
      m.per_agent_reward[g.selector.value] += g.r_selector;
      m.per_agent_reward[g.partner.value] += g.r_partner;
      m.total_reward += g.r_selector + g.r_partner;
      ++m.per_agent_selection_count[g.partner.value];
    }
  }
  if (games > 0) {
    for (std::size_t k = 0; k < kNumOutcomes; ++k) {
      m.outcome_pct[k] = static_cast<double>(counts[k]) / static_cast<double>(games);
    }
  }
  m.selection_accuracy = selection_accuracy(rounds);
  return m;
}

double selection_accuracy(std::span<const RoundLog> rounds, std::span<const std::vector<Action>> snapshot_last) {
  if (rounds.size() != snapshot_last.size()) throw ShapeMismatch("one snapshot per round is required");
  std::size_t hits = 0;
  std::size_t total = 0;
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    for (const auto& g : rounds[r].games) {
      ++total;
      if (snapshot_last[r].at(g.partner.value) == Action::Cooperate) ++hits;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

double selection_accuracy(std::span<const RoundLog> rounds) {
  std::vector<std::vector<Action>> snaps;
  snaps.reserve(rounds.size());
  for (const auto& r : rounds) snaps.push_back(r.snapshot_last);
  return selection_accuracy(rounds, snaps);
}

std::size_t InteractionNetwork::total_weight() const {
  std::size_t w = 0;
  for (const auto& [edge, count] : edges) w += count;
  return w;
}

InteractionNetwork build_interaction_network(std::span<const RoundLog> rounds, std::size_t n_agents) {
  InteractionNetwork net;
  net.n_nodes = n_agents;
  for (const auto& round : rounds) {
    for (const auto& g : round.games) {
      if (g.selector == g.partner) throw Error("self-selection in round log");
      ++net.edges[{g.selector.value, g.partner.value}];
    }
  }
  return net;
}

std::vector<double> degree_centrality(const InteractionNetwork& net) {
  const std::size_t n = net.n_nodes;
  std::vector<double> c(n, 0.0);
  if (n < 2) return c;
  std::vector<std::set<std::size_t>> in(n), out(n);
  for (const auto& [edge, w] : net.edges) {
    if (w == 0 || edge.first == edge.second) continue;
    out[edge.first].insert(edge.second);
    in[edge.second].insert(edge.first);
  }
  const double denom = 2.0 * static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) c[i] = static_cast<double>(in[i].size() + out[i].size()) / denom;
  return c;
}

std::vector<Point2> fr_layout(const InteractionNetwork& net, std::size_t iterations, RngStream& rng) {
  const std::size_t n = net.n_nodes;
  std::vector<Point2> pos(n);
  for (auto& p : pos) p = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
  if (n == 0) return pos;

  // Undirected attraction weights, scaled so the heaviest edge is 1.
  std::map<std::pair<std::size_t, std::size_t>, double> weights;
  double max_w = 0.0;
  for (const auto& [edge, w] : net.edges) {
    if (edge.first == edge.second) continue;
    auto key = std::minmax(edge.first, edge.second);
    max_w = std::max(max_w, weights[key] += static_cast<double>(w));
  }
  const double k = std::sqrt(1.0 / static_cast<double>(n));
  const double t0 = 0.1;
  std::vector<Point2> disp(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    const double temp = t0 * (1.0 - static_cast<double>(it) / static_cast<double>(iterations));
    std::fill(disp.begin(), disp.end(), Point2{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = pos[i][0] - pos[j][0];
        const double dy = pos[i][1] - pos[j][1];
        const double d = std::max(std::hypot(dx, dy), 1e-9);
        const double f = k * k / d;
        disp[i][0] += dx / d * f;
        disp[i][1] += dy / d * f;
        disp[j][0] -= dx / d * f;
        disp[j][1] -= dy / d * f;
      }
    }
    for (const auto& [edge, w] : weights) {
      const auto [i, j] = edge;
      const double dx = pos[i][0] - pos[j][0];
      const double dy = pos[i][1] - pos[j][1];
      const double d = std::max(std::hypot(dx, dy), 1e-9);
      const double f = (w / max_w) * d * d / k;
      disp[i][0] -= dx / d * f;
      disp[i][1] -= dy / d * f;
      disp[j][0] += dx / d * f;
      disp[j][1] += dy / d * f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double len = std::hypot(disp[i][0], disp[i][1]);
      if (len <= 0.0) continue;
      const double step = std::min(len, temp);
      pos[i][0] += disp[i][0] / len * step;
      pos[i][1] += disp[i][1] / len * step;
    }
  }

  Point2 centre{0.0, 0.0};
  for (const auto& p : pos) {
    centre[0] += p[0] / static_cast<double>(n);
    centre[1] += p[1] / static_cast<double>(n);
  }
  double extent = 0.0;
  for (auto& p : pos) {
    p[0] -= centre[0];
    p[1] -= centre[1];
    extent = std::max({extent, std::abs(p[0]), std::abs(p[1])});
  }
  for (auto& p : pos) {
    if (extent > 0.0) {
      p[0] = std::clamp(p[0] / extent, -1.0, 1.0);
      p[1] = std::clamp(p[1] / extent, -1.0, 1.0);
    } else {
      p = {0.0, 0.0};
    }
  }
  return pos;
}

AggregateTable aggregate_runs(std::span<const RunRecord> records) {
  AggregateTable table;
  if (records.empty()) return table;
  const std::size_t n_agents = records.front().config.n_agents;
  const std::size_t n_eps = records.front().metrics.size();
  for (const auto& r : records) {
    if (r.config.n_agents != n_agents || r.metrics.size() != n_eps) {
      throw ShapeMismatch("run records differ in agent count or episode count");
    }
  }
  table.columns = metric_columns(n_agents);
  table.n_runs = records.size();
  const std::size_t n_cols = table.columns.size();
  table.episodes.resize(n_eps);
  table.mean.assign(n_eps, std::vector<double>(n_cols, 0.0));
  table.stddev.assign(n_eps, std::vector<double>(n_cols, 0.0));

  // Welford's running mean / sum of squared deviations, one run at a time.
  std::vector<std::vector<double>> m2(n_eps, std::vector<double>(n_cols, 0.0));
  std::size_t seen = 0;
  for (const auto& r : records) {
    ++seen;
    for (std::size_t e = 0; e < n_eps; ++e) {
      const auto& em = r.metrics[e];
      if (seen == 1) table.episodes[e] = em.episode;
      if (em.episode != table.episodes[e]) throw ShapeMismatch("run records disagree on episode indices");
      const auto values = metric_values(em);
      if (values.size() != n_cols) throw ShapeMismatch("metric row has the wrong number of columns");
      auto& mean = table.mean[e];
      for (std::size_t c = 0; c < n_cols; ++c) {
        const double delta = values[c] - mean[c];
        mean[c] += delta / static_cast<double>(seen);
        m2[e][c] += delta * (values[c] - mean[c]);
      }
    }
  }
  for (std::size_t e = 0; e < n_eps; ++e) {
    for (std::size_t c = 0; c < n_cols; ++c) {
      table.stddev[e][c] = std::sqrt(std::max(0.0, m2[e][c]) / static_cast<double>(seen));
    }
  }
  return table;
}

}  // namespace dilemma
