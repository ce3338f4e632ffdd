#include "dilemma/export.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>

namespace dilemma {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

void write_header(std::ostream& out, std::size_t n_agents) {
  out << "episode";
  for (const auto& c : metric_columns(n_agents)) out << ',' << c;
  out << '\n';
}

void write_row(std::ostream& out, const EpisodeMetrics& m) {
  out << m.episode;
  for (double v : metric_values(m)) out << ',' << format_real(v);
  out << '\n';
}

// Rounds through the 9-digit text form so JSON output carries the same precision as the CSVs.
double nine_digits(double v) { return std::strtod(format_real(v).c_str(), nullptr); }

}  // namespace

MetricsCsvWriter::MetricsCsvWriter(std::ostream& out, std::size_t n_agents) : out_(out), n_agents_(n_agents) {
  write_header(out_, n_agents_);
}

void MetricsCsvWriter::write(const EpisodeMetrics& m) {
  if (m.per_agent_reward.size() != n_agents_) throw ShapeMismatch("metrics row has the wrong agent count");
  write_row(out_, m);
}

void write_metrics_csv(std::ostream& out, const RunRecord& record) {
  write_header(out, record.config.n_agents);
  for (const auto& m : record.metrics) write_row(out, m);
}

void write_strategies_csv(std::ostream& out, const RunRecord& record) {
  out << "episode,agent,strategy,selections,reward,centrality\n";
  for (const auto& cp : record.checkpoints) {
    for (std::size_t i = 0; i < cp.strategies.size(); ++i) {
      out << cp.episode << ',' << i << ',' << (cp.strategies[i] ? strategy_name(*cp.strategies[i]) : "NA") << ','
          << cp.selection_counts[i] << ',' << format_real(cp.rewards[i]) << ',' << format_real(cp.centrality[i])
          << '\n';
    }
  }
}

nlohmann::json network_json(const Checkpoint& cp) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < cp.network.n_nodes; ++i) {
    nodes.push_back({{"id", i},
                     {"strategy", cp.strategies[i] ? std::string(strategy_name(*cp.strategies[i])) : "NA"},
                     {"centrality", nine_digits(cp.centrality[i])},
                     {"pos", {nine_digits(cp.positions[i][0]), nine_digits(cp.positions[i][1])}}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [edge, w] : cp.network.edges) {
    edges.push_back({{"from", edge.first}, {"to", edge.second}, {"w", w}});
  }
  return {{"episode", cp.episode}, {"nodes", nodes}, {"edges", edges}};
}

void write_aggregate_csv(std::ostream& out, const AggregateTable& table) {
  out << "episode";
  for (const auto& c : table.columns) out << ',' << c << "_mean," << c << "_std";
  out << '\n';
  for (std::size_t e = 0; e < table.episodes.size(); ++e) {
    out << table.episodes[e];
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << ',' << format_real(table.mean[e][c]) << ',' << format_real(table.stddev[e][c]);
    }
    out << '\n';
  }
}

}  // namespace dilemma
