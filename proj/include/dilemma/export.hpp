#ifndef DILEMMA_EXPORT_HPP
#define DILEMMA_EXPORT_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "dilemma/analysis.hpp"
#include "dilemma/sim.hpp"

namespace dilemma {

// 9 significant digits.
std::string format_real(double v);

// Streams metrics.csv rows; the header is written on construction.
class MetricsCsvWriter : public MetricsSink {
 public:
  MetricsCsvWriter(std::ostream& out, std::size_t n_agents);
  void write(const EpisodeMetrics& m) override;

 private:
  std::ostream& out_;
  std::size_t n_agents_;
};

void write_metrics_csv(std::ostream& out, const RunRecord& record);

// One row per agent per checkpoint:
// episode,agent,strategy,selections,reward,centrality
void write_strategies_csv(std::ostream& out, const RunRecord& record);

// {"episode", "nodes": [{"id","strategy","centrality","pos"}], "edges": [{"from","to","w"}]}
nlohmann::json network_json(const Checkpoint& cp);

// episode, then <column>_mean,<column>_std for every metric column.
void write_aggregate_csv(std::ostream& out, const AggregateTable& table);

}  // namespace dilemma

#endif  // DILEMMA_EXPORT_HPP
