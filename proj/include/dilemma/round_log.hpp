#ifndef DILEMMA_ROUND_LOG_HPP
#define DILEMMA_ROUND_LOG_HPP

#include <vector>

#include "dilemma/core.hpp"

namespace dilemma {

struct GameRecord {
  AgentId selector;
  AgentId partner;
  Action a_selector = Action::Cooperate;
  Action a_partner = Action::Cooperate;
  double r_selector = 0.0;
  double r_partner = 0.0;
};

struct RoundLog {
  std::vector<GameRecord> games;       // in resolution order (ascending selector id)
  std::vector<Action> snapshot_last;   // each agent's most recent visible action at round start
};

}  // namespace dilemma

#endif  // DILEMMA_ROUND_LOG_HPP
