#include "dilemma/core.hpp"

#include <cmath>
#include <sstream>

namespace dilemma {

char action_char(Action a) { return a == Action::Cooperate ? 'C' : 'D'; }

std::pair<Action, Action> joint_actions(Outcome o) {
  switch (o) {
    case Outcome::MutualCooperation: return {Action::Cooperate, Action::Cooperate};
    case Outcome::Exploitation: return {Action::Defect, Action::Cooperate};
    case Outcome::Deception: return {Action::Cooperate, Action::Defect};
    case Outcome::MutualDefection: return {Action::Defect, Action::Defect};
  }
  throw Error("invalid outcome");
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::MutualCooperation: return "mutual_cooperation";
    case Outcome::Exploitation: return "exploitation";
    case Outcome::Deception: return "deception";
    case Outcome::MutualDefection: return "mutual_defection";
  }
  return "?";
}

void PayoffMatrix::validate() const {
  for (double v : {T, R, P, S}) {
    if (!std::isfinite(v)) throw ConstraintViolation("payoff values must be finite");
  }
  if (!(T > R)) throw ConstraintViolation("T > R failed");
  if (!(R > P)) throw ConstraintViolation("R > P failed");
  if (!(P > S)) throw ConstraintViolation("P > S failed");
  if (!(2 * R > T + S)) throw ConstraintViolation("2R > T+S failed");
}

std::pair<double, double> payoff_lookup(const PayoffMatrix& p, Action a_self, Action a_other) {
  const bool c_self = a_self == Action::Cooperate;
  const bool c_other = a_other == Action::Cooperate;
  if (c_self && c_other) return {p.R, p.R};
  if (!c_self && c_other) return {p.T, p.S};
  if (c_self && !c_other) return {p.S, p.T};
  return {p.P, p.P};
}

HistoryWindow::HistoryWindow(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConstraintViolation("history length h >= 1 failed");
}

void HistoryWindow::push(Action a) {
  if (actions_.size() == capacity_) actions_.pop_front();
  actions_.push_back(a);
}

Action HistoryWindow::last() const {
  if (actions_.empty()) throw Error("history window is empty");
  return actions_.back();
}

std::string_view matching_mode_name(MatchingMode m) {
  switch (m) {
    case MatchingMode::PartnerSelection: return "PartnerSelection";
    case MatchingMode::RandomMatching: return "RandomMatching";
    case MatchingMode::TwoPlayerFixed: return "TwoPlayerFixed";
  }
  return "?";
}

MatchingMode parse_matching_mode(std::string_view name) {
  for (auto m : {MatchingMode::PartnerSelection, MatchingMode::RandomMatching, MatchingMode::TwoPlayerFixed}) {
    if (name == matching_mode_name(m)) return m;
  }
  throw ConstraintViolation("unknown matching mode '" + std::string(name) +
                            "' (valid: PartnerSelection, RandomMatching, TwoPlayerFixed)");
}

std::string_view credit_mode_name(CreditMode c) {
  return c == CreditMode::EnsuingReward ? "ensuing-reward" : "zero";
}

CreditMode parse_credit_mode(std::string_view name) {
  if (name == "ensuing-reward") return CreditMode::EnsuingReward;
  if (name == "zero") return CreditMode::Zero;
  throw ConstraintViolation("unknown credit mode '" + std::string(name) + "' (valid: ensuing-reward, zero)");
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ConstraintViolation(std::string(what) + " failed");
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

ValidatedConfig validate_config(ExperimentConfig cfg) {
  cfg.payoff.validate();
  require(cfg.n_agents >= 2, "n_agents >= 2");
  require(cfg.matching_mode != MatchingMode::TwoPlayerFixed || cfg.n_agents == 2,
          "TwoPlayerFixed requires n_agents == 2");
  require(cfg.h >= 1, "h >= 1");
  require(cfg.rounds_per_episode >= 1, "rounds_per_episode >= 1");
  require(is_probability(cfg.epsilon_dilemma), "0 <= epsilon_dilemma <= 1");
  require(is_probability(cfg.epsilon_selection), "0 <= epsilon_selection <= 1");
  require(is_probability(cfg.gamma), "0 <= gamma <= 1");
  require(cfg.hidden_size >= 1, "hidden_size >= 1");
  require(std::isfinite(cfg.learning_rate) && cfg.learning_rate > 0.0, "learning_rate > 0");
  require(cfg.epochs >= 1, "epochs >= 1");
  require(cfg.network_window >= 1, "network_window >= 1");
  return ValidatedConfig(std::move(cfg));
}

}  // namespace dilemma
