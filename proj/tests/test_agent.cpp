#include <doctest.h>

#include <algorithm>

#include "dilemma/agent.hpp"

using namespace dilemma;

namespace {

HistoryWindow history_of(std::initializer_list<Action> actions) {
  HistoryWindow w(actions.size());
  for (auto a : actions) w.push(a);
  return w;
}

constexpr auto C = Action::Cooperate;
constexpr auto D = Action::Defect;

ExperimentConfig small_config(std::size_t n, std::size_t h = 1) {
  ExperimentConfig cfg;
  cfg.n_agents = n;
  cfg.h = h;
  cfg.hidden_size = 16;
  return cfg;
}

}  // namespace

TEST_SUITE("agent") {
  TEST_CASE("dilemma state encoding") {
    CHECK(encode_dilemma_state(history_of({C}), 1) == std::vector<double>{1, 0});
    CHECK(encode_dilemma_state(history_of({D}), 1) == std::vector<double>{0, 1});
    CHECK(encode_dilemma_state(history_of({C, D}), 2) == std::vector<double>{1, 0, 0, 1});
    CHECK_THROWS_AS(encode_dilemma_state(HistoryWindow(2), 2), DimensionMismatch);
  }

  TEST_CASE("selection state encoding") {
    const std::vector<HistoryWindow> others = {history_of({C}), history_of({D})};
    CHECK(encode_selection_state(others, 1) == std::vector<double>{1, 0, 0, 1});

    std::vector<HistoryWindow> nineteen(19, history_of({C}));
    CHECK(encode_selection_state(nineteen, 1).size() == 38);
  }

  TEST_CASE("permuting the inputs permutes the output blocks") {
    const std::vector<HistoryWindow> others = {history_of({C, D}), history_of({D, D}), history_of({D, C})};
    const std::vector<HistoryWindow> rotated = {others[2], others[0], others[1]};
    const auto a = encode_selection_state(others, 2);
    const auto b = encode_selection_state(rotated, 2);
    CHECK(std::equal(a.begin() + 8, a.begin() + 12, b.begin()));
    CHECK(std::equal(a.begin(), a.begin() + 4, b.begin() + 4));
    CHECK(std::equal(a.begin() + 4, a.begin() + 8, b.begin() + 8));
  }

  TEST_CASE("input dimensions follow 2h and 2h(n-1)") {
    for (std::size_t n : {2, 3, 20}) {
      for (std::size_t h : {1, 2, 3}) {
        const auto agent = make_agent(AgentId{0}, small_config(n, h), RngStream(n * 10 + h));
        CHECK(agent.dilemma_policy.net.input_dim() == 2 * h);
        CHECK(agent.dilemma_policy.net.output_dim() == 2);
        CHECK(agent.selection_policy.net.input_dim() == 2 * h * (n - 1));
        CHECK(agent.selection_policy.net.output_dim() == n - 1);
        CHECK(agent.dilemma_policy.epsilon == 0.05);
        CHECK(agent.selection_policy.epsilon == 0.1);
      }
    }
  }

  TEST_CASE("selection index skips self") {
    CHECK(partner_for_index(AgentId{1}, 0) == AgentId{0});
    CHECK(partner_for_index(AgentId{1}, 1) == AgentId{2});
    CHECK(partner_for_index(AgentId{0}, 0) == AgentId{1});
  }

  TEST_CASE("uniform partner choice at epsilon_s = 1") {
    auto cfg = small_config(4);
    cfg.epsilon_selection = 1.0;
    auto agent = make_agent(AgentId{2}, cfg, RngStream(5));
    const std::vector<HistoryWindow> others = {history_of({C}), history_of({D}), history_of({C})};
    std::array<int, 4> counts{};
    RngStream rng(6);
    const int draws = 10000;
    for (int k = 0; k < draws; ++k) ++counts[choose_partner(agent, others, rng).partner.value];
    CHECK(counts[2] == 0);
    for (std::size_t id : {0, 1, 3}) CHECK(std::abs(counts[id] / double(draws) - 1.0 / 3.0) <= 0.02);
  }

  TEST_CASE("greedy choice follows the selection network") {
    auto cfg = small_config(3);
    cfg.epsilon_selection = 0.0;
    auto agent = make_agent(AgentId{0}, cfg, RngStream(7));
    // Output k scores "agent k's block shows C"; only agent 2 (index 1) cooperated.
    Network net(4, 2, 2);
    net.w1(0, 0) = 1.0;  // hidden 0 <- agent 1 cooperated
    net.w1(1, 2) = 1.0;  // hidden 1 <- agent 2 cooperated
    net.w2(0, 0) = 1.0;
    net.w2(1, 1) = 1.0;
    agent.selection_policy.net = net;
    const std::vector<HistoryWindow> others = {history_of({D}), history_of({C})};
    RngStream rng(8);
    CHECK(choose_partner(agent, others, rng).partner == AgentId{2});
  }

  TEST_CASE("choose_partner never returns self") {
    RngStream seeds(9);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 2 + seeds.uniform_index(8);
      auto cfg = small_config(n);
      cfg.epsilon_selection = seeds.uniform01();
      const AgentId self{seeds.uniform_index(n)};
      auto agent = make_agent(self, cfg, seeds.split(trial));
      std::vector<HistoryWindow> others;
      for (std::size_t j = 0; j + 1 < n; ++j) others.push_back(history_of({seeds.bernoulli(0.5) ? C : D}));
      for (int k = 0; k < 20; ++k) {
        const auto choice = choose_partner(agent, others, seeds);
        CHECK(choice.partner != self);
        CHECK(choice.partner.value < n);
      }
    }
  }

  TEST_CASE("recording interactions by role") {
    auto agent = make_agent(AgentId{0}, small_config(3), RngStream(10));
    SUBCASE("selected but not selector") {
      record_interaction(agent, std::nullopt, {1, 0}, C, 3.0);
      CHECK(agent.dilemma_buffer.size() == 1);
      CHECK(agent.selection_buffer.size() == 0);
    }
    SUBCASE("selector is credited with the game reward") {
      record_interaction(agent, SelectionStep{{1, 0, 0, 1}, 0}, {1, 0}, D, 4.0);
      REQUIRE(agent.selection_buffer.size() == 1);
      CHECK(agent.selection_buffer.transitions()[0].reward == 4.0);
      CHECK(agent.selection_buffer.transitions()[0].action_index == 0);
    }
    SUBCASE("zero credit mode") {
      record_interaction(agent, SelectionStep{{1, 0, 0, 1}, 0}, {1, 0}, D, 4.0, CreditMode::Zero);
      CHECK(agent.selection_buffer.transitions()[0].reward == 0.0);
      CHECK(agent.dilemma_buffer.transitions()[0].reward == 4.0);
    }
    SUBCASE("T rounds as selector") {
      for (int t = 0; t < 10; ++t) record_interaction(agent, SelectionStep{{1, 0, 1, 0}, 1}, {0, 1}, D, 1.0);
      CHECK(agent.selection_buffer.size() == 10);
      CHECK(agent.dilemma_buffer.size() == 10);
      CHECK(agent.selection_buffer.transitions().back().terminal());
      CHECK_FALSE(agent.selection_buffer.transitions().front().terminal());
    }
    CHECK(agent.history.empty());
  }

  TEST_CASE("training refreshes both buffers") {
    auto agent = make_agent(AgentId{1}, small_config(3), RngStream(11));
    record_interaction(agent, SelectionStep{{1, 0, 1, 0}, 1}, {1, 0}, C, 3.0);
    record_interaction(agent, std::nullopt, {0, 1}, D, 1.0);
    const auto before = agent.dilemma_policy.net;
    train_and_refresh(agent, 1e-2, 1);
    CHECK(agent.selection_buffer.empty());
    CHECK(agent.dilemma_buffer.empty());
    CHECK_FALSE(agent.dilemma_policy.net == before);
  }
}
