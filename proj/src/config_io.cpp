#include "dilemma/config_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace dilemma {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

struct Value {
  std::string_view raw;
  std::string_view key;
  std::size_t line = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("line " + std::to_string(line) + ": " + std::string(key) + ": " + what);
  }

  std::uint64_t as_u64() const { return parse_u64(raw); }

  std::uint64_t parse_u64(std::string_view s) const {
    std::string cleaned;
    for (char c : s) {
      if (c != '_') cleaned.push_back(c);
    }
    std::uint64_t v = 0;
    const auto* end = cleaned.data() + cleaned.size();
    const auto [ptr, ec] = std::from_chars(cleaned.data(), end, v);
    if (ec != std::errc() || ptr != end || cleaned.empty()) fail("expected a non-negative integer, got '" + std::string(s) + "'");
    return v;
  }

  std::size_t as_size() const { return static_cast<std::size_t>(as_u64()); }

  double as_real() const {
    std::string cleaned;
    for (char c : raw) {
      if (c != '_') cleaned.push_back(c);
    }
    double v = 0.0;
    const auto* end = cleaned.data() + cleaned.size();
    const auto [ptr, ec] = std::from_chars(cleaned.data(), end, v);
    if (ec != std::errc() || ptr != end || cleaned.empty()) fail("expected a number, got '" + std::string(raw) + "'");
    return v;
  }

  std::string as_string() const {
    if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"') fail("expected a quoted string");
    return std::string(raw.substr(1, raw.size() - 2));
  }

  std::vector<std::size_t> as_size_list() const {
    if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') fail("expected an array of integers");
    std::vector<std::size_t> out;
    std::string_view body = raw.substr(1, raw.size() - 2);
    while (!trim(body).empty()) {
      const auto comma = body.find(',');
      const auto item = trim(body.substr(0, comma));
      if (!item.empty()) out.push_back(static_cast<std::size_t>(parse_u64(item)));
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
    }
    return out;
  }
};

using Setter = std::function<void(ExperimentConfig&, const Value&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"n_agents", [](auto& c, const Value& v) { c.n_agents = v.as_size(); }},
      {"h", [](auto& c, const Value& v) { c.h = v.as_size(); }},
      {"rounds_per_episode", [](auto& c, const Value& v) { c.rounds_per_episode = v.as_size(); }},
      {"n_episodes", [](auto& c, const Value& v) { c.n_episodes = v.as_size(); }},
      {"matching_mode", [](auto& c, const Value& v) { c.matching_mode = parse_matching_mode(v.as_string()); }},
      {"epsilon_dilemma", [](auto& c, const Value& v) { c.epsilon_dilemma = v.as_real(); }},
      {"epsilon_selection", [](auto& c, const Value& v) { c.epsilon_selection = v.as_real(); }},
      {"gamma", [](auto& c, const Value& v) { c.gamma = v.as_real(); }},
      {"hidden_size", [](auto& c, const Value& v) { c.hidden_size = v.as_size(); }},
      {"learning_rate", [](auto& c, const Value& v) { c.learning_rate = v.as_real(); }},
      {"epochs", [](auto& c, const Value& v) { c.epochs = v.as_size(); }},
      {"credit_mode", [](auto& c, const Value& v) { c.credit_mode = parse_credit_mode(v.as_string()); }},
      {"payoff_T", [](auto& c, const Value& v) { c.payoff.T = v.as_real(); }},
      {"payoff_R", [](auto& c, const Value& v) { c.payoff.R = v.as_real(); }},
      {"payoff_P", [](auto& c, const Value& v) { c.payoff.P = v.as_real(); }},
      {"payoff_S", [](auto& c, const Value& v) { c.payoff.S = v.as_real(); }},
      {"seed", [](auto& c, const Value& v) { c.seed = v.as_u64(); }},
      {"metrics_checkpoints", [](auto& c, const Value& v) { c.metrics_checkpoints = v.as_size_list(); }},
      {"network_window", [](auto& c, const Value& v) { c.network_window = v.as_size(); }},
      {"layout_iterations", [](auto& c, const Value& v) { c.layout_iterations = v.as_size(); }},
  };
  return table;
}

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      throw ConfigError("line " + std::to_string(line_no) + ": tables are not supported; use flat keys");
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto raw = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    it->second(cfg, Value{raw, key, line_no});
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const Error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
  out << "n_agents = " << c.n_agents << '\n';
  out << "h = " << c.h << '\n';
  out << "rounds_per_episode = " << c.rounds_per_episode << '\n';
  out << "n_episodes = " << c.n_episodes << '\n';
  out << "matching_mode = \"" << matching_mode_name(c.matching_mode) << "\"\n";
  out << "epsilon_dilemma = " << real(c.epsilon_dilemma) << '\n';
  out << "epsilon_selection = " << real(c.epsilon_selection) << '\n';
  out << "gamma = " << real(c.gamma) << '\n';
  out << "hidden_size = " << c.hidden_size << '\n';
  out << "learning_rate = " << real(c.learning_rate) << '\n';
  out << "epochs = " << c.epochs << '\n';
  out << "credit_mode = \"" << credit_mode_name(c.credit_mode) << "\"\n";
  out << "payoff_T = " << real(c.payoff.T) << '\n';
  out << "payoff_R = " << real(c.payoff.R) << '\n';
  out << "payoff_P = " << real(c.payoff.P) << '\n';
  out << "payoff_S = " << real(c.payoff.S) << '\n';
  out << "seed = " << c.seed << '\n';
  out << "metrics_checkpoints = [";
  for (std::size_t i = 0; i < c.metrics_checkpoints.size(); ++i) {
    out << (i ? ", " : "") << c.metrics_checkpoints[i];
  }
  out << "]\n";
  out << "network_window = " << c.network_window << '\n';
  out << "layout_iterations = " << c.layout_iterations << '\n';
}

}  // namespace dilemma
