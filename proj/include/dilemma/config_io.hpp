#ifndef DILEMMA_CONFIG_IO_HPP
#define DILEMMA_CONFIG_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "dilemma/core.hpp"

namespace dilemma {

// Malformed or unreadable configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Flat TOML: one `key = value` per line, `#` comments, no tables.
// Missing keys keep their defaults; unknown keys are an error. Payoff
// entries use the keys payoff_T, payoff_R, payoff_P and payoff_S.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Every field, in a form parse_config reads back exactly.
void write_config(std::ostream& out, const ExperimentConfig& cfg);

}  // namespace dilemma

#endif  // DILEMMA_CONFIG_IO_HPP
