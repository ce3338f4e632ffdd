#ifndef DILEMMA_COMMANDS_HPP
#define DILEMMA_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dilemma/analysis.hpp"
#include "dilemma/core.hpp"

namespace dilemma {

enum class Command { Run, Aggregate, Sweep, Baseline, ExportNetwork };

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Bad invocation (as opposed to a bad config or a runtime failure).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Command-line overrides applied on top of the config file before validation.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<CreditMode> credit_mode;
  std::optional<MatchingMode> matching_mode;
};

// Each command returns an exit code: 0 success, 2 usage/config error,
// 1 runtime failure. Errors are reported on the log.
int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
            const Overrides& overrides = {});

// Without explicit seeds, 14 consecutive seeds starting at the config seed are used.
int cmd_aggregate(const std::filesystem::path& config_path, const std::vector<std::uint64_t>& seeds,
                  const std::filesystem::path& out_dir, std::size_t parallelism, const Overrides& overrides = {});

int cmd_sweep(const std::filesystem::path& config_path, const std::string& param, const std::vector<std::string>& values,
              const std::vector<std::uint64_t>& seeds, const std::filesystem::path& out_dir, std::size_t parallelism,
              const Overrides& overrides = {});

int cmd_baseline(const std::filesystem::path& config_path, const std::string& mode,
                 const std::vector<std::uint64_t>& seeds, const std::filesystem::path& out_dir,
                 std::size_t parallelism, const Overrides& overrides = {});

// Runs the experiment and writes only checkpoints/<episode>/network.json.
int cmd_export_network(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                       const Overrides& overrides = {});

// Runs one experiment per seed (up to `parallelism` at once), writing each
// run's files under out_dir/run_<seed>/. Records are returned in seed order.
std::vector<RunRecord> run_seeds(const ExperimentConfig& base, const std::vector<std::uint64_t>& seeds,
                                 const std::filesystem::path& out_dir, std::size_t parallelism);

// Full command-line entry point.
int run_cli(int argc, char** argv);

}  // namespace dilemma

#endif  // DILEMMA_COMMANDS_HPP
