// Seed-majority reproduction checks. Prints one PASS/FAIL line per criterion
// and exits nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "dilemma/analysis.hpp"
#include "dilemma/sim.hpp"

using namespace dilemma;

namespace {

constexpr std::size_t kSeeds = 14;

struct SeedRun {
  std::uint64_t seed = 0;
  RunRecord record;
  double seconds = 0.0;
};

std::vector<SeedRun> run_all(ExperimentConfig base, const char* label) {
  std::vector<SeedRun> runs(kSeeds);
  std::atomic<std::size_t> next{0};
  std::mutex io;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < kSeeds;) {
      auto cfg = base;
      cfg.seed = 1 + i;
      const auto start = std::chrono::steady_clock::now();
      runs[i].record = run_experiment(validate_config(cfg));
      runs[i].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      runs[i].seed = cfg.seed;
      std::lock_guard lock(io);
      std::fprintf(stderr, "  %s seed %llu done in %.1fs\n", label, static_cast<unsigned long long>(cfg.seed),
                   runs[i].seconds);
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, kSeeds);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return runs;
}

// Mean of `get` over episodes [from, to).
double window_mean(const RunRecord& r, std::size_t from, std::size_t to,
                   const std::function<double(const EpisodeMetrics&)>& get) {
  double sum = 0.0;
  for (std::size_t e = from; e < to; ++e) sum += get(r.metrics[e]);
  return sum / static_cast<double>(to - from);
}

double final_mean(const RunRecord& r, std::size_t window, const std::function<double(const EpisodeMetrics&)>& get) {
  const auto n = r.metrics.size();
  return window_mean(r, n - window, n, get);
}

std::function<double(const EpisodeMetrics&)> outcome_of(Outcome o) {
  return [o](const EpisodeMetrics& m) { return m.outcome(o); };
}

std::function<double(const EpisodeMetrics&)> count_of(StrategyClass s) {
  return [s](const EpisodeMetrics& m) { return static_cast<double>(m.count(s)); };
}

// Trailing moving average; entry i covers episodes [i-w+1, i].
std::vector<double> smoothed(const RunRecord& r, Outcome o, std::size_t w) {
  std::vector<double> out(r.metrics.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < r.metrics.size(); ++i) {
    sum += r.metrics[i].outcome(o);
    if (i >= w) sum -= r.metrics[i - w].outcome(o);
    out[i] = sum / static_cast<double>(std::min(i + 1, w));
  }
  return out;
}

int failures = 0;

void report(const char* name, bool pass, const std::string& detail) {
  std::printf("%s  %-28s %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string tally(std::size_t hits, std::size_t need) {
  return std::to_string(hits) + "/" + std::to_string(kSeeds) + " seeds (need >= " + std::to_string(need) + ")";
}

}  // namespace

int main() {
  // Property suites: the unit binary is run twice; both runs must pass.
  {
    const std::string cmd = std::string("DILEMMA_LOG=off \"") + UNIT_TESTS_PATH + "\" --minimal >/dev/null 2>&1";
    const bool first = std::system(cmd.c_str()) == 0;
    const bool second = std::system(cmd.c_str()) == 0;
    report("property-suites", first && second,
           std::string("unit suite runs: ") + (first ? "pass" : "fail") + ", " + (second ? "pass" : "fail"));
  }

  ExperimentConfig base;
  base.metrics_checkpoints = {};

  // Two-player baseline.
  {
    auto cfg = base;
    cfg.matching_mode = MatchingMode::TwoPlayerFixed;
    cfg.n_agents = 2;
    cfg.n_episodes = 5000;
    const auto runs = run_all(cfg, "two-player");
    std::size_t hits = 0;
    double slowest = 0.0;
    for (const auto& r : runs) {
      if (r.record.metrics.back().count(StrategyClass::AllD) == 2) ++hits;
      slowest = std::max(slowest, r.seconds);
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "; slowest seed %.1fs (limit 120s)", slowest);
    report("two-player-alld", hits >= 12 && slowest < 120.0, tally(hits, 12) + buf);
  }

  // Random matching.
  const auto rm = [&] {
    auto cfg = base;
    cfg.matching_mode = MatchingMode::RandomMatching;
    cfg.n_episodes = 10000;
    return run_all(cfg, "random-matching");
  }();
  {
    std::size_t hits = 0;
    std::string detail;
    for (const auto& r : rm) {
      const double md = final_mean(r.record, 1000, outcome_of(Outcome::MutualDefection));
      const double mc = final_mean(r.record, 1000, outcome_of(Outcome::MutualCooperation));
      if (md >= 0.70 && mc < 0.10) ++hits;
      char buf[48];
      std::snprintf(buf, sizeof buf, " md=%.3f/mc=%.3f", md, mc);
      detail += buf;
    }
    report("random-matching-defect", hits >= 12, tally(hits, 12) + ";" + detail);
  }

  // Partner selection.
  auto ps_cfg = base;
  ps_cfg.n_episodes = 20000;
  const auto ps = run_all(ps_cfg, "partner-selection");

  {
    std::size_t modal = 0;
    std::string detail;
    for (const auto& r : ps) {
      std::array<double, kNumOutcomes> share{};
      for (std::size_t o = 0; o < kNumOutcomes; ++o) share[o] = final_mean(r.record, 2000, outcome_of(Outcome(o)));
      const auto mc = share[static_cast<std::size_t>(Outcome::MutualCooperation)];
      if (mc > std::max({share[1], share[2], share[3]})) ++modal;
      char buf[64];
      std::snprintf(buf, sizeof buf, " mc=%.3f/ex=%.3f/md=%.3f", share[0], share[1], share[3]);
      detail += buf;
    }
    report("partner-selection-mc-modal", modal >= 10, tally(modal, 10) + ";" + detail);
  }
  {
    std::size_t hits = 0;
    std::string detail;
    const auto total = [](const EpisodeMetrics& m) { return m.total_reward; };
    for (std::size_t i = 0; i < kSeeds; ++i) {
      const double p = final_mean(ps[i].record, 2000, total);
      const double q = final_mean(rm[i].record, 2000, total);
      if (p > q) ++hits;
      char buf[48];
      std::snprintf(buf, sizeof buf, " %.1f/%.1f", p, q);
      detail += buf;
    }
    report("partner-selection-reward", hits >= 12, tally(hits, 12) + "; ps/rm:" + detail);
  }
  {
    std::size_t hits = 0;
    std::string detail;
    for (const auto& r : ps) {
      const double acc = final_mean(r.record, 2000, [](const EpisodeMetrics& m) { return m.selection_accuracy; });
      if (acc >= 0.85) ++hits;
      char buf[16];
      std::snprintf(buf, sizeof buf, " %.3f", acc);
      detail += buf;
    }
    report("selection-accuracy", hits >= 10, tally(hits, 10) + ";" + detail);
  }
  {
    std::size_t hits = 0;
    std::string detail;
    for (const auto& r : ps) {
      const auto ex = smoothed(r.record, Outcome::Exploitation, 250);
      const auto mc = smoothed(r.record, Outcome::MutualCooperation, 250);
      // Only full windows count.
      const auto first = static_cast<std::ptrdiff_t>(249);
      const auto peak = std::max_element(ex.begin() + first, ex.end()) - ex.begin();
      std::ptrdiff_t cross = -1;
      for (std::size_t e = 249; e < mc.size(); ++e) {
        if (mc[e] > ex[e]) {
          cross = static_cast<std::ptrdiff_t>(e);
          break;
        }
      }
      if (cross >= 0 && peak < cross) ++hits;
      detail += " " + std::to_string(peak) + "<" + (cross >= 0 ? std::to_string(cross) : std::string("never"));
    }
    report("phase-ordering", hits >= 10, tally(hits, 10) + "; ex-peak<mc-cross:" + detail);
  }
  {
    std::size_t rise = 0;
    std::size_t alld_min = 0;
    std::string detail;
    for (const auto& r : ps) {
      const double early = window_mean(r.record, 0, 2501, count_of(StrategyClass::TFT));
      const double late = final_mean(r.record, 2000, count_of(StrategyClass::TFT));
      if (late > early) ++rise;
      std::array<double, kNumStrategies> counts{};
      for (std::size_t s = 0; s < kNumStrategies; ++s)
        counts[s] = final_mean(r.record, 2000, count_of(StrategyClass(s)));
      const double alld = counts[static_cast<std::size_t>(StrategyClass::AllD)];
      if (alld <= *std::min_element(counts.begin(), counts.end())) ++alld_min;
      char buf[64];
      std::snprintf(buf, sizeof buf, " tft %.2f->%.2f alld %.2f", early, late, alld);
      detail += buf;
    }
    report("tft-emergence", rise >= 10 && alld_min >= 10,
           "tft rises " + tally(rise, 10) + ", alld minimum " + tally(alld_min, 10) + ";" + detail);
  }

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
