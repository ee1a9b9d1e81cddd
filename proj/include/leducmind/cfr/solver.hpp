#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "leducmind/game/state.hpp"
#include "leducmind/opp/policy.hpp"

namespace leducmind::cfr {

// Identifies everything the acting player can see.
struct InfoSetKey {
  int player = 0;
  game::Rank own{game::Rank::Jack};
  std::optional<game::Rank> public_rank;
  std::string betting;  // action letters with a '/' between rounds

  std::string to_string() const;
  static InfoSetKey from_observation(const game::Observation& obs,
                                     const game::LeducConfig& config = {});
  static std::optional<InfoSetKey> parse(const std::string& text);
};

// Legal actions at a key, reconstructed by replaying its betting string.
std::vector<game::PlayerAction> legal_actions_for_key(
    const InfoSetKey& key, const game::LeducConfig& config = {});

struct InfoSetEntry {
  std::array<double, game::kNumActions> regret_sum{};
  std::array<double, game::kNumActions> strategy_sum{};
};

struct StrategyProfile {
  game::LeducConfig config;
  std::map<std::string, InfoSetEntry> entries;
  // Lookups that missed the table and fell back to uniform. Atomic so a
  // trained profile stays safe for concurrent reads across matches.
  mutable std::atomic<uint64_t> unknown_key_lookups{0};

  StrategyProfile() = default;
  StrategyProfile(const StrategyProfile& other)
      : config(other.config),
        entries(other.entries),
        unknown_key_lookups(other.unknown_key_lookups.load()) {}
  StrategyProfile& operator=(const StrategyProfile& other) {
    config = other.config;
    entries = other.entries;
    unknown_key_lookups.store(other.unknown_key_lookups.load());
    return *this;
  }
  StrategyProfile(StrategyProfile&& other) noexcept
      : config(std::move(other.config)),
        entries(std::move(other.entries)),
        unknown_key_lookups(other.unknown_key_lookups.load()) {}
  StrategyProfile& operator=(StrategyProfile&& other) noexcept {
    config = std::move(other.config);
    entries = std::move(other.entries);
    unknown_key_lookups.store(other.unknown_key_lookups.load());
    return *this;
  }
};

struct TrainOptions {
  game::LeducConfig config;
  bool simultaneous_updates = false;  // default: alternating
};

// Vanilla CFR with exact chance enumeration over the public tree. Fully
// deterministic; the seed parameter is kept for interface stability only.
class CfrSolver {
 public:
  explicit CfrSolver(TrainOptions options = {});
  ~CfrSolver();
  CfrSolver(CfrSolver&&) noexcept;
  CfrSolver& operator=(CfrSolver&&) noexcept;

  void run(int iterations);
  int iterations_done() const;
  StrategyProfile snapshot() const;
  void load(const StrategyProfile& profile);
  double nash_conv() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

StrategyProfile train(int iterations, uint64_t seed,
                      const TrainOptions& options = {});

opp::ActionDist average_strategy(const StrategyProfile& profile,
                                 const InfoSetKey& key);

// Sum over both seats of best-response value minus the profile's own value
// pair; non-negative, zero at equilibrium. Chips per game.
double nash_conv(const StrategyProfile& profile);

void save_policy(const StrategyProfile& profile, const std::string& path);
StrategyProfile load_policy(const std::string& path);

// Wraps a trained profile as a table policy for match play.
opp::Policy make_cfr_policy(std::shared_ptr<const StrategyProfile> profile,
                            std::string name = "cfr");

}  // namespace leducmind::cfr
