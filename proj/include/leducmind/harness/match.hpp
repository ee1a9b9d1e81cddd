#pragma once

#include <map>
#include <string>
#include <vector>

#include "leducmind/harness/agent.hpp"

namespace leducmind::harness {

struct MatchOptions {
  game::LeducConfig config;
  bool hindsight = true;  // recorded into persisted games
};

// Plays one seeded game to completion and hands the finished record to both
// agents.
game::GameRecord play_game(MatchAgent& seat0, MatchAgent& seat1, uint64_t seed,
                           int64_t game_id, const MatchOptions& options = {});

struct MatchReport {
  std::array<std::string, 2> agent_names;  // agent-centric: [A, B]
  std::string protocol;                    // "seeds" or "swap"
  std::vector<std::array<int, 2>> per_game_payoffs;  // agent-indexed
  std::array<int, 2> totals{};
  std::string winner;  // agent name, or "draw" when totals are level
  // Share of Call/Raise/Fold/Check (canonical order) per agent.
  std::array<std::array<double, game::kNumActions>, 2> action_shares{};
  std::string config_snapshot;  // JSON text
};

struct MatchResult {
  MatchReport report;
  std::vector<game::GameRecord> records;
};

// Game i is seeded base_seed + i; agent A keeps seat 0 throughout. The
// dataset of an adaptive agent accrues across all games.
MatchResult run_variable_seeds(MatchAgent& agent_a, MatchAgent& agent_b,
                               int n_games, uint64_t base_seed,
                               const MatchOptions& options = {});

// Two legs over the same seed list: A at seat 0 first, then seats exchanged,
// so both agents face the identical card sequence from both sides.
MatchResult run_position_swap(MatchAgent& agent_a, MatchAgent& agent_b,
                              int n_games_per_leg, uint64_t seed,
                              const MatchOptions& options = {});

// Per-agent share of each action over every recorded decision.
std::map<std::string, std::array<double, game::kNumActions>> action_percentages(
    const std::vector<game::GameRecord>& records);

}  // namespace leducmind::harness
