#include "leducmind/harness/match.hpp"

#include <stdexcept>

#include "json.hpp"

namespace leducmind::harness {

using game::GameRecord;
using game::GameState;

GameRecord play_game(MatchAgent& seat0, MatchAgent& seat1, uint64_t seed,
                     int64_t game_id, const MatchOptions& options) {
  auto state = game::new_game(seed, options.config);
  seat0.begin_game(game_id, 0);
  seat1.begin_game(game_id, 1);

  GameRecord record;
  record.game_id = game_id;
  record.seed = seed;
  record.seat_agent_names = {seat0.name(), seat1.name()};
  record.deal_hole0 = state.hole_cards[0];
  record.deal_hole1 = state.hole_cards[1];
  record.deal_public = state.predrawn_public;
  record.hindsight = options.hindsight;

  while (!state.terminal) {
    const int actor = state.to_act;
    const auto obs = game::observe(state, actor);
    auto decision = actor == 0 ? seat0.act(obs) : seat1.act(obs);
    game::StepRecord step;
    step.seat = actor;
    step.obs = obs;
    step.action = decision.action;
    step.deliberation = std::move(decision.deliberation);
    record.steps.push_back(std::move(step));
    state = game::apply_action(state, decision.action);
  }
  record.result = game::payoff(state);
  if (record.result[0] + record.result[1] != 0) {
    throw std::logic_error("non-zero-sum payoff");
  }
  seat0.end_game(record);
  seat1.end_game(record);
  return record;
}

namespace {

MatchReport build_report(const std::string& protocol,
                         const std::array<std::string, 2>& names,
                         const std::vector<std::array<int, 2>>& payoffs,
                         const std::vector<GameRecord>& records,
                         const nlohmann::json& snapshot) {
  MatchReport report;
  report.agent_names = names;
  report.protocol = protocol;
  report.per_game_payoffs = payoffs;
  for (const auto& p : payoffs) {
    report.totals[0] += p[0];
    report.totals[1] += p[1];
  }
  report.winner = report.totals[0] > report.totals[1]
                      ? names[0]
                      : report.totals[1] > report.totals[0] ? names[1] : "draw";
  const auto shares = action_percentages(records);
  for (int i = 0; i < 2; ++i) {
    const auto it = shares.find(names[static_cast<size_t>(i)]);
    if (it != shares.end()) report.action_shares[static_cast<size_t>(i)] = it->second;
  }
  report.config_snapshot = snapshot.dump();
  return report;
}

}  // namespace

MatchResult run_variable_seeds(MatchAgent& agent_a, MatchAgent& agent_b,
                               int n_games, uint64_t base_seed,
                               const MatchOptions& options) {
  if (n_games < 1) throw std::invalid_argument("n_games must be >= 1");
  MatchResult result;
  std::vector<std::array<int, 2>> payoffs;
  for (int i = 0; i < n_games; ++i) {
    auto record = play_game(agent_a, agent_b, base_seed + static_cast<uint64_t>(i),
                            i, options);
    payoffs.push_back(record.result);
    result.records.push_back(std::move(record));
  }
  nlohmann::json snapshot;
  snapshot["protocol"] = "seeds";
  snapshot["n_games"] = n_games;
  snapshot["seed"] = base_seed;
  snapshot["hindsight"] = options.hindsight;
  result.report = build_report("seeds", {agent_a.name(), agent_b.name()},
                               payoffs, result.records, snapshot);
  return result;
}

MatchResult run_position_swap(MatchAgent& agent_a, MatchAgent& agent_b,
                              int n_games_per_leg, uint64_t seed,
                              const MatchOptions& options) {
  if (n_games_per_leg < 1) throw std::invalid_argument("n_games must be >= 1");
  MatchResult result;
  std::vector<std::array<int, 2>> payoffs;
  for (int i = 0; i < n_games_per_leg; ++i) {
    auto record = play_game(agent_a, agent_b, seed + static_cast<uint64_t>(i),
                            i, options);
    payoffs.push_back(record.result);
    result.records.push_back(std::move(record));
  }
  for (int i = 0; i < n_games_per_leg; ++i) {
    auto record = play_game(agent_b, agent_a, seed + static_cast<uint64_t>(i),
                            n_games_per_leg + i, options);
    payoffs.push_back({record.result[1], record.result[0]});  // agent-indexed
    result.records.push_back(std::move(record));
  }
  nlohmann::json snapshot;
  snapshot["protocol"] = "swap";
  snapshot["n_games_per_leg"] = n_games_per_leg;
  snapshot["seed"] = seed;
  snapshot["hindsight"] = options.hindsight;
  result.report = build_report("swap", {agent_a.name(), agent_b.name()},
                               payoffs, result.records, snapshot);
  return result;
}

std::map<std::string, std::array<double, game::kNumActions>> action_percentages(
    const std::vector<GameRecord>& records) {
  if (records.empty()) {
    throw std::invalid_argument("action_percentages: no records");
  }
  std::map<std::string, std::array<double, game::kNumActions>> counts;
  for (const auto& record : records) {
    for (const auto& step : record.steps) {
      auto& row = counts[record.seat_agent_names[static_cast<size_t>(step.seat)]];
      row[static_cast<size_t>(step.action)] += 1.0;
    }
  }
  for (auto& [name, row] : counts) {
    (void)name;
    double total = 0.0;
    for (double v : row) total += v;
    if (total > 0) {
      for (auto& v : row) v /= total;
    }
  }
  return counts;
}

}  // namespace leducmind::harness
