#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "leducmind/game/state.hpp"

namespace leducmind::pipeline {
struct DeliberationRecord;  // defined in pipeline/deliberation.hpp
}

namespace leducmind::game {

struct StepRecord {
  int seat = 0;     // who acted
  Observation obs;  // harness records: the actor's view; agent-side copies
                    // substitute the owning agent's contemporaneous view
  PlayerAction action{PlayerAction::Call};
  std::shared_ptr<const pipeline::DeliberationRecord> deliberation;
};

// One finished game. The deal block is environment ground truth used for
// replay persistence; hindsight_opponent_card is the only card datum that
// ever enters an agent's cross-game history, and only when hindsight is on.
struct GameRecord {
  int64_t game_id = 0;
  uint64_t seed = 0;
  std::array<std::string, 2> seat_agent_names{};
  Card deal_hole0{}, deal_hole1{}, deal_public{};
  std::vector<StepRecord> steps;
  std::array<int, 2> result{};  // chip payoff per seat, zero-sum
  bool hindsight = false;
  std::optional<Card> hindsight_opponent_card;
  int perspective_seat = -1;  // set on agent-side copies; -1 on harness records
};

// Append-only, ordered by game index.
struct MatchDataset {
  std::vector<GameRecord> games;

  void append(GameRecord record) { games.push_back(std::move(record)); }
  bool empty() const { return games.empty(); }
  size_t size() const { return games.size(); }
};

}  // namespace leducmind::game
