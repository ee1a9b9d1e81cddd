#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "leducmind/game/cards.hpp"

namespace leducmind::game {

// Blind/raise structure. Defaults give the 1..14 chip payoff range.
struct LeducConfig {
  int small_blind = 1;
  int big_blind = 2;
  std::array<int, 2> raise_size = {2, 4};  // per round
  int max_raises_per_round = 2;

  bool operator==(const LeducConfig&) const = default;
};

enum class Winner : uint8_t { Seat0 = 0, Seat1 = 1, Draw = 2 };

struct GameError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IllegalActionError : GameError {
  using GameError::GameError;
};

// Value-semantic game state; operations return new states.
struct GameState {
  LeducConfig config;
  int round = 1;  // 1 or 2
  std::array<Card, 2> hole_cards{};
  std::optional<Card> public_card;  // set once round 2 begins
  Card predrawn_public{};           // dealt face-down at game start
  std::array<int, 2> pot_contribution{};
  int raises_this_round = 0;
  int to_act = 0;
  int actions_this_round = 0;
  std::vector<std::pair<int, PlayerAction>> betting_sequence;
  bool terminal = false;
  std::optional<Winner> winner;

  bool operator==(const GameState&) const = default;
};

// The acting player's imperfect view. Never carries the opponent's hole card.
struct Observation {
  int player = 0;
  Rank private_card{Rank::Jack};
  std::optional<Rank> public_card;
  std::array<int, 2> pot_contribution{};
  std::vector<PlayerAction> legal;
  int round = 1;
  std::vector<std::pair<int, PlayerAction>> betting_sequence_public;

  bool operator==(const Observation&) const = default;
};

GameState new_game(uint64_t seed, const LeducConfig& config = {});

// Deterministic deal injection (tree building, replay reconstruction, tests).
GameState new_game_with_deal(Card hole0, Card hole1, Card public_card,
                             const LeducConfig& config = {});

std::vector<PlayerAction> legal_actions(const GameState& state);
GameState apply_action(const GameState& state, PlayerAction action);
std::array<int, 2> payoff(const GameState& state);
Observation observe(const GameState& state, int player);

// Showdown rule: pairing the public card wins; otherwise higher rank;
// equal ranks draw.
Winner showdown_winner(Rank hole0, Rank hole1, Rank public_rank);

// One annotated public betting step, reconstructed by replaying a sequence.
struct BettingStep {
  int seat = 0;
  PlayerAction action{PlayerAction::Call};
  int round = 1;
  bool facing_bet = false;
  int raises_before = 0;  // raises already made this round
  // The other seat's chronologically latest action before this step.
  std::optional<PlayerAction> opponent_last_action;
};

std::vector<PlayerAction> legal_from_context(bool facing_bet, int raises,
                                             const LeducConfig& config = {});

std::vector<BettingStep> annotate_betting(
    const std::vector<std::pair<int, PlayerAction>>& sequence,
    const LeducConfig& config = {});

// Raise count within the current (latest) round of a public sequence.
int raises_in_current_round(
    const std::vector<std::pair<int, PlayerAction>>& sequence,
    const LeducConfig& config = {});

std::string betting_string(
    const std::vector<std::pair<int, PlayerAction>>& sequence,
    const LeducConfig& config = {});

}  // namespace leducmind::game
