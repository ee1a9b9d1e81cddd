#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace leducmind::game {

enum class Rank : uint8_t { Jack = 0, Queen = 1, King = 2 };

constexpr int kNumRanks = 3;
constexpr int kDeckSize = 6;
constexpr int kCopiesPerRank = 2;

// One physical card. The deck holds two indistinguishable copies of each
// rank; copy_index only disambiguates deck accounting.
struct Card {
  Rank rank{Rank::Jack};
  uint8_t copy_index{0};

  bool operator==(const Card&) const = default;
};

inline std::array<Card, kDeckSize> full_deck() {
  return {Card{Rank::Jack, 0},  Card{Rank::Jack, 1},  Card{Rank::Queen, 0},
          Card{Rank::Queen, 1}, Card{Rank::King, 0},  Card{Rank::King, 1}};
}

inline const char* rank_name(Rank r) {
  switch (r) {
    case Rank::Jack: return "Jack";
    case Rank::Queen: return "Queen";
    case Rank::King: return "King";
  }
  return "?";
}

inline char rank_letter(Rank r) {
  switch (r) {
    case Rank::Jack: return 'J';
    case Rank::Queen: return 'Q';
    case Rank::King: return 'K';
  }
  return '?';
}

inline Rank rank_from_letter(char c) {
  switch (c) {
    case 'J': case 'j': return Rank::Jack;
    case 'Q': case 'q': return Rank::Queen;
    case 'K': case 'k': return Rank::King;
  }
  throw std::invalid_argument(std::string("unknown rank letter: ") + c);
}

// Canonical action order; per-action arrays and serialized layouts index by
// this order everywhere.
enum class PlayerAction : uint8_t { Call = 0, Raise = 1, Fold = 2, Check = 3 };

constexpr int kNumActions = 4;

constexpr std::array<PlayerAction, kNumActions> all_actions() {
  return {PlayerAction::Call, PlayerAction::Raise, PlayerAction::Fold,
          PlayerAction::Check};
}

inline const char* action_name(PlayerAction a) {
  switch (a) {
    case PlayerAction::Call: return "Call";
    case PlayerAction::Raise: return "Raise";
    case PlayerAction::Fold: return "Fold";
    case PlayerAction::Check: return "Check";
  }
  return "?";
}

inline char action_letter(PlayerAction a) {
  switch (a) {
    case PlayerAction::Call: return 'c';
    case PlayerAction::Raise: return 'r';
    case PlayerAction::Fold: return 'f';
    case PlayerAction::Check: return 'k';
  }
  return '?';
}

std::optional<PlayerAction> action_from_token(const std::string& token);

}  // namespace leducmind::game
