#include "leducmind/game/state.hpp"

#include <algorithm>
#include <sstream>

#include "leducmind/util/rng.hpp"

namespace leducmind::game {

std::optional<PlayerAction> action_from_token(const std::string& token) {
  std::string lower;
  lower.reserve(token.size());
  for (char c : token) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "call") return PlayerAction::Call;
  if (lower == "raise") return PlayerAction::Raise;
  if (lower == "fold") return PlayerAction::Fold;
  if (lower == "check") return PlayerAction::Check;
  return std::nullopt;
}

namespace {

GameState fresh_state(Card hole0, Card hole1, Card pub, const LeducConfig& config) {
  GameState s;
  s.config = config;
  s.round = 1;
  s.hole_cards = {hole0, hole1};
  s.predrawn_public = pub;
  s.pot_contribution = {config.small_blind, config.big_blind};
  s.raises_this_round = 0;
  s.to_act = 0;
  s.actions_this_round = 0;
  return s;
}

bool facing_bet(const GameState& s, int player) {
  return s.pot_contribution[player] < s.pot_contribution[1 - player];
}

void finish_by_fold(GameState& s, int folder) {
  s.terminal = true;
  s.winner = folder == 0 ? Winner::Seat1 : Winner::Seat0;
}

void finish_by_showdown(GameState& s) {
  s.terminal = true;
  s.winner = showdown_winner(s.hole_cards[0].rank, s.hole_cards[1].rank,
                             s.public_card->rank);
}

void begin_round_two(GameState& s) {
  s.round = 2;
  s.public_card = s.predrawn_public;
  s.raises_this_round = 0;
  s.actions_this_round = 0;
  s.to_act = 0;
}

}  // namespace

Winner showdown_winner(Rank hole0, Rank hole1, Rank public_rank) {
  const bool pair0 = hole0 == public_rank;
  const bool pair1 = hole1 == public_rank;
  if (pair0 && !pair1) return Winner::Seat0;
  if (pair1 && !pair0) return Winner::Seat1;
  // Two copies per rank: both pairing is impossible; compare ranks.
  if (hole0 == hole1) return Winner::Draw;
  return static_cast<int>(hole0) > static_cast<int>(hole1) ? Winner::Seat0
                                                           : Winner::Seat1;
}

GameState new_game(uint64_t seed, const LeducConfig& config) {
  auto deck = full_deck();
  RandomSource rng(seed);
  for (int i = kDeckSize - 1; i > 0; --i) {
    const uint32_t j = rng.next_below(static_cast<uint32_t>(i + 1));
    std::swap(deck[static_cast<size_t>(i)], deck[j]);
  }
  return fresh_state(deck[0], deck[1], deck[2], config);
}

GameState new_game_with_deal(Card hole0, Card hole1, Card public_card,
                             const LeducConfig& config) {
  if (hole0 == hole1 || hole0 == public_card || hole1 == public_card) {
    throw GameError("deal must use three distinct deck cards");
  }
  return fresh_state(hole0, hole1, public_card, config);
}

std::vector<PlayerAction> legal_actions(const GameState& state) {
  if (state.terminal) throw GameError("game over");
  return legal_from_context(facing_bet(state, state.to_act),
                            state.raises_this_round, state.config);
}

GameState apply_action(const GameState& state, PlayerAction action) {
  const auto legal = legal_actions(state);  // throws on terminal
  if (std::find(legal.begin(), legal.end(), action) == legal.end()) {
    std::ostringstream msg;
    msg << "illegal action " << action_name(action) << "; legal:";
    for (auto a : legal) msg << ' ' << action_name(a);
    throw IllegalActionError(msg.str());
  }

  GameState s = state;
  const int me = s.to_act;
  const int opp = 1 - me;
  s.betting_sequence.emplace_back(me, action);
  s.actions_this_round += 1;

  switch (action) {
    case PlayerAction::Fold:
      finish_by_fold(s, me);
      return s;
    case PlayerAction::Call:
      s.pot_contribution[me] = s.pot_contribution[opp];
      break;
    case PlayerAction::Check:
      break;
    case PlayerAction::Raise:
      s.pot_contribution[me] =
          std::max(s.pot_contribution[me], s.pot_contribution[opp]) +
          s.config.raise_size[static_cast<size_t>(s.round - 1)];
      s.raises_this_round += 1;
      break;
  }

  const bool round_closed = s.actions_this_round >= 2 &&
                            s.pot_contribution[0] == s.pot_contribution[1];
  if (round_closed) {
    if (s.round == 1) {
      begin_round_two(s);
    } else {
      finish_by_showdown(s);
    }
  } else {
    s.to_act = opp;
  }
  return s;
}

std::array<int, 2> payoff(const GameState& state) {
  if (!state.terminal) throw GameError("payoff requested on non-terminal state");
  switch (*state.winner) {
    case Winner::Seat0:
      return {state.pot_contribution[1], -state.pot_contribution[1]};
    case Winner::Seat1:
      return {-state.pot_contribution[0], state.pot_contribution[0]};
    case Winner::Draw:
      return {0, 0};
  }
  return {0, 0};
}

Observation observe(const GameState& state, int player) {
  if (player != 0 && player != 1) throw GameError("invalid player index");
  Observation obs;
  obs.player = player;
  obs.private_card = state.hole_cards[static_cast<size_t>(player)].rank;
  if (state.public_card) obs.public_card = state.public_card->rank;
  obs.pot_contribution = state.pot_contribution;
  obs.round = state.round;
  obs.betting_sequence_public = state.betting_sequence;
  if (!state.terminal) {
    // For the non-acting seat this is the hypothetical set were it to act;
    // never empty pre-terminal.
    obs.legal = legal_from_context(
        state.pot_contribution[player] < state.pot_contribution[1 - player],
        state.raises_this_round, state.config);
  }
  return obs;
}

std::vector<PlayerAction> legal_from_context(bool facing_bet, int raises,
                                             const LeducConfig& config) {
  std::vector<PlayerAction> out;
  const bool raise_ok = raises < config.max_raises_per_round;
  if (facing_bet) {
    out.push_back(PlayerAction::Call);
    if (raise_ok) out.push_back(PlayerAction::Raise);
    out.push_back(PlayerAction::Fold);
  } else {
    out.push_back(PlayerAction::Check);
    if (raise_ok) out.push_back(PlayerAction::Raise);
  }
  return out;
}

std::vector<BettingStep> annotate_betting(
    const std::vector<std::pair<int, PlayerAction>>& sequence,
    const LeducConfig& config) {
  std::vector<BettingStep> out;
  out.reserve(sequence.size());
  std::array<int, 2> contrib = {config.small_blind, config.big_blind};
  std::array<std::optional<PlayerAction>, 2> last{};
  int round = 1;
  int acted = 0;
  int raises = 0;
  for (const auto& [seat, action] : sequence) {
    BettingStep step;
    step.seat = seat;
    step.action = action;
    step.round = round;
    step.facing_bet = contrib[seat] < contrib[1 - seat];
    step.raises_before = raises;
    step.opponent_last_action = last[1 - seat];
    out.push_back(step);

    last[seat] = action;
    acted += 1;
    switch (action) {
      case PlayerAction::Call:
        contrib[seat] = contrib[1 - seat];
        break;
      case PlayerAction::Raise:
        contrib[seat] = std::max(contrib[seat], contrib[1 - seat]) +
                        config.raise_size[static_cast<size_t>(round - 1)];
        ++raises;
        break;
      default:
        break;
    }
    if (action == PlayerAction::Fold) break;
    if (acted >= 2 && contrib[0] == contrib[1] && round == 1) {
      round = 2;
      acted = 0;
      raises = 0;
    }
  }
  return out;
}

int raises_in_current_round(
    const std::vector<std::pair<int, PlayerAction>>& sequence,
    const LeducConfig& config) {
  std::array<int, 2> contrib = {config.small_blind, config.big_blind};
  int acted = 0;
  int round = 1;
  int raises = 0;
  for (const auto& [seat, action] : sequence) {
    acted += 1;
    if (action == PlayerAction::Call) contrib[seat] = contrib[1 - seat];
    if (action == PlayerAction::Raise) {
      contrib[seat] = std::max(contrib[seat], contrib[1 - seat]) +
                      config.raise_size[static_cast<size_t>(round - 1)];
      ++raises;
    }
    // A round-1 close leaves the state at the top of round 2, zero raises.
    if (acted >= 2 && contrib[0] == contrib[1] && round == 1) {
      round = 2;
      acted = 0;
      raises = 0;
    }
  }
  return raises;
}

std::string betting_string(
    const std::vector<std::pair<int, PlayerAction>>& sequence,
    const LeducConfig& config) {
  std::string out;
  const auto steps = annotate_betting(sequence, config);
  int round = 1;
  for (const auto& step : steps) {
    if (step.round != round) {
      out.push_back('/');
      round = step.round;
    }
    out.push_back(action_letter(step.action));
  }
  return out;
}

}  // namespace leducmind::game
