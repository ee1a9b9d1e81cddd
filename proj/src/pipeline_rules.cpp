#include "leducmind/pipeline/rules.hpp"

#include <sstream>
#include <stdexcept>

namespace leducmind::pipeline {

const std::vector<std::string>& observation_field_names() {
  static const std::vector<std::string> names = {
      "player",        "private_card", "public_card",
      "pot_contribution", "legal_actions", "round",
      "betting_sequence_public"};
  return names;
}

bool rule_description_complete(const RuleDescription& rule) {
  if (rule.general_rules.empty() || rule.single_win_loss_rule.empty() ||
      rule.win_loss_payoff_rule.empty() || rule.whole_win_loss_rule.empty()) {
    return false;
  }
  if (rule.action_descriptions.empty()) return false;
  for (const auto& [name, text] : rule.action_descriptions) {
    if (name.empty() || text.empty()) return false;
  }
  return true;
}

bool conversion_covers_all_fields(const ObsConversionRule& conv) {
  for (const auto& field : observation_field_names()) {
    const auto it = conv.element_descriptions.find(field);
    if (it == conv.element_descriptions.end() || it->second.empty()) return false;
  }
  return !conv.input_explanation.empty() && !conv.conversion_tips.empty();
}

namespace {

RuleDescription leduc_rules() {
  RuleDescription rule;
  rule.general_rules =
      "Two-player limit card game over a six-card deck holding two Jacks, two "
      "Queens and two Kings. Each player receives one hidden hole card. Play "
      "runs two betting rounds: after the first round closes, one public card "
      "is revealed and a second betting round follows. Seat 0 posts a small "
      "blind of 1 chip, seat 1 posts a big blind of 2 chips, and seat 0 acts "
      "first in both rounds. A raise adds 2 chips in round 1 and 4 chips in "
      "round 2, and each round allows at most two raises.";
  rule.action_descriptions = {
      {"Call", "Match the opponent's outstanding contribution to the pot."},
      {"Raise",
       "Match the outstanding contribution and add the round's raise amount; "
       "only available while the round's raise cap is not reached."},
      {"Fold", "Concede the game immediately, forfeiting chips already put in."},
      {"Check",
       "Decline to bet when there is no outstanding contribution to match."}};
  rule.single_win_loss_rule =
      "At showdown, a hole card matching the public card's rank wins. With no "
      "match on either side, the higher hole card wins and equal ranks draw. "
      "A player who folds loses immediately.";
  rule.win_loss_payoff_rule =
      "The winner gains every chip the loser contributed to the pot; the "
      "loser loses that same amount; a draw refunds both players. A single "
      "game's payoff ranges from 1 to 14 chips.";
  rule.whole_win_loss_rule =
      "A match is a fixed-length series of games; whoever holds more total "
      "chips across the series wins the match.";
  return rule;
}

ObsConversionRule leduc_conversion() {
  ObsConversionRule conv;
  conv.input_explanation =
      "The observation is a record with seven named elements describing one "
      "player's view of the current game state.";
  conv.element_descriptions = {
      {"player", "Which seat (0 or 1) this observation belongs to."},
      {"private_card", "The rank of this player's hidden hole card."},
      {"public_card",
       "The revealed community card rank, present only from round 2 onward."},
      {"pot_contribution", "Chips each seat has placed in the pot so far."},
      {"legal_actions", "The actions this player may take right now."},
      {"round", "The current betting round, 1 or 2."},
      {"betting_sequence_public",
       "Every betting action taken so far, in order, with the acting seat."}};
  conv.conversion_tips =
      "State the player's own card by rank name, say 'not revealed' when the "
      "public card is absent, give both pot contributions explicitly, and "
      "list the legal actions by name.";
  return conv;
}

}  // namespace

const RuleDescription& rule_description(const std::string& game) {
  static const RuleDescription leduc = leduc_rules();
  if (game == "leduc") return leduc;
  throw std::invalid_argument("unregistered game: " + game);
}

const ObsConversionRule& obs_conversion(const std::string& game) {
  static const ObsConversionRule leduc = leduc_conversion();
  if (game == "leduc") return leduc;
  throw std::invalid_argument("unregistered game: " + game);
}

std::string rule_text(const RuleDescription& rule) {
  std::ostringstream out;
  out << "General Rules: " << rule.general_rules << "\n";
  out << "Action Descriptions:";
  for (const auto& [name, text] : rule.action_descriptions) {
    out << " " << name << ": " << text;
  }
  out << "\nSingle Win/Loss Rule: " << rule.single_win_loss_rule << "\n";
  out << "Win/Loss Payoff Rule: " << rule.win_loss_payoff_rule << "\n";
  out << "Whole Win/Loss Rule: " << rule.whole_win_loss_rule << "\n";
  return out.str();
}

std::string conversion_text(const ObsConversionRule& conv) {
  std::ostringstream out;
  out << "Input Explanation: " << conv.input_explanation << "\n";
  out << "Element Descriptions:";
  for (const auto& [name, text] : conv.element_descriptions) {
    out << " " << name << ": " << text;
  }
  out << "\nConversion Tips: " << conv.conversion_tips << "\n";
  return out.str();
}

std::string raw_observation_text(const game::Observation& obs) {
  std::ostringstream out;
  out << "player=" << obs.player;
  out << " private_card=" << game::rank_letter(obs.private_card);
  out << " public_card="
      << (obs.public_card ? std::string(1, game::rank_letter(*obs.public_card))
                          : std::string("none"));
  out << " pot_contribution=[" << obs.pot_contribution[0] << ","
      << obs.pot_contribution[1] << "]";
  out << " round=" << obs.round;
  out << " legal_actions=[";
  for (size_t i = 0; i < obs.legal.size(); ++i) {
    if (i) out << ",";
    out << game::action_name(obs.legal[i]);
  }
  out << "] betting_sequence_public=[";
  for (size_t i = 0; i < obs.betting_sequence_public.size(); ++i) {
    if (i) out << ",";
    out << obs.betting_sequence_public[i].first << ":"
        << game::action_name(obs.betting_sequence_public[i].second);
  }
  out << "]";
  return out.str();
}

std::string interpret_observation(const RuleDescription& rule,
                                  const ObsConversionRule& conv,
                                  const game::Observation& obs) {
  if (!rule_description_complete(rule)) {
    throw std::invalid_argument("incomplete rule description");
  }
  if (!conversion_covers_all_fields(conv)) {
    throw std::invalid_argument("conversion rule does not cover all fields");
  }
  std::ostringstream out;
  out << "You are seat " << obs.player << " in betting round " << obs.round
      << ". Your hole card is a " << game::rank_name(obs.private_card) << ". ";
  if (obs.public_card) {
    out << "The public card is a " << game::rank_name(*obs.public_card) << ". ";
  } else {
    out << "The public card is not revealed. ";
  }
  out << "Pot contributions: seat 0 has put in " << obs.pot_contribution[0]
      << " chips, seat 1 has put in " << obs.pot_contribution[1] << " chips. ";
  if (!obs.betting_sequence_public.empty()) {
    out << "Actions so far:";
    for (const auto& [seat, action] : obs.betting_sequence_public) {
      out << " seat " << seat << " " << game::action_name(action) << ",";
    }
    out.seekp(-1, std::ios_base::end);
    out << ". ";
  }
  out << "Your legal actions are:";
  for (size_t i = 0; i < obs.legal.size(); ++i) {
    out << (i ? ", " : " ") << game::action_name(obs.legal[i]);
  }
  out << ".";
  return out.str();
}

}  // namespace leducmind::pipeline
