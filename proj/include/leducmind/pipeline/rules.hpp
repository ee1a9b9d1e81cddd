#pragma once

#include <map>
#include <string>
#include <vector>

#include "leducmind/game/state.hpp"

namespace leducmind::pipeline {

// Structured textual game description fed to prompted stages.
struct RuleDescription {
  std::string general_rules;
  std::map<std::string, std::string> action_descriptions;  // by action name
  std::string single_win_loss_rule;
  std::string win_loss_payoff_rule;
  std::string whole_win_loss_rule;
};

// How low-level observations become readable text.
struct ObsConversionRule {
  std::string input_explanation;
  std::map<std::string, std::string> element_descriptions;  // by field name
  std::string conversion_tips;
};

const std::vector<std::string>& observation_field_names();

bool rule_description_complete(const RuleDescription& rule);
bool conversion_covers_all_fields(const ObsConversionRule& conv);

// Registry; throws std::invalid_argument for unregistered games.
const RuleDescription& rule_description(const std::string& game);
const ObsConversionRule& obs_conversion(const std::string& game);

std::string rule_text(const RuleDescription& rule);
std::string conversion_text(const ObsConversionRule& conv);

// Raw field dump handed to the conversion prompt in LLM mode.
std::string raw_observation_text(const game::Observation& obs);

// Deterministic oracle-mode rendering: names the own card, the public card
// (or "not revealed"), both pot contributions, the round and legal actions.
std::string interpret_observation(const RuleDescription& rule,
                                  const ObsConversionRule& conv,
                                  const game::Observation& obs);

}  // namespace leducmind::pipeline
