#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "leducmind/belief/belief.hpp"
#include "leducmind/game/cards.hpp"

namespace leducmind::llm {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A completion carved into the canonical deliberation sections and the typed
// fields the pipeline consumes.
struct ParsedDeliberation {
  std::map<std::string, std::string> sections;  // canonical name -> raw text
  belief::BeliefDistribution belief;
  bool has_belief = false;
  bool belief_renormalized = false;  // stated percentages did not sum to 100
  std::map<game::PlayerAction, double> plan_gains;
  game::PlayerAction selection{game::PlayerAction::Check};
};

// Tolerant of prose between sections; throws ParseError when the selection
// section is missing, the selection is unresolvable or illegal, or a plan's
// gain has no number.
ParsedDeliberation parse_deliberation(
    const std::string& text, const std::vector<game::PlayerAction>& legal);

struct BeliefExtract {
  belief::BeliefDistribution belief;
  bool found = false;
  bool renormalized = false;
};

// Pulls "King (80%)" / "Jack (probability 70%)"-style figures, keeping the
// last mention per rank, and normalizes to sum 1.
BeliefExtract extract_belief(const std::string& text);

struct ParsedPattern {
  belief::OpponentModel model;  // Static rows for every clause understood
  int rows_parsed = 0;
  std::string raw_text;
};

// Reads free-text descriptions of per-card action tendencies ("When he holds
// a King, he tends to raise (70%) or call (30%)") into Static model rows.
ParsedPattern parse_behavior_pattern(const std::string& text);

// Canonical rendering whose output parse_deliberation maps back onto the
// same structure.
std::string serialize_deliberation(const ParsedDeliberation& parsed);

std::string serialize_pattern(const belief::OpponentModel& model);

}  // namespace leducmind::llm
