#pragma once

#include <optional>
#include <string>
#include <vector>

#include "leducmind/belief/belief.hpp"
#include "leducmind/game/state.hpp"

namespace leducmind::pipeline {

enum class ToMOrder : int { Zero = 0, First = 1, Second = 2 };

inline const char* tom_order_name(ToMOrder order) {
  switch (order) {
    case ToMOrder::Zero: return "zero";
    case ToMOrder::First: return "first";
    case ToMOrder::Second: return "second";
  }
  return "?";
}

// Per-game analysis produced before the first decision of a game: reflexion,
// the opponent's estimated behaviour pattern, and (second order only) the
// opponent's presumed read on us.
struct AnalysisBundle {
  bool empty = true;  // allowed for game 1 or after an analysis parse failure
  std::string reflexion_text;
  belief::OpponentModel pattern_model;  // Uniform when empty
  std::string pattern_text;
  std::string opponent_belief_on_me;  // second order only
};

struct PlanWithRationale {
  belief::PlanCandidate candidate;
  std::string rationale;
};

// Full reasoning trace of one turn.
struct DeliberationRecord {
  ToMOrder tom_order = ToMOrder::Zero;
  std::string obs_text;
  belief::BeliefDistribution belief;
  std::string belief_text;
  bool belief_degenerate_fallback = false;
  std::vector<PlanWithRationale> plans;
  game::PlayerAction chosen{game::PlayerAction::Check};
  std::vector<std::string> raw_prompts;
  std::vector<std::string> raw_completions;
  bool fallback_used = false;
  // Oracle cross-check of a backend's stated choice (LLM mode only).
  std::optional<game::PlayerAction> oracle_choice;
  double oracle_gain_delta = 0.0;
};

}  // namespace leducmind::pipeline
