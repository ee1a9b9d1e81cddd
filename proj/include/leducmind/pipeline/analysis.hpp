#pragma once

#include <array>
#include <string>

#include "leducmind/game/record.hpp"
#include "leducmind/pipeline/deliberation.hpp"

namespace leducmind::pipeline {

struct AnalysisOptions {
  ToMOrder order = ToMOrder::Second;
  game::LeducConfig config;
  int history_cap = 30;  // recent games rendered in full; older ones aggregated
};

// Posterior over the opponent's rank implied by a finished game's public
// outcome alone (my card, the public card, the result sign). Zeros for games
// that ended in a fold, where the outcome reveals nothing about the card.
std::array<double, game::kNumRanks> infer_opponent_rank_weights(
    const game::GameRecord& record);

// Empirical conditional action tables for the opponent, Laplace-smoothed with
// +1 per action cell over the context support. First order keys rows by
// (tier, round, facing); second order additionally by my preceding action.
// Card evidence comes from hindsight_opponent_card when present, otherwise
// from showdown-outcome inference.
belief::OpponentModel fit_opponent_model(const game::MatchDataset& dataset,
                                         ToMOrder order,
                                         const game::LeducConfig& config = {});

// The mirrored tables: my own action tendencies as an observer with hindsight
// would estimate them (second-order bundle text).
belief::OpponentModel fit_self_model(const game::MatchDataset& dataset,
                                     const game::LeducConfig& config = {});

std::string render_reflexion(const game::MatchDataset& dataset, int cap = 30);
std::string render_history(const game::MatchDataset& dataset, int cap = 30);

AnalysisBundle analyze_game_oracle(const game::MatchDataset& dataset,
                                   const AnalysisOptions& options);

}  // namespace leducmind::pipeline
