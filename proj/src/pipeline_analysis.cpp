#include "leducmind/pipeline/analysis.hpp"

#include <algorithm>
#include <sstream>

#include "leducmind/llm/parser.hpp"

namespace leducmind::pipeline {

using game::GameRecord;
using game::PlayerAction;
using game::Rank;

namespace {

std::vector<std::pair<int, PlayerAction>> action_list(const GameRecord& record) {
  std::vector<std::pair<int, PlayerAction>> out;
  out.reserve(record.steps.size());
  for (const auto& step : record.steps) {
    out.emplace_back(step.seat, step.action);
  }
  return out;
}

bool ended_by_fold(const GameRecord& record) {
  return !record.steps.empty() &&
         record.steps.back().action == PlayerAction::Fold;
}

bool reached_round_two(const GameRecord& record,
                       const game::LeducConfig& config) {
  const auto steps = game::annotate_betting(action_list(record), config);
  return !steps.empty() && steps.back().round == 2;
}

Rank own_rank(const GameRecord& record) {
  const int seat = record.perspective_seat >= 0 ? record.perspective_seat : 0;
  return seat == 0 ? record.deal_hole0.rank : record.deal_hole1.rank;
}

}  // namespace

std::array<double, game::kNumRanks> infer_opponent_rank_weights(
    const GameRecord& record) {
  std::array<double, game::kNumRanks> weights{};
  if (ended_by_fold(record)) return weights;
  const int seat = record.perspective_seat >= 0 ? record.perspective_seat : 0;
  const Rank mine = own_rank(record);
  const Rank pub = record.deal_public.rank;
  const int my_result = record.result[static_cast<size_t>(seat)];

  double total = 0.0;
  for (size_t i = 0; i < game::kNumRanks; ++i) {
    const Rank candidate = static_cast<Rank>(i);
    int copies = game::kCopiesPerRank;
    if (candidate == mine) --copies;
    if (candidate == pub) --copies;
    if (copies <= 0) continue;
    const auto winner = seat == 0 ? game::showdown_winner(mine, candidate, pub)
                                  : game::showdown_winner(candidate, mine, pub);
    int sign = 0;
    if (winner == game::Winner::Seat0) sign = seat == 0 ? 1 : -1;
    if (winner == game::Winner::Seat1) sign = seat == 0 ? -1 : 1;
    const int result_sign = my_result > 0 ? 1 : my_result < 0 ? -1 : 0;
    if (sign != result_sign) continue;
    weights[i] = static_cast<double>(copies);
    total += weights[i];
  }
  if (total > 0) {
    for (auto& w : weights) w /= total;
  }
  return weights;
}

namespace {

// counts[tier][round][facing][my_last (0 none, 1+action)][action]
using Counts =
    std::array<std::array<std::array<std::array<std::array<double, game::kNumActions>, 5>, 2>, 2>,
               opp::kNumTiers>;

void accumulate(Counts& counts, const GameRecord& record, int observed_seat,
                const std::array<double, game::kNumRanks>& rank_weights,
                const game::LeducConfig& config) {
  const auto steps = game::annotate_betting(action_list(record), config);
  for (const auto& step : steps) {
    if (step.seat != observed_seat) continue;
    const size_t facing = step.facing_bet ? 1 : 0;
    const size_t my_last =
        step.opponent_last_action
            ? 1 + static_cast<size_t>(*step.opponent_last_action)
            : 0;
    for (size_t ri = 0; ri < game::kNumRanks; ++ri) {
      const double w = rank_weights[ri];
      if (w <= 0.0) continue;
      const auto tier = opp::hand_tier(
          static_cast<Rank>(ri),
          step.round == 2 ? std::optional<Rank>(record.deal_public.rank)
                          : std::nullopt);
      counts[static_cast<size_t>(tier)][static_cast<size_t>(step.round - 1)]
            [facing][my_last][static_cast<size_t>(step.action)] += w;
    }
  }
}

opp::ActionDist smoothed_row(const std::array<double, game::kNumActions>& cell,
                             bool facing) {
  const auto support = belief::context_support(facing);
  double n = 0.0;
  for (auto a : support) n += cell[static_cast<size_t>(a)];
  opp::ActionDist row;
  const double denom = n + static_cast<double>(support.size());
  for (auto a : support) {
    row[a] = (cell[static_cast<size_t>(a)] + 1.0) / denom;
  }
  return row;
}

belief::OpponentModel model_from_counts(const Counts& counts, ToMOrder order) {
  belief::OpponentModel model;
  model.mode = order == ToMOrder::Second ? belief::ModelMode::Reactive
                                         : belief::ModelMode::Static;
  for (size_t tier = 0; tier < opp::kNumTiers; ++tier) {
    for (size_t round = 0; round < 2; ++round) {
      for (size_t facing = 0; facing < 2; ++facing) {
        std::array<double, game::kNumActions> merged{};
        for (size_t my_last = 0; my_last < 5; ++my_last) {
          const auto& cell = counts[tier][round][facing][my_last];
          for (size_t a = 0; a < game::kNumActions; ++a) merged[a] += cell[a];
          model.reactive_rows[tier][round][facing][my_last] =
              smoothed_row(cell, facing == 1);
        }
        model.static_rows[tier][round][facing] = smoothed_row(merged, facing == 1);
      }
    }
  }
  return model;
}

}  // namespace

belief::OpponentModel fit_opponent_model(const game::MatchDataset& dataset,
                                         ToMOrder order,
                                         const game::LeducConfig& config) {
  if (order == ToMOrder::Zero) return belief::OpponentModel::uniform();
  Counts counts{};
  for (const auto& record : dataset.games) {
    const int seat = record.perspective_seat >= 0 ? record.perspective_seat : 0;
    const int opp_seat = 1 - seat;
    std::array<double, game::kNumRanks> rank_weights{};
    if (record.hindsight_opponent_card) {
      rank_weights[static_cast<size_t>(record.hindsight_opponent_card->rank)] = 1.0;
    } else {
      rank_weights = infer_opponent_rank_weights(record);
    }
    double total = 0.0;
    for (double w : rank_weights) total += w;
    if (total <= 0.0) continue;
    accumulate(counts, record, opp_seat, rank_weights, config);
  }
  return model_from_counts(counts, order);
}

belief::OpponentModel fit_self_model(const game::MatchDataset& dataset,
                                     const game::LeducConfig& config) {
  Counts counts{};
  for (const auto& record : dataset.games) {
    const int seat = record.perspective_seat >= 0 ? record.perspective_seat : 0;
    std::array<double, game::kNumRanks> rank_weights{};
    rank_weights[static_cast<size_t>(own_rank(record))] = 1.0;
    accumulate(counts, record, seat, rank_weights, config);
  }
  return model_from_counts(counts, ToMOrder::First);
}

std::string render_reflexion(const game::MatchDataset& dataset, int cap) {
  std::ostringstream out;
  int wins = 0, losses = 0, draws = 0, total = 0;
  for (const auto& record : dataset.games) {
    const int seat = record.perspective_seat >= 0 ? record.perspective_seat : 0;
    const int payoff = record.result[static_cast<size_t>(seat)];
    total += payoff;
    if (payoff > 0) ++wins;
    else if (payoff < 0) ++losses;
    else ++draws;
  }
  out << "Reflexion:\n";
  out << "Across " << dataset.size() << " games: " << wins << " won, " << losses
      << " lost, " << draws << " drawn, net " << (total >= 0 ? "+" : "")
      << total << " chips.\n";

  const size_t start =
      dataset.size() > static_cast<size_t>(cap) ? dataset.size() - static_cast<size_t>(cap) : 0;
  int lost_calling_raise = 0;
  int won_by_opponent_fold = 0;
  for (size_t i = start; i < dataset.size(); ++i) {
    const auto& record = dataset.games[i];
    const int seat = record.perspective_seat >= 0 ? record.perspective_seat : 0;
    const int payoff = record.result[static_cast<size_t>(seat)];
    if (payoff > 0 && ended_by_fold(record) &&
        record.steps.back().seat != seat) {
      ++won_by_opponent_fold;
    }
    if (payoff < 0) {
      const auto steps = game::annotate_betting(action_list(record));
      for (const auto& step : steps) {
        if (step.seat == seat && step.facing_bet &&
            step.action == PlayerAction::Call) {
          ++lost_calling_raise;
          break;
        }
      }
    }
  }
  out << "In the recent window, " << won_by_opponent_fold
      << " wins came from the opponent folding and " << lost_calling_raise
      << " losses involved calling into a bet. Improve by folding weak cards "
         "to sustained aggression and by betting when the opponent's line "
         "shows weakness.\n";
  return out.str();
}

std::string render_history(const game::MatchDataset& dataset, int cap) {
  std::ostringstream out;
  const size_t n = dataset.size();
  const size_t start = n > static_cast<size_t>(cap) ? n - static_cast<size_t>(cap) : 0;
  if (start > 0) {
    int older_total = 0;
    for (size_t i = 0; i < start; ++i) {
      const auto& record = dataset.games[i];
      const int seat = record.perspective_seat >= 0 ? record.perspective_seat : 0;
      older_total += record.result[static_cast<size_t>(seat)];
    }
    out << "Earlier " << start << " games summarized: net "
        << (older_total >= 0 ? "+" : "") << older_total << " chips.\n";
  }
  for (size_t i = start; i < n; ++i) {
    const auto& record = dataset.games[i];
    const int seat = record.perspective_seat >= 0 ? record.perspective_seat : 0;
    out << "Game " << record.game_id << " (me seat " << seat << ", holding "
        << game::rank_name(own_rank(record)) << "): ";
    if (reached_round_two(record, game::LeducConfig{})) {
      out << "public " << game::rank_name(record.deal_public.rank) << "; ";
    }
    out << "actions";
    for (const auto& step : record.steps) {
      out << " s" << step.obs.player << ":" << game::action_name(step.action);
    }
    const int payoff = record.result[static_cast<size_t>(seat)];
    out << "; result " << (payoff >= 0 ? "+" : "") << payoff;
    if (record.hindsight_opponent_card) {
      out << "; opponent held "
          << game::rank_name(record.hindsight_opponent_card->rank);
    }
    out << ".\n";
  }
  return out.str();
}

AnalysisBundle analyze_game_oracle(const game::MatchDataset& dataset,
                                   const AnalysisOptions& options) {
  AnalysisBundle bundle;
  if (dataset.empty()) return bundle;
  bundle.empty = false;
  bundle.reflexion_text = render_reflexion(dataset, options.history_cap);
  bundle.pattern_model = fit_opponent_model(dataset, options.order, options.config);
  if (options.order != ToMOrder::Zero) {
    // Pattern text is rendered from the blended (static) view.
    auto text_model = fit_opponent_model(dataset, ToMOrder::First, options.config);
    bundle.pattern_text = llm::serialize_pattern(text_model);
  }
  if (options.order == ToMOrder::Second) {
    bundle.opponent_belief_on_me =
        "The opponent's likely read on my play:\n" +
        llm::serialize_pattern(fit_self_model(dataset, options.config));
  }
  return bundle;
}

}  // namespace leducmind::pipeline
