#pragma once

#include <array>
#include <optional>
#include <vector>

#include "leducmind/game/state.hpp"
#include "leducmind/opp/policy.hpp"

namespace leducmind::belief {

// Probability per opponent hole rank, indexed by game::Rank.
struct BeliefDistribution {
  std::array<double, game::kNumRanks> p{};

  double& operator[](game::Rank r) { return p[static_cast<size_t>(r)]; }
  double operator[](game::Rank r) const { return p[static_cast<size_t>(r)]; }
  double sum() const { return p[0] + p[1] + p[2]; }
};

enum class ModelMode : uint8_t { Uniform, Static, Reactive };

// Context of one opponent decision, as seen from my side of the table.
struct ModelContext {
  int round = 1;
  bool facing_bet = false;
  std::optional<game::PlayerAction> my_last_action;  // Reactive key; nullopt = none
};

// Actions a table row ranges over in a given context (ignoring raise caps,
// which are applied at use via legalize()).
std::vector<game::PlayerAction> context_support(bool facing_bet);

// Conditional opponent action model. Rows are distributions over the context
// support; an all-zero (unlearned) row reads back as uniform.
struct OpponentModel {
  ModelMode mode = ModelMode::Uniform;

  // [tier][round-1][facing]
  using StaticRows =
      std::array<std::array<std::array<opp::ActionDist, 2>, 2>, opp::kNumTiers>;
  // [tier][round-1][facing][my_last: 0 = none, 1 + action index]
  using ReactiveRows = std::array<
      std::array<std::array<std::array<opp::ActionDist, 5>, 2>, 2>,
      opp::kNumTiers>;

  StaticRows static_rows{};
  ReactiveRows reactive_rows{};

  static OpponentModel uniform() { return OpponentModel{}; }

  opp::ActionDist row(opp::Tier tier, const ModelContext& ctx) const;
};

// One already-observed opponent action with enough context to score it.
struct ObservedAction {
  game::PlayerAction action{game::PlayerAction::Call};
  ModelContext context;
  std::optional<game::Rank> public_rank;  // as of the decision
  std::vector<game::PlayerAction> legal;  // as of the decision
};

struct OutcomeRates {
  double win = 0, lose = 0, draw = 0;
};

struct PlanCandidate {
  game::PlayerAction action{game::PlayerAction::Call};
  OutcomeRates rates;
  double win_payoff = 0;
  double lose_payoff = 0;
  double expected_gain = 0;
};

// Betting context a plan is evaluated from.
struct PlanView {
  game::LeducConfig config;
  int me = 0;
  game::Rank own{game::Rank::Jack};
  std::optional<game::Rank> public_rank;
  int round = 1;
  std::array<int, 2> contrib{};
  int raises_this_round = 0;
  int actions_this_round = 0;
  std::optional<game::PlayerAction> my_last_action;
};

PlanView view_from_observation(const game::Observation& obs,
                               const game::LeducConfig& config = {});

BeliefDistribution card_prior(game::Rank own,
                              std::optional<game::Rank> public_rank);

struct PosteriorResult {
  BeliefDistribution belief;
  bool degenerate_fallback = false;  // all likelihoods were zero
};

PosteriorResult posterior(const BeliefDistribution& prior,
                          const OpponentModel& model,
                          const std::vector<ObservedAction>& observed);

// Exact enumeration of win/lose/draw mass after playing my_action: opponent
// ranks weighted by belief, unseen public cards uniform over the remaining
// deck, opponent responses per model, my own continuation fixed to
// check-if-possible-else-call.
OutcomeRates outcome_rates(const PlanView& view, const BeliefDistribution& belief,
                           const OpponentModel& model, game::PlayerAction my_action);

double expected_gain(const OutcomeRates& rates, double win_payoff,
                     double lose_payoff);

// Half-pot accounting over the pot as it stands after my action alone;
// folding forfeits my current contribution.
std::pair<double, double> plan_payoffs(const PlanView& view,
                                       game::PlayerAction my_action);

game::PlayerAction best_plan(const std::vector<PlanCandidate>& candidates);

}  // namespace leducmind::belief
