#include "leducmind/belief/belief.hpp"

#include <algorithm>
#include <stdexcept>

namespace leducmind::belief {

using game::PlayerAction;
using game::Rank;

std::vector<PlayerAction> context_support(bool facing_bet) {
  if (facing_bet) {
    return {PlayerAction::Call, PlayerAction::Raise, PlayerAction::Fold};
  }
  return {PlayerAction::Check, PlayerAction::Raise};
}

opp::ActionDist OpponentModel::row(opp::Tier tier, const ModelContext& ctx) const {
  const auto support = context_support(ctx.facing_bet);
  if (mode == ModelMode::Uniform) return opp::uniform_over(support);

  const size_t t = static_cast<size_t>(tier);
  const size_t r = static_cast<size_t>(ctx.round - 1);
  const size_t f = ctx.facing_bet ? 1 : 0;
  opp::ActionDist stored;
  if (mode == ModelMode::Static) {
    stored = static_rows[t][r][f];
  } else {
    const size_t m =
        ctx.my_last_action ? 1 + static_cast<size_t>(*ctx.my_last_action) : 0;
    stored = reactive_rows[t][r][f][m];
  }
  if (stored.sum() <= 0.0) return opp::uniform_over(support);
  return stored;
}

PlanView view_from_observation(const game::Observation& obs,
                               const game::LeducConfig& config) {
  PlanView v;
  v.config = config;
  v.me = obs.player;
  v.own = obs.private_card;
  v.public_rank = obs.public_card;
  v.round = obs.round;
  v.contrib = obs.pot_contribution;
  v.raises_this_round =
      game::raises_in_current_round(obs.betting_sequence_public, config);

  const auto steps = game::annotate_betting(obs.betting_sequence_public, config);
  int acted = 0;
  std::optional<PlayerAction> my_last;
  for (const auto& step : steps) {
    if (step.round == obs.round) ++acted;
    if (step.seat == obs.player) my_last = step.action;
  }
  v.actions_this_round = acted;
  v.my_last_action = my_last;
  return v;
}

BeliefDistribution card_prior(Rank own, std::optional<Rank> public_rank) {
  std::array<int, game::kNumRanks> remaining{};
  remaining.fill(game::kCopiesPerRank);
  remaining[static_cast<size_t>(own)] -= 1;
  if (public_rank) remaining[static_cast<size_t>(*public_rank)] -= 1;
  int total = 0;
  for (int c : remaining) total += c;
  BeliefDistribution out;
  for (size_t i = 0; i < game::kNumRanks; ++i) {
    out.p[i] = static_cast<double>(remaining[i]) / static_cast<double>(total);
  }
  return out;
}

PosteriorResult posterior(const BeliefDistribution& prior,
                          const OpponentModel& model,
                          const std::vector<ObservedAction>& observed) {
  BeliefDistribution post;
  for (size_t i = 0; i < game::kNumRanks; ++i) {
    double likelihood = prior.p[i];
    if (likelihood <= 0.0) {
      post.p[i] = 0.0;
      continue;
    }
    const Rank rank = static_cast<Rank>(i);
    for (const auto& obs : observed) {
      const auto tier = opp::hand_tier(
          rank, obs.context.round == 2 ? obs.public_rank : std::nullopt);
      const auto row = opp::legalize(model.row(tier, obs.context), obs.legal);
      likelihood *= row[obs.action];
    }
    post.p[i] = likelihood;
  }
  const double total = post.sum();
  if (total <= 0.0) {
    return {prior, true};
  }
  for (auto& v : post.p) v /= total;
  return {post, false};
}

namespace {

struct SimState {
  int round = 1;
  std::array<int, 2> contrib{};
  int raises = 0;
  int to_act = 0;
  int acted_this_round = 0;
  std::array<std::optional<PlayerAction>, 2> last{};
};

struct Enumerator {
  const game::LeducConfig& config;
  int me;
  Rank own;
  Rank opp_rank;
  OutcomeRates& rates;
  const OpponentModel& model;

  std::vector<PlayerAction> legal_for(const SimState& s) const {
    std::vector<PlayerAction> out;
    const bool raise_ok = s.raises < config.max_raises_per_round;
    if (s.contrib[s.to_act] < s.contrib[1 - s.to_act]) {
      out.push_back(PlayerAction::Call);
      if (raise_ok) out.push_back(PlayerAction::Raise);
      out.push_back(PlayerAction::Fold);
    } else {
      out.push_back(PlayerAction::Check);
      if (raise_ok) out.push_back(PlayerAction::Raise);
    }
    return out;
  }

  void settle_showdown(double w, Rank public_rank) {
    const auto winner = game::showdown_winner(
        me == 0 ? own : opp_rank, me == 0 ? opp_rank : own, public_rank);
    if (winner == game::Winner::Draw) {
      rates.draw += w;
    } else if (static_cast<int>(winner) == me) {
      rates.win += w;
    } else {
      rates.lose += w;
    }
  }

  // Applies an action, advancing rounds / settling terminals; returns false
  // when the game ended.
  bool step(SimState& s, PlayerAction action, double w, Rank public_rank) {
    const int actor = s.to_act;
    s.last[actor] = action;
    s.acted_this_round += 1;
    switch (action) {
      case PlayerAction::Fold:
        if (actor == me) {
          rates.lose += w;
        } else {
          rates.win += w;
        }
        return false;
      case PlayerAction::Call:
        s.contrib[actor] = s.contrib[1 - actor];
        break;
      case PlayerAction::Check:
        break;
      case PlayerAction::Raise:
        s.contrib[actor] =
            std::max(s.contrib[actor], s.contrib[1 - actor]) +
            config.raise_size[static_cast<size_t>(s.round - 1)];
        s.raises += 1;
        break;
    }
    if (s.acted_this_round >= 2 && s.contrib[0] == s.contrib[1]) {
      if (s.round == 2) {
        settle_showdown(w, public_rank);
        return false;
      }
      s.round = 2;
      s.raises = 0;
      s.acted_this_round = 0;
      s.to_act = 0;
      return true;
    }
    s.to_act = 1 - actor;
    return true;
  }

  void run(SimState s, double w, Rank public_rank) {
    while (true) {
      if (s.to_act == me) {
        const auto legal = legal_for(s);
        const bool can_check =
            std::find(legal.begin(), legal.end(), PlayerAction::Check) !=
            legal.end();
        const auto action = can_check ? PlayerAction::Check : PlayerAction::Call;
        if (!step(s, action, w, public_rank)) return;
        continue;
      }
      // Opponent branches per model row, legalized in context.
      const auto legal = legal_for(s);
      ModelContext ctx;
      ctx.round = s.round;
      ctx.facing_bet = s.contrib[s.to_act] < s.contrib[1 - s.to_act];
      ctx.my_last_action = s.last[static_cast<size_t>(me)];
      const auto tier = opp::hand_tier(
          opp_rank, s.round == 2 ? std::optional<Rank>(public_rank) : std::nullopt);
      const auto dist = opp::legalize(model.row(tier, ctx), legal);
      for (auto action : game::all_actions()) {
        const double p = dist[action];
        if (p <= 0.0) continue;
        SimState branch = s;
        if (step(branch, action, w * p, public_rank)) {
          run(branch, w * p, public_rank);
        }
      }
      return;
    }
  }
};

}  // namespace

OutcomeRates outcome_rates(const PlanView& view, const BeliefDistribution& belief,
                           const OpponentModel& model, PlayerAction my_action) {
  if (my_action == PlayerAction::Fold) return {0.0, 1.0, 0.0};

  OutcomeRates rates;
  std::array<int, game::kNumRanks> base_remaining{};
  base_remaining.fill(game::kCopiesPerRank);
  base_remaining[static_cast<size_t>(view.own)] -= 1;
  if (view.public_rank) base_remaining[static_cast<size_t>(*view.public_rank)] -= 1;

  for (size_t oi = 0; oi < game::kNumRanks; ++oi) {
    const double bw = belief.p[oi];
    if (bw <= 0.0) continue;
    const Rank opp_rank = static_cast<Rank>(oi);

    std::vector<std::pair<Rank, double>> publics;
    if (view.public_rank) {
      publics.emplace_back(*view.public_rank, 1.0);
    } else {
      auto remaining = base_remaining;
      remaining[oi] -= 1;
      int total = 0;
      for (int c : remaining) total += c;
      for (size_t pi = 0; pi < game::kNumRanks; ++pi) {
        if (remaining[pi] <= 0) continue;
        publics.emplace_back(static_cast<Rank>(pi),
                             static_cast<double>(remaining[pi]) /
                                 static_cast<double>(total));
      }
    }

    for (const auto& [public_rank, pw] : publics) {
      Enumerator e{view.config, view.me, view.own, opp_rank, rates, model};
      SimState s;
      s.round = view.round;
      s.contrib = view.contrib;
      s.raises = view.raises_this_round;
      s.to_act = view.me;
      s.acted_this_round = view.actions_this_round;
      s.last[static_cast<size_t>(view.me)] = view.my_last_action;
      const double w = bw * pw;
      if (e.step(s, my_action, w, public_rank)) {
        e.run(s, w, public_rank);
      }
    }
  }
  return rates;
}

double expected_gain(const OutcomeRates& rates, double win_payoff,
                     double lose_payoff) {
  return rates.win * win_payoff - rates.lose * lose_payoff;
}

std::pair<double, double> plan_payoffs(const PlanView& view,
                                       PlayerAction my_action) {
  const int mine = view.contrib[static_cast<size_t>(view.me)];
  const int theirs = view.contrib[static_cast<size_t>(1 - view.me)];
  if (my_action == PlayerAction::Fold) {
    return {0.0, static_cast<double>(mine)};
  }
  int mine_after = mine;
  switch (my_action) {
    case PlayerAction::Call:
      mine_after = theirs;
      break;
    case PlayerAction::Raise:
      mine_after = std::max(mine, theirs) +
                   view.config.raise_size[static_cast<size_t>(view.round - 1)];
      break;
    default:
      break;
  }
  const double half_pot = static_cast<double>(mine_after + theirs) / 2.0;
  return {half_pot, half_pot};
}

game::PlayerAction best_plan(const std::vector<PlanCandidate>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("best_plan: empty candidate list");
  auto priority = [](PlayerAction a) {
    switch (a) {
      case PlayerAction::Check: return 3;
      case PlayerAction::Call: return 2;
      case PlayerAction::Raise: return 1;
      case PlayerAction::Fold: return 0;
    }
    return -1;
  };
  const PlanCandidate* best = &candidates.front();
  for (const auto& c : candidates) {
    if (c.expected_gain > best->expected_gain ||
        (c.expected_gain == best->expected_gain &&
         priority(c.action) > priority(best->action))) {
      best = &c;
    }
  }
  return best->action;
}

}  // namespace leducmind::belief
