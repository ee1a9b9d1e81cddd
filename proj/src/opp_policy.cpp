#include "leducmind/opp/policy.hpp"

#include <algorithm>
#include <stdexcept>

namespace leducmind::opp {

ActionDist legalize(const ActionDist& row,
                    const std::vector<game::PlayerAction>& legal) {
  auto is_legal = [&](game::PlayerAction a) {
    return std::find(legal.begin(), legal.end(), a) != legal.end();
  };
  ActionDist out;
  double displaced = 0.0;
  for (auto a : game::all_actions()) {
    if (is_legal(a)) {
      out[a] = row[a];
    } else {
      displaced += row[a];
    }
  }
  if (displaced > 0.0) {
    if (is_legal(game::PlayerAction::Call)) {
      out[game::PlayerAction::Call] += displaced;
    } else if (is_legal(game::PlayerAction::Check)) {
      out[game::PlayerAction::Check] += displaced;
    }
  }
  const double total = out.sum();
  if (total <= 0.0) return uniform_over(legal);
  for (auto& v : out.p) v /= total;
  return out;
}

game::PlayerAction sample_action(const ActionDist& dist, RandomSource& rng) {
  const double u = rng.next_double();
  double acc = 0.0;
  game::PlayerAction last = game::PlayerAction::Call;
  bool any = false;
  for (auto a : game::all_actions()) {
    if (dist[a] <= 0.0) continue;
    last = a;
    any = true;
    acc += dist[a];
    if (u < acc) return a;
  }
  if (!any) throw std::runtime_error("cannot sample from empty distribution");
  return last;  // absorb floating-point shortfall into the final action
}

game::PlayerAction policy_act(const Policy& policy, const game::Observation& obs,
                              RandomSource& rng) {
  return policy.act(obs, rng);
}

}  // namespace leducmind::opp
