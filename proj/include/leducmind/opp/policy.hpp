#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "leducmind/game/state.hpp"
#include "leducmind/util/rng.hpp"

namespace leducmind::opp {

enum class Tier : uint8_t { Weak = 0, Mid = 1, Strong = 2, Pair = 3 };
constexpr int kNumTiers = 4;

inline const char* tier_name(Tier t) {
  switch (t) {
    case Tier::Weak: return "Weak";
    case Tier::Mid: return "Mid";
    case Tier::Strong: return "Strong";
    case Tier::Pair: return "Pair";
  }
  return "?";
}

// Round 1: J/Q/K -> Weak/Mid/Strong. Round 2: matching the public card is a
// Pair, otherwise the round-1 tier of the rank.
inline Tier hand_tier(game::Rank own, std::optional<game::Rank> public_rank) {
  if (public_rank && *public_rank == own) return Tier::Pair;
  switch (own) {
    case game::Rank::Jack: return Tier::Weak;
    case game::Rank::Queen: return Tier::Mid;
    case game::Rank::King: return Tier::Strong;
  }
  return Tier::Weak;
}

// Probability mass per action in canonical order (Call, Raise, Fold, Check).
struct ActionDist {
  std::array<double, game::kNumActions> p{};

  double& operator[](game::PlayerAction a) { return p[static_cast<size_t>(a)]; }
  double operator[](game::PlayerAction a) const { return p[static_cast<size_t>(a)]; }
  double sum() const { return p[0] + p[1] + p[2] + p[3]; }
};

inline ActionDist uniform_over(const std::vector<game::PlayerAction>& actions) {
  ActionDist d;
  if (actions.empty()) return d;
  const double w = 1.0 / static_cast<double>(actions.size());
  for (auto a : actions) d[a] += w;
  return d;
}

// Restricts a table row to the actions legal in context. Mass sitting on an
// illegal action moves to Call when legal, else Check, then the row is
// renormalized.
ActionDist legalize(const ActionDist& row,
                    const std::vector<game::PlayerAction>& legal);

game::PlayerAction sample_action(const ActionDist& dist, RandomSource& rng);

// A stateless strategy: introspectable distribution + sampling.
struct Policy {
  std::string name;
  std::function<ActionDist(const game::Observation&)> distribution;

  game::PlayerAction act(const game::Observation& obs, RandomSource& rng) const {
    return sample_action(distribution(obs), rng);
  }
};

game::PlayerAction policy_act(const Policy& policy, const game::Observation& obs,
                              RandomSource& rng);

}  // namespace leducmind::opp
