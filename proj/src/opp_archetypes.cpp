#include "leducmind/opp/archetypes.hpp"

#include <stdexcept>

namespace leducmind::opp {

namespace {

using game::Observation;
using game::PlayerAction;

bool is_facing(const Observation& obs) {
  return obs.pot_contribution[static_cast<size_t>(obs.player)] <
         obs.pot_contribution[static_cast<size_t>(1 - obs.player)];
}

Tier obs_tier(const Observation& obs) {
  return hand_tier(obs.private_card, obs.public_card);
}

std::optional<PlayerAction> opponent_last_action(const Observation& obs) {
  for (auto it = obs.betting_sequence_public.rbegin();
       it != obs.betting_sequence_public.rend(); ++it) {
    if (it->first != obs.player) return it->second;
  }
  return std::nullopt;
}

ActionDist dist(double call, double raise, double fold, double check = 0.0) {
  ActionDist d;
  d[PlayerAction::Call] = call;
  d[PlayerAction::Raise] = raise;
  d[PlayerAction::Fold] = fold;
  d[PlayerAction::Check] = check;
  return d;
}

ActionDist always_caller_row(const Observation&) {
  return dist(1.0, 0.0, 0.0);  // Call mass becomes Check when unfaced
}

ActionDist aggressive_raiser_row(const Observation& obs) {
  if (obs_tier(obs) == Tier::Weak) return dist(1.0, 0.0, 0.0);
  return dist(0.0, 1.0, 0.0);
}

ActionDist polar_bluffer_row(const Observation& obs) {
  const Tier tier = obs_tier(obs);
  const int raises =
      game::raises_in_current_round(obs.betting_sequence_public);
  if (tier == Tier::Weak) {
    if (is_facing(obs) && raises >= 2) return dist(0.5, 0.0, 0.5);
    return dist(0.2, 0.8, 0.0);
  }
  if (tier == Tier::Mid) return dist(0.8, 0.2, 0.0);
  return dist(0.0, 1.0, 0.0);  // Strong / Pair
}

ActionDist conservative_folder_row(const Observation& obs) {
  const Tier tier = obs_tier(obs);
  const bool facing = is_facing(obs);
  switch (tier) {
    case Tier::Weak:
      return facing ? dist(0.3, 0.0, 0.7) : dist(0.0, 0.0, 0.0, 1.0);
    case Tier::Mid:
      return dist(0.8, 0.2, 0.0);
    case Tier::Strong:
    case Tier::Pair:
      return dist(0.3, 0.7, 0.0);
  }
  return dist(1.0, 0.0, 0.0);
}

ActionDist reactive_folder_row(const Observation& obs) {
  const Tier tier = obs_tier(obs);
  const bool facing = is_facing(obs);
  const auto last = opponent_last_action(obs);
  if (facing) {
    if (!last) {
      // Blind-facing open as seat 0: hyper-tight, folds almost any weak hand
      // rather than complete.
      switch (tier) {
        case Tier::Weak: return dist(0.1, 0.0, 0.9);
        case Tier::Mid: return dist(0.75, 0.05, 0.2);
        case Tier::Strong: return dist(0.6, 0.4, 0.0);
        case Tier::Pair: return dist(0.2, 0.8, 0.0);
      }
    }
    // Facing a live raise it turns sticky: calls down wide and punishes with
    // its made hands.
    switch (tier) {
      case Tier::Weak: return dist(0.65, 0.0, 0.35);
      case Tier::Mid: return dist(0.8, 0.1, 0.1);
      case Tier::Strong: return dist(0.4, 0.6, 0.0);
      case Tier::Pair: return dist(0.1, 0.9, 0.0);
    }
  }
  if (last == std::optional<PlayerAction>(PlayerAction::Check)) {
    // Probes a shown check with a raise almost regardless of its own card.
    switch (tier) {
      case Tier::Weak: return dist(0.0, 0.75, 0.0, 0.25);
      case Tier::Mid: return dist(0.0, 0.65, 0.0, 0.35);
      case Tier::Strong: return dist(0.0, 0.75, 0.0, 0.25);
      case Tier::Pair: return dist(0.0, 0.9, 0.0, 0.1);
    }
  }
  // After a call (or with no read), its unfaced raises are honest value.
  switch (tier) {
    case Tier::Weak: return dist(0.0, 0.0, 0.0, 1.0);
    case Tier::Mid: return dist(0.0, 0.1, 0.0, 0.9);
    case Tier::Strong: return dist(0.0, 0.6, 0.0, 0.4);
    case Tier::Pair: return dist(0.0, 0.9, 0.0, 0.1);
  }
  return dist(1.0, 0.0, 0.0);
}

Policy make(std::string name, ActionDist (*row)(const Observation&)) {
  Policy p;
  p.name = std::move(name);
  p.distribution = [row](const Observation& obs) {
    return legalize(row(obs), obs.legal);
  };
  return p;
}

}  // namespace

const std::vector<std::string>& archetype_names() {
  static const std::vector<std::string> names = {
      "always_caller", "aggressive_raiser", "polar_bluffer",
      "conservative_folder", "reactive_conservative_folder"};
  return names;
}

Policy archetype(const std::string& name) {
  if (name == "always_caller") return make(name, always_caller_row);
  if (name == "aggressive_raiser") return make(name, aggressive_raiser_row);
  if (name == "polar_bluffer") return make(name, polar_bluffer_row);
  if (name == "conservative_folder") return make(name, conservative_folder_row);
  if (name == "reactive_conservative_folder") return reactive_conservative_folder();
  std::string msg = "unknown archetype '" + name + "'; valid:";
  for (const auto& n : archetype_names()) msg += " " + n;
  throw std::invalid_argument(msg);
}

Policy reactive_conservative_folder() {
  return make("reactive_conservative_folder", reactive_folder_row);
}

}  // namespace leducmind::opp
