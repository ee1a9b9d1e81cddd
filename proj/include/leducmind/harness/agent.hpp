#pragma once

#include <memory>
#include <string>

#include "leducmind/game/record.hpp"
#include "leducmind/opp/policy.hpp"
#include "leducmind/util/rng.hpp"

namespace leducmind::harness {

struct AgentDecision {
  game::PlayerAction action{game::PlayerAction::Call};
  std::shared_ptr<const pipeline::DeliberationRecord> deliberation;  // may be null
};

// One seat in a match. Adaptive agents receive finished game records; the
// harness calls begin_game before the first decision of each game.
class MatchAgent {
 public:
  virtual ~MatchAgent() = default;
  virtual const std::string& name() const = 0;
  virtual void begin_game(int64_t game_id, int seat) = 0;
  virtual AgentDecision act(const game::Observation& obs) = 0;
  virtual void end_game(const game::GameRecord& record) = 0;
};

// Stateless policy wrapper with seeded randomness. The stream is re-derived
// per game from (seed, game_id), so paired runs that replay the same game ids
// face identical draws wherever play has not yet diverged.
class PolicyAgent : public MatchAgent {
 public:
  PolicyAgent(opp::Policy policy, uint64_t seed)
      : policy_(std::move(policy)), seed_(seed), rng_(seed) {}

  const std::string& name() const override { return policy_.name; }
  void begin_game(int64_t game_id, int) override {
    rng_ = RandomSource(seed_ ^ (0x9e3779b97f4a7c15ull *
                                 (static_cast<uint64_t>(game_id) + 1)));
  }
  AgentDecision act(const game::Observation& obs) override {
    return {policy_.act(obs, rng_), nullptr};
  }
  void end_game(const game::GameRecord&) override {}

 private:
  opp::Policy policy_;
  uint64_t seed_;
  RandomSource rng_;
};

}  // namespace leducmind::harness
