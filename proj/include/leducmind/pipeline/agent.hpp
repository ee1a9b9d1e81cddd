#pragma once

#include <memory>
#include <string>

#include "leducmind/harness/agent.hpp"
#include "leducmind/llm/backend.hpp"
#include "leducmind/pipeline/analysis.hpp"
#include "leducmind/pipeline/deliberation.hpp"
#include "leducmind/pipeline/rules.hpp"

namespace leducmind::pipeline {

struct AgentConfig {
  ToMOrder order = ToMOrder::Second;
  bool hindsight = true;
  std::string game = "leduc";
  game::LeducConfig game_config;
  // Null backend runs the deterministic oracle pipeline; otherwise prompts
  // flow through the backend and completions are parsed.
  std::shared_ptr<llm::CompletionBackend> backend;
  std::string template_dir = "templates";
  std::string model = "gpt-4-0613";
  double temperature = 0.0;
  int max_tokens = 2048;
  int parse_retries = 2;  // extra attempts after the first parse failure
  int history_cap = 30;
};

struct PredictResult {
  belief::BeliefDistribution belief;
  std::string text;
  bool degenerate_fallback = false;
};

// Order Zero passes the counting prior through; higher orders run the Bayes
// update over the opponent's observed actions with the bundle's model.
PredictResult predict_cards(const AnalysisBundle& bundle,
                            const game::Observation& obs, ToMOrder order,
                            const game::LeducConfig& config = {});

struct PlanResult {
  std::vector<PlanWithRationale> plans;
  game::PlayerAction chosen{game::PlayerAction::Check};
};

// One candidate per legal action: exact outcome enumeration with the
// order-appropriate model, half-pot payoffs, argmax selection.
PlanResult plan_and_evaluate(const AnalysisBundle& bundle,
                             const belief::BeliefDistribution& belief_dist,
                             const game::Observation& obs, ToMOrder order,
                             const game::LeducConfig& config = {});

// Replays the record through the engine; throws game::GameError when the
// action sequence does not reach a terminal state matching the result.
void validate_terminal_record(const game::GameRecord& record,
                              const game::LeducConfig& config = {});

// Rebuilds a finished game from the given seat's perspective: every step
// carries that seat's contemporaneous observation, and the other player's
// deliberations are dropped.
game::GameRecord agent_view(const game::GameRecord& record, int seat,
                            const game::LeducConfig& config = {});

// Appends a finished game. With hindsight on, fills hindsight_opponent_card
// from the true deal; with it off, guarantees the field stays absent.
void end_game_update(game::MatchDataset& dataset, game::GameRecord record,
                     bool hindsight, const game::LeducConfig& config = {});

class TomAgent : public harness::MatchAgent {
 public:
  TomAgent(std::string name, AgentConfig config);

  const std::string& name() const override { return name_; }
  void begin_game(int64_t game_id, int seat) override;
  harness::AgentDecision act(const game::Observation& obs) override;
  void end_game(const game::GameRecord& record) override;

  const game::MatchDataset& dataset() const { return dataset_; }
  const AnalysisBundle& bundle() const { return bundle_; }
  ToMOrder effective_order() const;
  int seat() const { return seat_; }

  // Runs interpret -> predict -> plan for one observation and assembles the
  // full trace. Exposed for direct testing; act() routes through it.
  std::pair<game::PlayerAction, DeliberationRecord> run_turn(
      const game::Observation& obs);

 private:
  std::string template_path(const std::string& stem) const;
  std::string complete_prompt(const std::string& prompt,
                              DeliberationRecord& record);
  std::string history_binding(const game::Observation& obs) const;
  std::string interpret(const game::Observation& obs, DeliberationRecord& record);
  void analyze_llm();
  PredictResult predict_llm(const game::Observation& obs,
                            DeliberationRecord& record);
  PlanResult plan_llm(const game::Observation& obs,
                      const PredictResult& predicted,
                      DeliberationRecord& record);

  std::string name_;
  AgentConfig config_;
  game::MatchDataset dataset_;
  AnalysisBundle bundle_;
  int seat_ = 0;
  int64_t game_id_ = -1;
};

}  // namespace leducmind::pipeline
