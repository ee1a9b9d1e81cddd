#include "leducmind/pipeline/agent.hpp"

#include <algorithm>
#include <sstream>

#include "leducmind/llm/parser.hpp"
#include "leducmind/llm/prompt_template.hpp"

namespace leducmind::pipeline {

using game::GameRecord;
using game::Observation;
using game::PlayerAction;

namespace {

std::vector<belief::ObservedAction> observed_opponent_actions(
    const Observation& obs, const game::LeducConfig& config) {
  std::vector<belief::ObservedAction> out;
  const auto steps = game::annotate_betting(obs.betting_sequence_public, config);
  for (const auto& step : steps) {
    if (step.seat == obs.player) continue;
    belief::ObservedAction seen;
    seen.action = step.action;
    seen.context = {step.round, step.facing_bet, step.opponent_last_action};
    seen.public_rank = step.round == 2 ? obs.public_card : std::nullopt;
    seen.legal = game::legal_from_context(step.facing_bet, step.raises_before, config);
    out.push_back(std::move(seen));
  }
  return out;
}

std::string belief_text_of(const belief::BeliefDistribution& b) {
  std::ostringstream out;
  out << "The opponent holds a Jack (probability " << b[game::Rank::Jack] * 100.0
      << "%), a Queen (probability " << b[game::Rank::Queen] * 100.0
      << "%), or a King (probability " << b[game::Rank::King] * 100.0 << "%).";
  return out.str();
}

std::string valid_actions_text(const std::vector<PlayerAction>& legal) {
  std::string out;
  for (size_t i = 0; i < legal.size(); ++i) {
    if (i) out += ", ";
    out += game::action_name(legal[i]);
  }
  return out;
}

PlayerAction fallback_action(const std::vector<PlayerAction>& legal) {
  for (auto preferred : {PlayerAction::Check, PlayerAction::Call, PlayerAction::Fold}) {
    if (std::find(legal.begin(), legal.end(), preferred) != legal.end()) {
      return preferred;
    }
  }
  return legal.front();
}

}  // namespace

PredictResult predict_cards(const AnalysisBundle& bundle, const Observation& obs,
                            ToMOrder order, const game::LeducConfig& config) {
  PredictResult out;
  const auto prior = belief::card_prior(obs.private_card, obs.public_card);
  if (order == ToMOrder::Zero || bundle.empty) {
    out.belief = prior;
    out.text = belief_text_of(prior);
    return out;
  }
  const auto observed = observed_opponent_actions(obs, config);
  const auto result = belief::posterior(prior, bundle.pattern_model, observed);
  out.belief = result.belief;
  out.degenerate_fallback = result.degenerate_fallback;
  out.text = belief_text_of(result.belief);
  return out;
}

PlanResult plan_and_evaluate(const AnalysisBundle& bundle,
                             const belief::BeliefDistribution& belief_dist,
                             const Observation& obs, ToMOrder order,
                             const game::LeducConfig& config) {
  if (obs.legal.empty()) {
    throw game::GameError("plan_and_evaluate requires at least one legal action");
  }
  const belief::OpponentModel model =
      order == ToMOrder::Zero || bundle.empty ? belief::OpponentModel::uniform()
                                              : bundle.pattern_model;
  const auto view = belief::view_from_observation(obs, config);

  PlanResult out;
  std::vector<belief::PlanCandidate> candidates;
  for (auto action : obs.legal) {
    belief::PlanCandidate candidate;
    candidate.action = action;
    candidate.rates = belief::outcome_rates(view, belief_dist, model, action);
    const auto [win_payoff, lose_payoff] = belief::plan_payoffs(view, action);
    candidate.win_payoff = win_payoff;
    candidate.lose_payoff = lose_payoff;
    candidate.expected_gain =
        belief::expected_gain(candidate.rates, win_payoff, lose_payoff);
    candidates.push_back(candidate);

    std::ostringstream rationale;
    rationale << game::action_name(action) << ": win " << candidate.rates.win
              << ", lose " << candidate.rates.lose << ", draw "
              << candidate.rates.draw << "; payoffs " << win_payoff << "/"
              << lose_payoff << "; expected gain " << candidate.expected_gain
              << ".";
    out.plans.push_back({candidate, rationale.str()});
  }
  out.chosen = belief::best_plan(candidates);
  return out;
}

void validate_terminal_record(const GameRecord& record,
                              const game::LeducConfig& config) {
  auto state = game::new_game_with_deal(record.deal_hole0, record.deal_hole1,
                                        record.deal_public, config);
  for (const auto& step : record.steps) {
    if (state.terminal) throw game::GameError("record has actions after the end");
    if (state.to_act != step.seat) {
      throw game::GameError("record step actor is out of turn");
    }
    state = game::apply_action(state, step.action);
  }
  if (!state.terminal) throw game::GameError("record is not terminal");
  const auto chips = game::payoff(state);
  if (chips != record.result) {
    throw game::GameError("record result does not match the replayed payoff");
  }
}

GameRecord agent_view(const GameRecord& record, int seat,
                      const game::LeducConfig& config) {
  GameRecord view = record;
  view.perspective_seat = seat;
  auto state = game::new_game_with_deal(record.deal_hole0, record.deal_hole1,
                                        record.deal_public, config);
  for (auto& step : view.steps) {
    const auto mine = game::observe(state, seat);
    state = game::apply_action(state, step.action);
    if (step.seat != seat) {
      step.obs = mine;
      step.deliberation.reset();  // never keep the other side's reasoning
    }
  }
  return view;
}

void end_game_update(game::MatchDataset& dataset, GameRecord record,
                     bool hindsight, const game::LeducConfig& config) {
  validate_terminal_record(record, config);
  record.hindsight = hindsight;
  if (hindsight) {
    const int seat = record.perspective_seat >= 0 ? record.perspective_seat : 0;
    record.hindsight_opponent_card =
        seat == 0 ? record.deal_hole1 : record.deal_hole0;
  } else {
    record.hindsight_opponent_card.reset();
  }
  dataset.append(std::move(record));
}

// --- TomAgent ----------------------------------------------------------------

TomAgent::TomAgent(std::string name, AgentConfig config)
    : name_(std::move(name)), config_(std::move(config)) {
  // Fail fast on unregistered games.
  (void)rule_description(config_.game);
  (void)obs_conversion(config_.game);
}

ToMOrder TomAgent::effective_order() const {
  return bundle_.empty ? ToMOrder::Zero : config_.order;
}

std::string TomAgent::template_path(const std::string& stem) const {
  return config_.template_dir + "/" + stem + ".txt";
}

std::string TomAgent::complete_prompt(const std::string& prompt,
                                      DeliberationRecord& record) {
  llm::CompletionRequest request;
  request.prompt = prompt;
  request.model = config_.model;
  request.temperature = config_.temperature;
  request.max_tokens = config_.max_tokens;
  record.raw_prompts.push_back(prompt);
  const auto response = config_.backend->complete(request);
  record.raw_completions.push_back(response.text);
  return response.text;
}

std::string TomAgent::history_binding(const Observation& obs) const {
  std::ostringstream out;
  out << render_history(dataset_, config_.history_cap);
  out << "Current game (me seat " << seat_ << "):";
  if (obs.betting_sequence_public.empty()) {
    out << " no actions yet.";
  } else {
    for (const auto& [seat, action] : obs.betting_sequence_public) {
      out << " seat " << seat << " " << game::action_name(action) << ";";
    }
  }
  return out.str();
}

void TomAgent::begin_game(int64_t game_id, int seat) {
  game_id_ = game_id;
  seat_ = seat;
  AnalysisOptions options;
  options.order = config_.order;
  options.config = config_.game_config;
  options.history_cap = config_.history_cap;

  if (dataset_.empty()) {
    bundle_ = AnalysisBundle{};  // cold start: no analysis for game 1
    return;
  }
  bundle_ = analyze_game_oracle(dataset_, options);
  if (!config_.backend) return;

  analyze_llm();
}

void TomAgent::analyze_llm() {
  // LLM-mode analysis: one combined prompt; the oracle-fitted bundle built in
  // begin_game stays as instrumentation and numeric fallback.
  const auto& rule = rule_description(config_.game);
  std::map<std::string, std::string> bindings = {
      {"rule", rule_text(rule)},
      {"history", render_history(dataset_, config_.history_cap)},
  };
  const std::string stem =
      std::string("analysis_order") + std::to_string(static_cast<int>(config_.order));
  std::string template_text;
  try {
    template_text = llm::read_text_file(template_path(stem));
  } catch (const llm::TemplateError&) {
    return;  // template file unavailable: keep oracle analysis
  }
  std::string prompt = llm::render_template(template_text, bindings);

  DeliberationRecord scratch_record;
  for (int attempt = 0; attempt <= config_.parse_retries; ++attempt) {
    std::string completion;
    try {
      completion = complete_prompt(prompt, scratch_record);
    } catch (const llm::BackendError&) {
      bundle_ = AnalysisBundle{};  // degrade to zero order for this game
      return;
    }
    const auto parsed = llm::parse_behavior_pattern(completion);
    if (config_.order == ToMOrder::Zero || parsed.rows_parsed > 0) {
      bundle_.empty = false;
      bundle_.reflexion_text = completion;
      bundle_.pattern_text = completion;
      if (config_.order == ToMOrder::First) {
        bundle_.pattern_model = parsed.model;
      }
      // Second order keeps the empirically fitted reactive tables for the
      // oracle cross-check and the oracle-rendered self-model text; the
      // completion (which carries the opponent-guess section) replaces only
      // the pattern text.
      return;
    }
    prompt += "\n\nFormat reminder: describe the opponent's tendencies per "
              "card and round as 'When the opponent holds a <card>, he tends "
              "to <action> (NN%) or <action> (NN%).'";
  }
  bundle_ = AnalysisBundle{};  // analysis unusable: degrade to zero order
}

std::string TomAgent::interpret(const Observation& obs,
                                DeliberationRecord& record) {
  const auto& rule = rule_description(config_.game);
  const auto& conv = obs_conversion(config_.game);
  const std::string oracle_text = interpret_observation(rule, conv, obs);
  if (!config_.backend) return oracle_text;
  std::map<std::string, std::string> bindings = {
      {"rule", rule_text(rule)},
      {"conversion", conversion_text(conv)},
      {"observation", raw_observation_text(obs)},
  };
  std::string template_text;
  try {
    template_text = llm::read_text_file(template_path("observation"));
  } catch (const llm::TemplateError&) {
    return oracle_text;  // template file unavailable
  }
  const auto prompt = llm::render_template(template_text, bindings);
  try {
    return complete_prompt(prompt, record);
  } catch (const llm::BackendError&) {
    return oracle_text;
  }
}

PredictResult TomAgent::predict_llm(const Observation& obs,
                                    DeliberationRecord& record) {
  const auto oracle =
      predict_cards(bundle_, obs, effective_order(), config_.game_config);
  if (effective_order() == ToMOrder::Zero) return oracle;

  const auto& rule = rule_description(config_.game);
  std::map<std::string, std::string> bindings = {
      {"rule", rule_text(rule)},
      {"observation", record.obs_text},
      {"history", history_binding(obs)},
      {"pattern", bundle_.pattern_text + (bundle_.opponent_belief_on_me.empty()
                                              ? ""
                                              : "\n" + bundle_.opponent_belief_on_me)},
  };
  const std::string stem =
      std::string("predict_order") + std::to_string(static_cast<int>(config_.order));
  std::string template_text;
  try {
    template_text = llm::read_text_file(template_path(stem));
  } catch (const llm::TemplateError&) {
    return oracle;  // template file unavailable
  }
  std::string prompt = llm::render_template(template_text, bindings);
  for (int attempt = 0; attempt <= config_.parse_retries; ++attempt) {
    std::string completion;
    try {
      completion = complete_prompt(prompt, record);
    } catch (const llm::BackendError&) {
      return oracle;
    }
    const auto extracted = llm::extract_belief(completion);
    if (extracted.found) {
      PredictResult out;
      out.belief = extracted.belief;
      out.text = completion;
      return out;
    }
    prompt += "\n\nFormat reminder: answer with a 'Belief:' section listing "
              "each card as '<Card> (probability NN%)', summing to 100%.";
  }
  return oracle;
}

PlanResult TomAgent::plan_llm(const Observation& obs,
                              const PredictResult& predicted,
                              DeliberationRecord& record) {
  const auto oracle = plan_and_evaluate(bundle_, predicted.belief, obs,
                                        effective_order(), config_.game_config);
  const auto& rule = rule_description(config_.game);
  std::map<std::string, std::string> bindings = {
      {"rule", rule_text(rule)},
      {"observation", record.obs_text},
      {"history", history_binding(obs)},
      {"reflexion", bundle_.reflexion_text},
      {"pattern", bundle_.pattern_text + (bundle_.opponent_belief_on_me.empty()
                                              ? ""
                                              : "\n" + bundle_.opponent_belief_on_me)},
      {"belief", predicted.text},
      {"valid_actions", valid_actions_text(obs.legal)},
  };
  const std::string stem =
      std::string("plan_order") + std::to_string(static_cast<int>(config_.order));
  std::string template_text;
  try {
    template_text = llm::read_text_file(template_path(stem));
  } catch (const llm::TemplateError&) {
    return oracle;  // template file unavailable
  }
  std::string prompt = llm::render_template(template_text, bindings);

  for (int attempt = 0; attempt <= config_.parse_retries; ++attempt) {
    std::string completion;
    try {
      completion = complete_prompt(prompt, record);
    } catch (const llm::BackendError&) {
      break;
    }
    try {
      const auto parsed = llm::parse_deliberation(completion, obs.legal);
      PlanResult out;
      for (const auto& [action, gain] : parsed.plan_gains) {
        belief::PlanCandidate candidate;
        candidate.action = action;
        candidate.expected_gain = gain;
        out.plans.push_back({candidate, "stated by backend"});
      }
      out.chosen = parsed.selection;

      // Cross-check against the exact oracle; the stated choice stands.
      record.oracle_choice = oracle.chosen;
      double stated_oracle_gain = 0.0, best_oracle_gain = 0.0;
      for (const auto& plan : oracle.plans) {
        if (plan.candidate.action == out.chosen) {
          stated_oracle_gain = plan.candidate.expected_gain;
        }
        if (plan.candidate.action == oracle.chosen) {
          best_oracle_gain = plan.candidate.expected_gain;
        }
      }
      record.oracle_gain_delta = best_oracle_gain - stated_oracle_gain;
      return out;
    } catch (const llm::ParseError&) {
      prompt += "\n\nFormat reminder: end with sections 'Expected Gain:' "
                "(one 'Plan N: <Action> ... = <number> chips.' line per plan) "
                "and 'Plan Selection:' naming one of the valid actions.";
    }
  }

  PlanResult out = oracle;
  out.chosen = fallback_action(obs.legal);
  record.fallback_used = true;
  return out;
}

std::pair<PlayerAction, DeliberationRecord> TomAgent::run_turn(
    const Observation& obs) {
  if (obs.legal.empty()) {
    throw game::GameError("run_turn requires a non-terminal observation");
  }
  DeliberationRecord record;
  record.tom_order = effective_order();
  record.obs_text = interpret(obs, record);

  if (!config_.backend) {
    const auto predicted =
        predict_cards(bundle_, obs, effective_order(), config_.game_config);
    record.belief = predicted.belief;
    record.belief_text = predicted.text;
    record.belief_degenerate_fallback = predicted.degenerate_fallback;
    const auto planned = plan_and_evaluate(bundle_, predicted.belief, obs,
                                           effective_order(), config_.game_config);
    record.plans = planned.plans;
    record.chosen = planned.chosen;
  } else {
    const auto predicted = predict_llm(obs, record);
    record.belief = predicted.belief;
    record.belief_text = predicted.text;
    record.belief_degenerate_fallback = predicted.degenerate_fallback;
    const auto planned = plan_llm(obs, predicted, record);
    record.plans = planned.plans;
    record.chosen = planned.chosen;
  }

  if (std::find(obs.legal.begin(), obs.legal.end(), record.chosen) ==
      obs.legal.end()) {
    record.chosen = fallback_action(obs.legal);
    record.fallback_used = true;
  }
  return {record.chosen, record};
}

harness::AgentDecision TomAgent::act(const Observation& obs) {
  auto [action, record] = run_turn(obs);
  return {action, std::make_shared<DeliberationRecord>(std::move(record))};
}

void TomAgent::end_game(const GameRecord& record) {
  auto view = agent_view(record, seat_, config_.game_config);
  end_game_update(dataset_, std::move(view), config_.hindsight,
                  config_.game_config);
}

}  // namespace leducmind::pipeline
