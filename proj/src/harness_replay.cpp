#include "leducmind/harness/replay.hpp"

#include <fstream>

#include "json.hpp"
#include "leducmind/pipeline/deliberation.hpp"

namespace leducmind::harness {

using game::Card;
using game::GameRecord;
using game::PlayerAction;
using game::Rank;
using nlohmann::json;
using pipeline::DeliberationRecord;

namespace {

constexpr int kSchemaVersion = 1;

std::string card_token(const Card& card) {
  return std::string(1, game::rank_letter(card.rank)) +
         static_cast<char>('0' + card.copy_index);
}

Card card_from_token(const std::string& token) {
  if (token.empty() || token.size() > 2) {
    throw ReplayError("bad card token: " + token);
  }
  Card card;
  card.rank = game::rank_from_letter(token[0]);
  card.copy_index = token.size() == 2 ? static_cast<uint8_t>(token[1] - '0') : 0;
  if (card.copy_index > 1) throw ReplayError("bad card token: " + token);
  return card;
}

PlayerAction action_from_name(const std::string& name) {
  const auto action = game::action_from_token(name);
  if (!action) throw ReplayError("unknown action: " + name);
  return *action;
}

json deliberation_to_json(const DeliberationRecord& d, bool redact) {
  json out;
  out["tom_order"] = pipeline::tom_order_name(d.tom_order);
  out["obs_text"] = d.obs_text;
  out["belief"] = {{"J", d.belief[Rank::Jack]},
                   {"Q", d.belief[Rank::Queen]},
                   {"K", d.belief[Rank::King]}};
  out["belief_text"] = d.belief_text;
  if (d.belief_degenerate_fallback) out["belief_degenerate_fallback"] = true;
  json plans = json::array();
  for (const auto& plan : d.plans) {
    json p;
    p["action"] = game::action_name(plan.candidate.action);
    p["win"] = plan.candidate.rates.win;
    p["lose"] = plan.candidate.rates.lose;
    p["draw"] = plan.candidate.rates.draw;
    p["win_payoff"] = plan.candidate.win_payoff;
    p["lose_payoff"] = plan.candidate.lose_payoff;
    p["expected_gain"] = plan.candidate.expected_gain;
    p["rationale"] = plan.rationale;
    plans.push_back(std::move(p));
  }
  out["plans"] = std::move(plans);
  out["chosen"] = game::action_name(d.chosen);
  if (!redact) {
    out["raw_prompts"] = d.raw_prompts;
    out["raw_completions"] = d.raw_completions;
  }
  out["fallback_used"] = d.fallback_used;
  if (d.oracle_choice) {
    out["oracle_choice"] = game::action_name(*d.oracle_choice);
    out["oracle_gain_delta"] = d.oracle_gain_delta;
  }
  return out;
}

std::shared_ptr<const DeliberationRecord> deliberation_from_json(const json& in) {
  auto d = std::make_shared<DeliberationRecord>();
  const std::string order = in.value("tom_order", "zero");
  d->tom_order = order == "second" ? pipeline::ToMOrder::Second
                 : order == "first" ? pipeline::ToMOrder::First
                                    : pipeline::ToMOrder::Zero;
  d->obs_text = in.value("obs_text", "");
  if (in.contains("belief")) {
    d->belief[Rank::Jack] = in["belief"].value("J", 0.0);
    d->belief[Rank::Queen] = in["belief"].value("Q", 0.0);
    d->belief[Rank::King] = in["belief"].value("K", 0.0);
  }
  d->belief_text = in.value("belief_text", "");
  d->belief_degenerate_fallback = in.value("belief_degenerate_fallback", false);
  for (const auto& p : in.value("plans", json::array())) {
    pipeline::PlanWithRationale plan;
    plan.candidate.action = action_from_name(p.at("action").get<std::string>());
    plan.candidate.rates.win = p.value("win", 0.0);
    plan.candidate.rates.lose = p.value("lose", 0.0);
    plan.candidate.rates.draw = p.value("draw", 0.0);
    plan.candidate.win_payoff = p.value("win_payoff", 0.0);
    plan.candidate.lose_payoff = p.value("lose_payoff", 0.0);
    plan.candidate.expected_gain = p.value("expected_gain", 0.0);
    plan.rationale = p.value("rationale", "");
    d->plans.push_back(std::move(plan));
  }
  d->chosen = action_from_name(in.value("chosen", "Check"));
  d->raw_prompts = in.value("raw_prompts", std::vector<std::string>{});
  d->raw_completions = in.value("raw_completions", std::vector<std::string>{});
  d->fallback_used = in.value("fallback_used", false);
  if (in.contains("oracle_choice")) {
    d->oracle_choice = action_from_name(in["oracle_choice"].get<std::string>());
    d->oracle_gain_delta = in.value("oracle_gain_delta", 0.0);
  }
  return d;
}

}  // namespace

std::string record_to_line(const GameRecord& record, bool redact) {
  json out;
  out["schema_version"] = kSchemaVersion;
  out["game_id"] = record.game_id;
  out["seed"] = record.seed;
  out["seats"] = {{"0", record.seat_agent_names[0]},
                  {"1", record.seat_agent_names[1]}};
  out["deal"] = {{"hole0", card_token(record.deal_hole0)},
                 {"hole1", card_token(record.deal_hole1)},
                 {"public", card_token(record.deal_public)}};
  json steps = json::array();
  for (const auto& step : record.steps) {
    json s;
    s["seat"] = step.seat;
    s["round"] = step.obs.round;
    json legal = json::array();
    for (auto a : step.obs.legal) legal.push_back(game::action_name(a));
    s["legal"] = std::move(legal);
    s["action"] = game::action_name(step.action);
    if (step.deliberation) {
      s["deliberation"] = deliberation_to_json(*step.deliberation, redact);
    }
    steps.push_back(std::move(s));
  }
  out["steps"] = std::move(steps);
  out["payoffs"] = {record.result[0], record.result[1]};
  out["hindsight"] = record.hindsight;
  return out.dump();
}

GameRecord record_from_line(const std::string& line,
                            const game::LeducConfig& config) {
  json in = json::parse(line);
  if (!in.contains("schema_version") ||
      in["schema_version"].get<int>() != kSchemaVersion) {
    throw ReplayError("unsupported schema_version");
  }
  GameRecord record;
  record.game_id = in.at("game_id").get<int64_t>();
  record.seed = in.at("seed").get<uint64_t>();
  record.seat_agent_names[0] = in.at("seats").at("0").get<std::string>();
  record.seat_agent_names[1] = in.at("seats").at("1").get<std::string>();
  record.deal_hole0 = card_from_token(in.at("deal").at("hole0").get<std::string>());
  record.deal_hole1 = card_from_token(in.at("deal").at("hole1").get<std::string>());
  record.deal_public = card_from_token(in.at("deal").at("public").get<std::string>());
  record.hindsight = in.at("hindsight").get<bool>();

  auto state = game::new_game_with_deal(record.deal_hole0, record.deal_hole1,
                                        record.deal_public, config);
  for (const auto& s : in.at("steps")) {
    if (state.terminal) throw ReplayError("steps continue past the game end");
    game::StepRecord step;
    step.seat = s.at("seat").get<int>();
    if (step.seat != state.to_act) throw ReplayError("step seat out of turn");
    step.obs = game::observe(state, step.seat);
    if (step.obs.round != s.at("round").get<int>()) {
      throw ReplayError("step round mismatch");
    }
    std::vector<PlayerAction> legal;
    for (const auto& name : s.at("legal")) {
      legal.push_back(action_from_name(name.get<std::string>()));
    }
    if (legal != step.obs.legal) throw ReplayError("step legal-set mismatch");
    step.action = action_from_name(s.at("action").get<std::string>());
    if (s.contains("deliberation")) {
      step.deliberation = deliberation_from_json(s["deliberation"]);
    }
    state = game::apply_action(state, step.action);
    record.steps.push_back(std::move(step));
  }
  if (!state.terminal) throw ReplayError("record does not reach a terminal state");
  const auto chips = game::payoff(state);
  record.result = {in.at("payoffs").at(0).get<int>(),
                   in.at("payoffs").at(1).get<int>()};
  if (chips != record.result) throw ReplayError("payoffs do not match the replay");
  return record;
}

void write_replays(const std::vector<GameRecord>& records,
                   const std::string& path, bool redact) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw ReplayError("cannot open replay file for writing: " + path);
  for (const auto& record : records) {
    file << record_to_line(record, redact) << '\n';
  }
  if (!file) throw ReplayError("failed writing replay file: " + path);
}

std::vector<GameRecord> read_replays(const std::string& path,
                                     const game::LeducConfig& config) {
  std::ifstream file(path);
  if (!file) throw ReplayError("cannot open replay file: " + path);
  std::vector<GameRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(record_from_line(line, config));
    } catch (const json::exception& e) {
      throw ReplayError("line " + std::to_string(line_no) +
                        ": malformed record: " + e.what());
    } catch (const ReplayError& e) {
      throw ReplayError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace leducmind::harness
