#include <fstream>

#include "doctest.h"
#include "leducmind/harness/match.hpp"
#include "leducmind/harness/replay.hpp"
#include "leducmind/llm/parser.hpp"
#include "leducmind/llm/prompt_template.hpp"
#include "leducmind/opp/archetypes.hpp"
#include "leducmind/pipeline/agent.hpp"

using namespace leducmind;
using namespace leducmind::pipeline;
using game::Card;
using game::PlayerAction;
using game::Rank;

namespace {

constexpr auto C = PlayerAction::Call;
constexpr auto R = PlayerAction::Raise;
constexpr auto F = PlayerAction::Fold;
constexpr auto K = PlayerAction::Check;

std::string fixture(const std::string& name) {
  return llm::read_text_file(std::string(LEDUCMIND_FIXTURE_DIR) + "/" + name);
}

// Builds a terminal agent-view record for the given deal and actions.
game::GameRecord make_record(int64_t id, Card h0, Card h1, Card pub,
                             std::initializer_list<PlayerAction> actions,
                             int perspective_seat) {
  auto state = game::new_game_with_deal(h0, h1, pub);
  game::GameRecord record;
  record.game_id = id;
  record.seed = static_cast<uint64_t>(id);
  record.seat_agent_names = {"me", "opp"};
  record.deal_hole0 = h0;
  record.deal_hole1 = h1;
  record.deal_public = pub;
  for (auto action : actions) {
    game::StepRecord step;
    step.seat = state.to_act;
    step.obs = game::observe(state, state.to_act);
    step.action = action;
    record.steps.push_back(step);
    state = game::apply_action(state, action);
  }
  record.result = game::payoff(state);
  record.perspective_seat = perspective_seat;
  return record;
}

game::Observation obs_for(std::initializer_list<PlayerAction> actions,
                          Card h0, Card h1, Card pub, int player) {
  auto state = game::new_game_with_deal(h0, h1, pub);
  for (auto action : actions) state = game::apply_action(state, action);
  return game::observe(state, player);
}

AgentConfig oracle_config(ToMOrder order, bool hindsight = true) {
  AgentConfig config;
  config.order = order;
  config.hindsight = hindsight;
  return config;
}

}  // namespace

TEST_CASE("registered rule and conversion descriptions are complete") {
  const auto& rule = rule_description("leduc");
  CHECK(rule_description_complete(rule));
  const auto& conv = obs_conversion("leduc");
  CHECK(conversion_covers_all_fields(conv));
  CHECK_THROWS_AS(rule_description("bridge"), std::invalid_argument);

  ObsConversionRule partial = conv;
  partial.element_descriptions.erase("round");
  CHECK_FALSE(conversion_covers_all_fields(partial));
}

TEST_CASE("interpreted observation names the essentials and nothing private") {
  const auto obs = obs_for({}, {Rank::King, 0}, {Rank::Jack, 0}, {Rank::Queen, 0}, 0);
  const auto& rule = rule_description("leduc");
  const auto& conv = obs_conversion("leduc");
  const auto text = interpret_observation(rule, conv, obs);
  CHECK(text.find("King") != std::string::npos);
  CHECK(text.find("Jack") == std::string::npos);  // opponent card never shown
  CHECK(text.find("not revealed") != std::string::npos);
  CHECK(text.find("round 1") != std::string::npos);
  CHECK(text.find("Call") != std::string::npos);
  CHECK(text.find("Fold") != std::string::npos);
  CHECK(interpret_observation(rule, conv, obs) == text);  // deterministic
}

TEST_CASE("empty dataset analysis yields the empty bundle and uniform rows") {
  game::MatchDataset dataset;
  AnalysisOptions options;
  options.order = ToMOrder::Second;
  const auto bundle = analyze_game_oracle(dataset, options);
  CHECK(bundle.empty);

  const auto model = fit_opponent_model(dataset, ToMOrder::First);
  const auto row = model.row(opp::Tier::Strong, {1, true, std::nullopt});
  CHECK(row[C] == doctest::Approx(1.0 / 3.0));
  CHECK(row[R] == doctest::Approx(1.0 / 3.0));
  CHECK(row[F] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("pattern tables use +1 Laplace smoothing over the row support") {
  game::MatchDataset dataset;
  // Opponent (seat 1) holds a King and faces a round-1 raise ten times:
  // raises 7, calls 3.
  const Card my_card{Rank::Queen, 0};
  const Card opp_card{Rank::King, 0};
  const Card pub{Rank::Jack, 0};
  int64_t id = 0;
  for (int i = 0; i < 7; ++i) {
    auto record = make_record(id++, my_card, opp_card, pub, {R, R, F}, 0);
    end_game_update(dataset, std::move(record), true);
  }
  for (int i = 0; i < 3; ++i) {
    auto record = make_record(id++, my_card, opp_card, pub, {R, C, K, K}, 0);
    end_game_update(dataset, std::move(record), true);
  }
  const auto model = fit_opponent_model(dataset, ToMOrder::First);
  const auto row = model.row(opp::Tier::Strong, {1, true, std::nullopt});
  CHECK(row[R] == doctest::Approx(8.0 / 13.0));
  CHECK(row[C] == doctest::Approx(4.0 / 13.0));
  CHECK(row[F] == doctest::Approx(1.0 / 13.0));

  // Unfaced two-action rows smooth over {Check, Raise}.
  game::MatchDataset unfaced;
  id = 0;
  for (int i = 0; i < 7; ++i) {
    auto record = make_record(id++, my_card, opp_card, pub, {C, R, F}, 0);
    end_game_update(unfaced, std::move(record), true);
  }
  for (int i = 0; i < 3; ++i) {
    auto record = make_record(id++, my_card, opp_card, pub, {C, K, K, K}, 0);
    end_game_update(unfaced, std::move(record), true);
  }
  const auto model2 = fit_opponent_model(unfaced, ToMOrder::First);
  const auto row2 = model2.row(opp::Tier::Strong, {1, false, std::nullopt});
  CHECK(row2[R] == doctest::Approx(8.0 / 12.0));
  CHECK(row2[K] == doctest::Approx(4.0 / 12.0));
}

TEST_CASE("reactive tables split the same evidence by my preceding action") {
  game::MatchDataset dataset;
  const Card my_card{Rank::Queen, 0};
  const Card opp_card{Rank::King, 0};
  const Card pub{Rank::Jack, 0};
  int64_t id = 0;
  // Facing my raise the opponent always raises back...
  for (int i = 0; i < 6; ++i) {
    auto record = make_record(id++, my_card, opp_card, pub, {R, R, F}, 0);
    end_game_update(dataset, std::move(record), true);
  }
  // ...but at its blind-facing opening (seat 0, no action of mine yet) the
  // same opponent always calls.
  for (int i = 0; i < 6; ++i) {
    auto record = make_record(id++, opp_card, my_card, pub, {C, K, K, K}, 1);
    end_game_update(dataset, std::move(record), true);
  }
  const auto model = fit_opponent_model(dataset, ToMOrder::Second);
  const auto after_raise =
      model.row(opp::Tier::Strong, {1, true, std::optional<PlayerAction>(R)});
  const auto at_open = model.row(opp::Tier::Strong, {1, true, std::nullopt});
  CHECK(after_raise[R] == doctest::Approx(7.0 / 9.0));
  CHECK(at_open[C] == doctest::Approx(7.0 / 9.0));

  // A static fit of the same data blends the two contexts.
  const auto blended = fit_opponent_model(dataset, ToMOrder::First);
  const auto blend_row = blended.row(opp::Tier::Strong, {1, true, std::nullopt});
  CHECK(blend_row[R] == doctest::Approx(7.0 / 15.0));
  CHECK(blend_row[C] == doctest::Approx(7.0 / 15.0));
}

TEST_CASE("hindsight off: tables come from showdown inference only") {
  game::MatchDataset dataset;
  const Card my_card{Rank::Queen, 0};
  const Card opp_card{Rank::King, 0};
  const Card pub{Rank::Jack, 0};
  // Showdown loss against a raiser: the outcome pins the opponent on a King.
  auto record = make_record(0, my_card, opp_card, pub, {R, R, C, K, K}, 0);
  end_game_update(dataset, std::move(record), false);
  CHECK_FALSE(dataset.games[0].hindsight_opponent_card.has_value());

  // Losing the showdown vrs public Jack is consistent with an opponent King
  // (2 copies left) or a public-pairing Jack (1 copy left); a Queen would
  // have drawn.
  const auto weights = infer_opponent_rank_weights(dataset.games[0]);
  CHECK(weights[static_cast<size_t>(Rank::King)] == doctest::Approx(2.0 / 3.0));
  CHECK(weights[static_cast<size_t>(Rank::Jack)] == doctest::Approx(1.0 / 3.0));
  CHECK(weights[static_cast<size_t>(Rank::Queen)] == 0.0);

  // A fold-ended game reveals nothing.
  auto folded = make_record(1, my_card, opp_card, pub, {R, F}, 0);
  const auto none = infer_opponent_rank_weights(folded);
  CHECK(none[0] + none[1] + none[2] == 0.0);
}

TEST_CASE("analysis never reads the opponent hole card without hindsight") {
  game::MatchDataset dataset;
  const Card pub{Rank::Queen, 0};
  for (int i = 0; i < 8; ++i) {
    auto record = make_record(i, {Rank::Queen, 1}, {Rank::King, 0}, pub,
                              {R, R, C, K, K}, 0);
    end_game_update(dataset, std::move(record), false);
  }
  auto scrambled = dataset;
  for (auto& record : scrambled.games) {
    record.deal_hole1 = Card{Rank::Jack, 0};  // corrupt the hidden card
  }
  const auto a = fit_opponent_model(dataset, ToMOrder::Second);
  const auto b = fit_opponent_model(scrambled, ToMOrder::Second);
  for (size_t tier = 0; tier < opp::kNumTiers; ++tier) {
    for (int round = 1; round <= 2; ++round) {
      for (bool facing : {false, true}) {
        const belief::ModelContext ctx{round, facing, std::nullopt};
        const auto ra = a.row(static_cast<opp::Tier>(tier), ctx);
        const auto rb = b.row(static_cast<opp::Tier>(tier), ctx);
        for (auto action : game::all_actions()) {
          CHECK(ra[action] == rb[action]);
        }
      }
    }
  }
  CHECK(render_history(dataset, 30) == render_history(scrambled, 30));
  CHECK(render_reflexion(dataset, 30) == render_reflexion(scrambled, 30));
}

TEST_CASE("zero-order prediction passes the counting prior through") {
  AnalysisBundle bundle;  // empty
  const auto obs = obs_for({}, {Rank::Jack, 0}, {Rank::King, 0}, {Rank::Queen, 0}, 0);
  const auto result = predict_cards(bundle, obs, ToMOrder::Zero);
  CHECK(result.belief[Rank::Jack] == doctest::Approx(0.2));
  CHECK(result.belief[Rank::Queen] == doctest::Approx(0.4));
  CHECK(result.belief[Rank::King] == doctest::Approx(0.4));
}

TEST_CASE("first-order prediction after two raises concentrates on the King") {
  AnalysisBundle bundle;
  bundle.empty = false;
  bundle.pattern_model =
      llm::parse_behavior_pattern(fixture("pattern_sample_first.txt")).model;

  // Opponent (seat 0) raised in round 1, I called, opponent raised again in
  // round 2; I hold a Jack, the public card is a Queen.
  const auto obs = obs_for({R, C, R}, {Rank::King, 0}, {Rank::Jack, 0},
                           {Rank::Queen, 0}, 1);
  REQUIRE(obs.round == 2);
  const auto result = predict_cards(bundle, obs, ToMOrder::First);

  // Independent single-step Bayes arithmetic over the same tables.
  const auto prior = belief::card_prior(Rank::Jack, Rank::Queen);
  std::array<double, 3> likelihood{};
  {
    const auto& model = bundle.pattern_model;
    for (size_t i = 0; i < 3; ++i) {
      const Rank rank = static_cast<Rank>(i);
      const auto r1 = opp::legalize(
          model.row(opp::hand_tier(rank, std::nullopt), {1, true, std::nullopt}),
          {C, R, F});
      const auto r2 = opp::legalize(
          model.row(opp::hand_tier(rank, Rank::Queen), {2, false, std::nullopt}),
          {K, R});
      likelihood[i] = prior.p[i] * r1[R] * r2[R];
    }
  }
  const double total = likelihood[0] + likelihood[1] + likelihood[2];
  for (size_t i = 0; i < 3; ++i) {
    CHECK(result.belief.p[i] == doctest::Approx(likelihood[i] / total).epsilon(1e-12));
  }
  CHECK(result.belief[Rank::King] > 0.8);
}

TEST_CASE("with an empty dataset higher orders reduce to zero order") {
  const auto obs = obs_for({C}, {Rank::Queen, 0}, {Rank::King, 0}, {Rank::Jack, 0}, 1);
  AnalysisBundle bundle;  // empty: game 1
  const auto zero = predict_cards(bundle, obs, ToMOrder::Zero);
  const auto first = predict_cards(bundle, obs, ToMOrder::First);
  const auto second = predict_cards(bundle, obs, ToMOrder::Second);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(first.belief.p[i] == zero.belief.p[i]);
    CHECK(second.belief.p[i] == zero.belief.p[i]);
  }
  const auto plan_zero = plan_and_evaluate(bundle, zero.belief, obs, ToMOrder::Zero);
  const auto plan_second =
      plan_and_evaluate(bundle, second.belief, obs, ToMOrder::Second);
  CHECK(plan_zero.chosen == plan_second.chosen);
  REQUIRE(plan_zero.plans.size() == plan_second.plans.size());
  for (size_t i = 0; i < plan_zero.plans.size(); ++i) {
    CHECK(plan_zero.plans[i].candidate.expected_gain ==
          doctest::Approx(plan_second.plans[i].candidate.expected_gain));
  }
}

TEST_CASE("second order bluffs a weak card into a folder") {
  // Opponent called at its opening; I hold a Jack unfaced. Against a model
  // that folds weak hands to a raise, raising beats checking.
  AnalysisBundle bundle;
  bundle.empty = false;
  auto& model = bundle.pattern_model;
  model.mode = belief::ModelMode::Reactive;
  auto set_row = [&](opp::Tier tier, int round, bool facing, int my_last,
                     double call, double raise, double fold, double check) {
    opp::ActionDist d;
    d[C] = call;
    d[R] = raise;
    d[F] = fold;
    d[K] = check;
    model.reactive_rows[static_cast<size_t>(tier)][static_cast<size_t>(round - 1)]
                       [facing ? 1 : 0][static_cast<size_t>(my_last)] = d;
  };
  const int after_raise = 1 + static_cast<int>(R);
  // Weak hands fold to raises 80/20; mid 60/40; strong never.
  set_row(opp::Tier::Weak, 1, true, after_raise, 0.2, 0.0, 0.8, 0.0);
  set_row(opp::Tier::Mid, 1, true, after_raise, 0.4, 0.0, 0.6, 0.0);
  set_row(opp::Tier::Strong, 1, true, after_raise, 0.7, 0.3, 0.0, 0.0);

  belief::BeliefDistribution b;
  b[Rank::Jack] = 0.7;
  b[Rank::Queen] = 0.2;
  b[Rank::King] = 0.1;

  const auto obs = obs_for({C}, {Rank::King, 0}, {Rank::Jack, 0}, {Rank::Queen, 0}, 1);
  REQUIRE(obs.legal == std::vector<PlayerAction>{K, R});
  const auto planned = plan_and_evaluate(bundle, b, obs, ToMOrder::Second);
  CHECK(planned.chosen == R);
}

TEST_CASE("a made pair never folds under the zero-order evaluator") {
  for (auto actions : {std::initializer_list<PlayerAction>{R, C, R},
                       std::initializer_list<PlayerAction>{C, K, R},
                       std::initializer_list<PlayerAction>{R, C, K, R}}) {
    const auto obs = obs_for(actions, {Rank::King, 0}, {Rank::Jack, 0},
                             {Rank::King, 1}, 0);
    if (obs.round != 2) continue;
    AnalysisBundle bundle;
    const auto predicted = predict_cards(bundle, obs, ToMOrder::Zero);
    const auto planned = plan_and_evaluate(bundle, predicted.belief, obs,
                                           ToMOrder::Zero);
    CHECK(planned.chosen != F);
  }
}

TEST_CASE("a single legal action is chosen with one candidate") {
  AnalysisBundle bundle;
  game::Observation obs =
      obs_for({R, R}, {Rank::King, 0}, {Rank::Jack, 0}, {Rank::Queen, 0}, 0);
  REQUIRE(obs.legal == std::vector<PlayerAction>{C, F});
  obs.legal = {C};  // degenerate single-option view
  const auto planned =
      plan_and_evaluate(bundle, predict_cards(bundle, obs, ToMOrder::Zero).belief,
                        obs, ToMOrder::Zero);
  CHECK(planned.plans.size() == 1);
  CHECK(planned.chosen == C);
}

TEST_CASE("oracle turns are deterministic and always legal") {
  TomAgent agent_a("tom", oracle_config(ToMOrder::Second));
  TomAgent agent_b("tom", oracle_config(ToMOrder::Second));
  auto folder_a = harness::PolicyAgent(opp::archetype("conservative_folder"), 7);
  auto folder_b = harness::PolicyAgent(opp::archetype("conservative_folder"), 7);

  harness::MatchOptions options;
  for (int i = 0; i < 30; ++i) {
    const auto ra = harness::play_game(agent_a, folder_a, 1000 + i, i, options);
    const auto rb = harness::play_game(agent_b, folder_b, 1000 + i, i, options);
    CHECK(harness::record_to_line(ra) == harness::record_to_line(rb));
    for (const auto& step : ra.steps) {
      const auto& legal = step.obs.legal;
      CHECK(std::find(legal.begin(), legal.end(), step.action) != legal.end());
    }
  }
}

TEST_CASE("turns stay legal under fuzzed random opposition") {
  opp::Policy random_policy;
  random_policy.name = "random";
  random_policy.distribution = [](const game::Observation& obs) {
    return opp::uniform_over(obs.legal);
  };
  for (auto order : {ToMOrder::Zero, ToMOrder::First, ToMOrder::Second}) {
    TomAgent agent("tom", oracle_config(order));
    harness::PolicyAgent fuzzer(random_policy, 99);
    for (int i = 0; i < 60; ++i) {
      const auto record = harness::play_game(agent, fuzzer, i * 31, i, {});
      for (const auto& step : record.steps) {
        const auto& legal = step.obs.legal;
        CHECK(std::find(legal.begin(), legal.end(), step.action) != legal.end());
        if (step.seat == 0) {
          REQUIRE(step.deliberation != nullptr);
          CHECK_FALSE(step.deliberation->fallback_used);
        }
      }
    }
  }
}

TEST_CASE("an always-malformed backend degrades to the fallback action") {
  AgentConfig config = oracle_config(ToMOrder::First);
  auto backend = std::make_shared<llm::MalformedBackend>();
  config.backend = backend;
  config.template_dir = LEDUCMIND_TEMPLATE_DIR;
  TomAgent agent("tom", config);

  // Seed one game of history so analysis and prediction paths engage.
  harness::PolicyAgent caller(opp::archetype("always_caller"), 1);
  harness::play_game(agent, caller, 5, 0, {});

  agent.begin_game(1, 0);
  const auto obs = obs_for({}, {Rank::Queen, 0}, {Rank::King, 0}, {Rank::Jack, 0}, 0);
  const auto [action, record] = agent.run_turn(obs);
  CHECK(record.fallback_used);
  CHECK(action == C);  // Check illegal at the opening, so Call
  CHECK(backend->calls > 0);
}

TEST_CASE("scripted backend runs the full llm path without fallbacks") {
  AgentConfig config = oracle_config(ToMOrder::Second);
  config.backend = std::make_shared<llm::ScriptedBackend>();
  config.template_dir = LEDUCMIND_TEMPLATE_DIR;
  TomAgent agent("tom", config);
  harness::PolicyAgent folder(opp::archetype("conservative_folder"), 3);
  for (int i = 0; i < 8; ++i) {
    const auto record = harness::play_game(agent, folder, 200 + i, i, {});
    for (const auto& step : record.steps) {
      if (step.seat != 0) continue;
      REQUIRE(step.deliberation != nullptr);
      CHECK_FALSE(step.deliberation->fallback_used);
      CHECK(!step.deliberation->raw_prompts.empty());
      CHECK(step.deliberation->oracle_choice.has_value());
    }
  }
}

TEST_CASE("end_game_update fills or withholds the hindsight card") {
  game::MatchDataset dataset;
  auto record = make_record(0, {Rank::Queen, 0}, {Rank::King, 0},
                            {Rank::Jack, 0}, {C, K, K, K}, 0);
  end_game_update(dataset, record, true);
  CHECK(dataset.size() == 1);
  REQUIRE(dataset.games[0].hindsight_opponent_card.has_value());
  CHECK(dataset.games[0].hindsight_opponent_card->rank == Rank::King);

  end_game_update(dataset, record, false);
  CHECK(dataset.size() == 2);
  CHECK_FALSE(dataset.games[1].hindsight_opponent_card.has_value());

  auto unfinished = record;
  unfinished.steps.pop_back();
  CHECK_THROWS_AS(end_game_update(dataset, unfinished, true), game::GameError);

  auto wrong_result = record;
  wrong_result.result = {5, -5};
  CHECK_THROWS_AS(end_game_update(dataset, wrong_result, true), game::GameError);
}

TEST_CASE("agent views replace the other side's observations and reasoning") {
  TomAgent agent("tom", oracle_config(ToMOrder::Second));
  harness::PolicyAgent caller(opp::archetype("always_caller"), 11);
  const auto record = harness::play_game(caller, agent, 42, 0, {});

  const auto view = agent_view(record, 1);
  CHECK(view.perspective_seat == 1);
  REQUIRE(view.steps.size() == record.steps.size());
  for (size_t i = 0; i < view.steps.size(); ++i) {
    const auto& step = view.steps[i];
    CHECK(step.obs.player == 1);
    CHECK(step.obs.private_card == record.deal_hole1.rank);
    CHECK(step.seat == record.steps[i].seat);
    if (step.seat == 0) CHECK(step.deliberation == nullptr);
  }
}
