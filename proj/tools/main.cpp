#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"
#include "leducmind/cfr/solver.hpp"
#include "leducmind/harness/match.hpp"
#include "leducmind/harness/replay.hpp"
#include "leducmind/harness/report.hpp"
#include "leducmind/llm/http_backend.hpp"
#include "leducmind/opp/archetypes.hpp"
#include "leducmind/pipeline/agent.hpp"

namespace {

using namespace leducmind;
using nlohmann::json;

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AgentSpec {
  std::string kind;
  int tom_order = 2;
  bool tom_order_set = false;
  bool hindsight = true;
};

struct LlmSettings {
  std::string backend = "http";  // http | scripted | transcript
  std::string endpoint = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4-0613";
  double temperature = 0.0;
  int retries = 3;
  double rate_limit_per_min = 60.0;
  std::string api_key_env = "OPENAI_API_KEY";
  std::string template_dir = "templates";
  std::string transcript;
  std::string record_transcript;
};

struct RunConfig {
  std::string game = "leduc";
  std::vector<AgentSpec> agents;
  LlmSettings llm;
  std::string protocol = "seeds";  // seeds | swap
  int n_games = 100;
  uint64_t seed = 0;
  std::string out_dir = "out";
  bool redact_replays = false;
};

template <typename T>
T get_field(const json& j, const std::string& key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

RunConfig parse_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open config file: " + path);
  json root;
  try {
    root = json::parse(file);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig config;
  config.game = get_field<std::string>(root, "game", "leduc");
  if (config.game != "leduc") {
    throw ConfigError("config key 'game': unknown game '" + config.game + "'");
  }
  if (!root.contains("agents") || !root["agents"].is_array() ||
      root["agents"].size() != 2) {
    throw ConfigError("config key 'agents' must be an array of exactly two specs");
  }
  for (const auto& spec_json : root["agents"]) {
    AgentSpec spec;
    if (!spec_json.contains("kind")) {
      throw ConfigError("config key 'agents[].kind' is required");
    }
    spec.kind = spec_json.at("kind").get<std::string>();
    if (spec_json.contains("tom_order")) {
      spec.tom_order = spec_json.at("tom_order").get<int>();
      spec.tom_order_set = true;
      if (spec.tom_order < 0 || spec.tom_order > 2) {
        throw ConfigError("config key 'agents[].tom_order' must be 0, 1 or 2");
      }
    }
    spec.hindsight = get_field<bool>(spec_json, "hindsight", true);
    const bool deliberative = spec.kind == "llm" || spec.kind == "oracle";
    if (spec.tom_order_set && !deliberative) {
      throw ConfigError("config key 'agents[].tom_order' is only valid for "
                        "kinds 'llm' and 'oracle' (got kind '" + spec.kind + "')");
    }
    config.agents.push_back(spec);
  }
  if (root.contains("llm")) {
    const auto& llm = root["llm"];
    config.llm.backend = get_field<std::string>(llm, "backend", config.llm.backend);
    config.llm.endpoint = get_field<std::string>(llm, "endpoint", config.llm.endpoint);
    config.llm.path = get_field<std::string>(llm, "path", config.llm.path);
    config.llm.model = get_field<std::string>(llm, "model", config.llm.model);
    config.llm.temperature = get_field<double>(llm, "temperature", 0.0);
    config.llm.retries = get_field<int>(llm, "retries", 3);
    config.llm.rate_limit_per_min =
        get_field<double>(llm, "rate_limit_per_min", 60.0);
    config.llm.api_key_env =
        get_field<std::string>(llm, "api_key_env", config.llm.api_key_env);
    config.llm.template_dir =
        get_field<std::string>(llm, "template_dir", config.llm.template_dir);
    config.llm.transcript = get_field<std::string>(llm, "transcript", "");
    config.llm.record_transcript =
        get_field<std::string>(llm, "record_transcript", "");
  }
  if (root.contains("protocol")) {
    const auto& protocol = root["protocol"];
    config.protocol = get_field<std::string>(protocol, "kind", "seeds");
    config.n_games = get_field<int>(protocol, "n_games", 100);
    config.seed = get_field<uint64_t>(protocol, "seed", 0);
  }
  if (config.protocol != "seeds" && config.protocol != "swap") {
    throw ConfigError("config key 'protocol.kind' must be 'seeds' or 'swap'");
  }
  if (config.n_games < 1) {
    throw ConfigError("config key 'protocol.n_games' must be >= 1");
  }
  config.out_dir = get_field<std::string>(root, "out_dir", "out");
  config.redact_replays = get_field<bool>(root, "redact_replays", false);
  return config;
}

std::shared_ptr<llm::CompletionBackend> build_backend(const LlmSettings& llm) {
  std::shared_ptr<llm::CompletionBackend> backend;
  if (llm.backend == "scripted") {
    backend = std::make_shared<llm::ScriptedBackend>();
  } else if (llm.backend == "transcript") {
    if (llm.transcript.empty()) {
      throw ConfigError("config key 'llm.transcript' required for the "
                        "transcript backend");
    }
    backend = std::make_shared<llm::TranscriptBackend>(llm.transcript);
  } else if (llm.backend == "http") {
    llm::HttpBackendConfig http;
    http.base_url = llm.endpoint;
    http.path = llm.path;
    http.api_key_env = llm.api_key_env;
    http.max_attempts = llm.retries;
    http.rate_limit_per_minute = llm.rate_limit_per_min;
    try {
      backend = std::make_shared<llm::HttpBackend>(http);
    } catch (const llm::ConfigError& e) {
      throw ConfigError(e.what());
    }
  } else {
    throw ConfigError("config key 'llm.backend' must be http, scripted or "
                      "transcript");
  }
  if (!llm.record_transcript.empty()) {
    backend = std::make_shared<llm::RecordingBackend>(std::move(backend),
                                                      llm.record_transcript);
  }
  return backend;
}

std::unique_ptr<harness::MatchAgent> build_agent(const AgentSpec& spec,
                                                 const RunConfig& config,
                                                 uint64_t rng_seed) {
  if (spec.kind == "oracle" || spec.kind == "llm") {
    pipeline::AgentConfig agent_config;
    agent_config.order = static_cast<pipeline::ToMOrder>(spec.tom_order);
    agent_config.hindsight = spec.hindsight;
    agent_config.game = config.game;
    agent_config.template_dir = config.llm.template_dir;
    agent_config.model = config.llm.model;
    agent_config.temperature = config.llm.temperature;
    if (spec.kind == "llm") {
      agent_config.backend = build_backend(config.llm);
    }
    const std::string name =
        spec.kind + "_tom" + std::to_string(spec.tom_order);
    return std::make_unique<pipeline::TomAgent>(name, agent_config);
  }
  if (spec.kind.rfind("cfr:", 0) == 0) {
    const std::string path = spec.kind.substr(4);
    std::shared_ptr<cfr::StrategyProfile> profile;
    try {
      profile = std::make_shared<cfr::StrategyProfile>(cfr::load_policy(path));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("agents[].kind cfr: ") + e.what());
    }
    return std::make_unique<harness::PolicyAgent>(
        cfr::make_cfr_policy(profile), rng_seed);
  }
  std::string name = spec.kind;
  if (name.rfind("archetype:", 0) == 0) name = name.substr(10);
  try {
    return std::make_unique<harness::PolicyAgent>(opp::archetype(name), rng_seed);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("agents[].kind: ") + e.what());
  }
}

int cmd_eval(const RunConfig& config) {
  auto agent_a = build_agent(config.agents[0], config, config.seed * 2 + 101);
  auto agent_b = build_agent(config.agents[1], config, config.seed * 2 + 202);

  harness::MatchOptions options;
  options.hindsight = config.agents[0].hindsight;

  harness::MatchResult result;
  if (config.protocol == "swap") {
    result = harness::run_position_swap(*agent_a, *agent_b, config.n_games,
                                        config.seed, options);
  } else {
    result = harness::run_variable_seeds(*agent_a, *agent_b, config.n_games,
                                         config.seed, options);
  }
  // Fold the run configuration into the report snapshot.
  json snapshot = json::parse(result.report.config_snapshot);
  snapshot["agents"] = json::array();
  for (const auto& spec : config.agents) {
    json agent_json;
    agent_json["kind"] = spec.kind;
    if (spec.kind == "oracle" || spec.kind == "llm") {
      agent_json["tom_order"] = spec.tom_order;
      agent_json["hindsight"] = spec.hindsight;
      if (spec.kind == "llm") agent_json["backend"] = config.llm.backend;
    }
    snapshot["agents"].push_back(std::move(agent_json));
  }
  result.report.config_snapshot = snapshot.dump();

  std::filesystem::create_directories(config.out_dir);
  harness::write_replays(result.records, config.out_dir + "/replays.jsonl",
                         config.redact_replays);
  harness::emit_report(result.report, config.out_dir);

  std::cout << "games: " << result.report.per_game_payoffs.size() << "\n";
  std::cout << result.report.agent_names[0] << ": " << std::showpos
            << result.report.totals[0] << std::noshowpos << " chips\n";
  std::cout << result.report.agent_names[1] << ": " << std::showpos
            << result.report.totals[1] << std::noshowpos << " chips\n";
  std::cout << "winner: " << result.report.winner << "\n";
  std::cout << "outputs in " << config.out_dir << "\n";
  return 0;
}

int cmd_solve_cfr(int iterations, const std::string& out_path) {
  cfr::CfrSolver solver;
  int done = 0;
  std::vector<int> checkpoints;
  for (int c : {100, 1000, 10000}) {
    if (c < iterations) checkpoints.push_back(c);
  }
  checkpoints.push_back(iterations);
  for (int checkpoint : checkpoints) {
    solver.run(checkpoint - done);
    done = checkpoint;
    std::cout << "iterations " << checkpoint << ": nash_conv "
              << solver.nash_conv() << " chips/game\n";
  }
  cfr::save_policy(solver.snapshot(), out_path);
  std::cout << "policy saved to " << out_path << "\n";
  return 0;
}

void print_deliberation(const pipeline::DeliberationRecord& d) {
  std::cout << "    tom order: " << pipeline::tom_order_name(d.tom_order) << "\n";
  if (!d.obs_text.empty()) std::cout << "    observation: " << d.obs_text << "\n";
  if (!d.belief_text.empty()) std::cout << "    belief: " << d.belief_text << "\n";
  for (const auto& plan : d.plans) {
    std::cout << "    plan " << game::action_name(plan.candidate.action)
              << ": expected gain " << plan.candidate.expected_gain;
    if (!plan.rationale.empty()) std::cout << " (" << plan.rationale << ")";
    std::cout << "\n";
  }
  std::cout << "    Plan Selection: " << game::action_name(d.chosen);
  if (d.fallback_used) std::cout << " (fallback)";
  if (d.oracle_choice) {
    std::cout << " [oracle: " << game::action_name(*d.oracle_choice)
              << ", gain delta " << d.oracle_gain_delta << "]";
  }
  std::cout << "\n";
}

int cmd_replay(const std::string& path, int64_t game_id) {
  const auto records = harness::read_replays(path);
  for (const auto& record : records) {
    if (record.game_id != game_id) continue;
    std::cout << "game " << record.game_id << " (seed " << record.seed << ")\n";
    std::cout << "seats: 0=" << record.seat_agent_names[0]
              << " 1=" << record.seat_agent_names[1] << "\n";
    std::cout << "deal: hole0 " << game::rank_name(record.deal_hole0.rank)
              << ", hole1 " << game::rank_name(record.deal_hole1.rank)
              << ", public " << game::rank_name(record.deal_public.rank) << "\n";
    for (const auto& step : record.steps) {
      std::cout << "  round " << step.obs.round << " seat " << step.seat << ": "
                << game::action_name(step.action) << "\n";
      if (step.deliberation) print_deliberation(*step.deliberation);
    }
    std::cout << "payoffs: " << record.result[0] << " / " << record.result[1]
              << (record.hindsight ? " (hindsight on)" : " (hindsight off)")
              << "\n";
    return 0;
  }
  std::cerr << "game id " << game_id << " not found in " << path << "\n";
  return kExitConfig;
}

int cmd_play(const RunConfig& config, int human_seat) {
  auto agent = build_agent(config.agents[static_cast<size_t>(1 - human_seat)],
                           config, config.seed + 7);
  const auto& rule = pipeline::rule_description(config.game);
  const auto& conv = pipeline::obs_conversion(config.game);

  int human_total = 0;
  int games = 0;
  std::cout << "You are seat " << human_seat << " against " << agent->name()
            << ". Actions: call, raise, fold, check; 'quit' to stop.\n";
  for (int64_t game_id = 0;; ++game_id) {
    auto state = game::new_game(config.seed + static_cast<uint64_t>(game_id));
    agent->begin_game(game_id, 1 - human_seat);
    std::cout << "\n=== game " << game_id + 1 << " ===\n";
    bool quit = false;
    while (!state.terminal) {
      const int actor = state.to_act;
      const auto obs = game::observe(state, actor);
      game::PlayerAction action;
      if (actor == human_seat) {
        std::cout << pipeline::interpret_observation(rule, conv, obs) << "\n";
        while (true) {
          std::cout << "your action> " << std::flush;
          std::string token;
          if (!std::getline(std::cin, token)) {
            quit = true;
            break;
          }
          if (token == "quit" || token == "q" || token == "exit") {
            quit = true;
            break;
          }
          const auto parsed = game::action_from_token(token);
          if (parsed && std::find(obs.legal.begin(), obs.legal.end(), *parsed) !=
                            obs.legal.end()) {
            action = *parsed;
            break;
          }
          std::cout << "invalid action; legal:";
          for (auto a : obs.legal) {
            std::string lower = game::action_name(a);
            for (auto& c : lower) c = static_cast<char>(std::tolower(c));
            std::cout << " " << lower;
          }
          std::cout << "\n";
        }
        if (quit) break;
      } else {
        action = agent->act(obs).action;
        std::cout << agent->name() << " plays " << game::action_name(action)
                  << "\n";
      }
      state = game::apply_action(state, action);
    }
    if (quit) break;
    const auto chips = game::payoff(state);
    std::cout << "result: you " << std::showpos
              << chips[static_cast<size_t>(human_seat)] << std::noshowpos;
    if (state.winner == game::Winner::Draw) {
      std::cout << " (draw)";
    }
    std::cout << "; opponent held "
              << game::rank_name(
                     state.hole_cards[static_cast<size_t>(1 - human_seat)].rank)
              << "\n";
    human_total += chips[static_cast<size_t>(human_seat)];
    ++games;
  }
  std::cout << "\nplayed " << games << " games; your total " << std::showpos
            << human_total << std::noshowpos << " chips\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-player imperfect-information card game lab: engine, "
               "solver, scripted opponents, deliberating agents, evaluation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir_override;
  std::string protocol_override;
  int games_override = -1;
  int64_t seed_override = -1;

  auto* eval = app.add_subcommand("eval", "run an evaluation match");
  eval->add_option("--config", config_path, "config file (JSON)")->required();
  eval->add_option("--games", games_override, "override protocol.n_games");
  eval->add_option("--seed", seed_override, "override protocol.seed");
  eval->add_option("--protocol", protocol_override, "override protocol kind: seeds|swap");
  eval->add_option("--out", out_dir_override, "override output directory");

  int iters = 0;
  std::string cfr_out;
  auto* solve = app.add_subcommand("solve-cfr", "train the CFR baseline");
  solve->add_option("--iters", iters, "training iterations")->required();
  solve->add_option("--out", cfr_out, "output policy file")->required();

  std::string replay_file;
  int64_t replay_game = -1;
  auto* replay = app.add_subcommand("replay", "pretty-print a recorded game");
  replay->add_option("--file", replay_file, "replay file")->required();
  replay->add_option("--game", replay_game, "game id")->required();

  std::string play_config;
  int human_seat = 0;
  auto* play = app.add_subcommand("play", "play against an agent in the terminal");
  play->add_option("--config", play_config, "config file (JSON)")->required();
  play->add_option("--human-seat", human_seat, "your seat: 0 or 1")
      ->check(CLI::Range(0, 1));

  CLI11_PARSE(app, argc, argv);

  try {
    if (eval->parsed()) {
      auto config = parse_config(config_path);
      if (games_override > 0) config.n_games = games_override;
      if (seed_override >= 0) config.seed = static_cast<uint64_t>(seed_override);
      if (!protocol_override.empty()) {
        if (protocol_override != "seeds" && protocol_override != "swap") {
          throw ConfigError("--protocol must be seeds or swap");
        }
        config.protocol = protocol_override;
      }
      if (!out_dir_override.empty()) config.out_dir = out_dir_override;
      return cmd_eval(config);
    }
    if (solve->parsed()) {
      if (iters < 1) throw ConfigError("--iters must be >= 1");
      return cmd_solve_cfr(iters, cfr_out);
    }
    if (replay->parsed()) {
      if (!std::filesystem::exists(replay_file)) {
        throw ConfigError("replay file does not exist: " + replay_file);
      }
      return cmd_replay(replay_file, replay_game);
    }
    if (play->parsed()) {
      return cmd_play(parse_config(play_config), human_seat);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
