#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_command(const std::string& args,
                          const std::string& stdin_text = "") {
  const std::string out_path = "cli_test_output.txt";
  std::string command = std::string(LEDUCMIND_CLI_PATH) + " " + args;
  if (!stdin_text.empty()) {
    std::ofstream in("cli_test_stdin.txt");
    in << stdin_text;
    in.close();
    command += " < cli_test_stdin.txt";
  }
  command += " > " + out_path + " 2>&1";
  const int status = std::system(command.c_str());

  CommandResult result;
  result.exit_code = WEXITSTATUS(status);
  std::ifstream out(out_path);
  std::ostringstream text;
  text << out.rdbuf();
  result.output = text.str();
  std::remove(out_path.c_str());
  std::remove("cli_test_stdin.txt");
  return result;
}

void write_config(const std::string& path, const std::string& body) {
  std::ofstream file(path);
  file << body;
}

}  // namespace

TEST_CASE("eval runs a swap match and writes every artifact") {
  write_config("cli_eval.json", R"({
    "game": "leduc",
    "agents": [
      {"kind": "oracle", "tom_order": 2, "hindsight": true},
      {"kind": "archetype:conservative_folder"}
    ],
    "protocol": {"kind": "swap", "n_games": 10, "seed": 7},
    "out_dir": "cli_eval_out"
  })");
  const auto result = run_command("eval --config cli_eval.json");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("games: 20") != std::string::npos);
  CHECK(result.output.find("winner:") != std::string::npos);
  for (const char* artifact :
       {"replays.jsonl", "summary.json", "payoffs.csv", "actions_0.svg",
        "actions_1.svg"}) {
    CHECK(std::filesystem::exists(std::string("cli_eval_out/") + artifact));
  }
  std::filesystem::remove_all("cli_eval_out");
  std::remove("cli_eval.json");
}

TEST_CASE("flag overrides beat config file values") {
  write_config("cli_eval2.json", R"({
    "agents": [
      {"kind": "archetype:always_caller"},
      {"kind": "archetype:always_caller"}
    ],
    "protocol": {"kind": "swap", "n_games": 50, "seed": 7},
    "out_dir": "cli_eval2_out"
  })");
  const auto result = run_command(
      "eval --config cli_eval2.json --games 3 --protocol seeds --seed 11 "
      "--out cli_eval2_alt");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("games: 3") != std::string::npos);
  CHECK(std::filesystem::exists("cli_eval2_alt/summary.json"));
  CHECK_FALSE(std::filesystem::exists("cli_eval2_out"));
  std::filesystem::remove_all("cli_eval2_alt");
  std::remove("cli_eval2.json");
}

TEST_CASE("unknown archetype names exit 2 listing valid options") {
  write_config("cli_bad.json", R"({
    "agents": [
      {"kind": "archetype:card_shark"},
      {"kind": "archetype:always_caller"}
    ]
  })");
  const auto result = run_command("eval --config cli_bad.json");
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("card_shark") != std::string::npos);
  CHECK(result.output.find("always_caller") != std::string::npos);
  std::remove("cli_bad.json");
}

TEST_CASE("tom_order on a policy kind is rejected naming the key") {
  write_config("cli_bad2.json", R"({
    "agents": [
      {"kind": "archetype:always_caller", "tom_order": 2},
      {"kind": "oracle"}
    ]
  })");
  const auto result = run_command("eval --config cli_bad2.json");
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("tom_order") != std::string::npos);
  std::remove("cli_bad2.json");
}

TEST_CASE("llm kind without the key env var set exits 2 before any game") {
  write_config("cli_llm.json", R"({
    "agents": [
      {"kind": "llm", "tom_order": 1},
      {"kind": "archetype:always_caller"}
    ],
    "llm": {"api_key_env": "LEDUCMIND_CLI_TEST_UNSET_KEY"},
    "protocol": {"kind": "seeds", "n_games": 2, "seed": 1},
    "out_dir": "cli_llm_out"
  })");
  unsetenv("LEDUCMIND_CLI_TEST_UNSET_KEY");
  const auto result = run_command("eval --config cli_llm.json");
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("LEDUCMIND_CLI_TEST_UNSET_KEY") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists("cli_llm_out"));
  std::remove("cli_llm.json");
}

TEST_CASE("scripted llm backend runs CI-safe llm-kind matches") {
  write_config("cli_scripted.json", R"({
    "agents": [
      {"kind": "llm", "tom_order": 2},
      {"kind": "archetype:conservative_folder"}
    ],
    "llm": {"backend": "scripted", "template_dir": ")" LEDUCMIND_TEMPLATE_DIR R"("},
    "protocol": {"kind": "seeds", "n_games": 4, "seed": 5},
    "out_dir": "cli_scripted_out"
  })");
  const auto result = run_command("eval --config cli_scripted.json");
  CHECK(result.exit_code == 0);
  CHECK(std::filesystem::exists("cli_scripted_out/replays.jsonl"));
  std::filesystem::remove_all("cli_scripted_out");
  std::remove("cli_scripted.json");
}

TEST_CASE("solve-cfr prints decreasing checkpoints and a loadable policy") {
  const auto result =
      run_command("solve-cfr --iters 2000 --out cli_policy.bin");
  REQUIRE(result.exit_code == 0);
  std::vector<double> values;
  std::istringstream lines(result.output);
  std::string line;
  while (std::getline(lines, line)) {
    const auto pos = line.find("nash_conv ");
    if (pos != std::string::npos) {
      values.push_back(std::stod(line.substr(pos + 10)));
    }
  }
  REQUIRE(values.size() == 3);  // 100, 1000, 2000
  CHECK(values[0] > values[1]);
  CHECK(values[1] > values[2]);

  // The saved policy file is accepted by an eval agent spec.
  write_config("cli_cfr.json", R"({
    "agents": [
      {"kind": "cfr:cli_policy.bin"},
      {"kind": "archetype:always_caller"}
    ],
    "protocol": {"kind": "seeds", "n_games": 5, "seed": 3},
    "out_dir": "cli_cfr_out"
  })");
  const auto eval_result = run_command("eval --config cli_cfr.json");
  CHECK(eval_result.exit_code == 0);
  std::filesystem::remove_all("cli_cfr_out");
  std::remove("cli_cfr.json");
  std::remove("cli_policy.bin");
}

TEST_CASE("replay prints a transcript and rejects missing ids") {
  write_config("cli_replay.json", R"({
    "agents": [
      {"kind": "oracle", "tom_order": 1},
      {"kind": "archetype:polar_bluffer"}
    ],
    "protocol": {"kind": "seeds", "n_games": 3, "seed": 2},
    "out_dir": "cli_replay_out"
  })");
  REQUIRE(run_command("eval --config cli_replay.json").exit_code == 0);

  const auto good =
      run_command("replay --file cli_replay_out/replays.jsonl --game 1");
  CHECK(good.exit_code == 0);
  CHECK(good.output.find("Plan Selection") != std::string::npos);
  CHECK(good.output.find("payoffs:") != std::string::npos);

  const auto missing =
      run_command("replay --file cli_replay_out/replays.jsonl --game 99");
  CHECK(missing.exit_code == 2);
  std::filesystem::remove_all("cli_replay_out");
  std::remove("cli_replay.json");
}

TEST_CASE("play accepts tokens, reprompts on junk, and quits cleanly") {
  write_config("cli_play.json", R"({
    "agents": [
      {"kind": "archetype:always_caller"},
      {"kind": "archetype:always_caller"}
    ],
    "protocol": {"kind": "seeds", "n_games": 1, "seed": 9},
    "out_dir": "cli_play_out"
  })");
  // "bet" is rejected with the legal tokens; "raise" is applied; the caller
  // opponent calls everything, so round 2 arrives and the game finishes.
  const auto result = run_command("play --config cli_play.json --human-seat 0",
                                  "bet\nraise\ncheck\nquit\n");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("invalid action") != std::string::npos);
  CHECK(result.output.find("call raise fold") != std::string::npos);
  CHECK(result.output.find("result: you") != std::string::npos);
  CHECK(result.output.find("your total") != std::string::npos);
  std::remove("cli_play.json");
}
