#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "leducmind/cfr/solver.hpp"
#include "leducmind/harness/match.hpp"
#include "leducmind/harness/replay.hpp"
#include "leducmind/harness/report.hpp"
#include "leducmind/opp/archetypes.hpp"
#include "leducmind/pipeline/agent.hpp"

using namespace leducmind;
using namespace leducmind::harness;
using game::PlayerAction;
using game::Rank;

namespace {

constexpr auto C = PlayerAction::Call;
constexpr auto R = PlayerAction::Raise;
constexpr auto F = PlayerAction::Fold;
constexpr auto K = PlayerAction::Check;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

// Minimal well-formedness scan for the emitted vector markup: every opened
// tag closes in order.
bool well_formed_markup(const std::string& text) {
  std::vector<std::string> stack;
  size_t i = 0;
  while ((i = text.find('<', i)) != std::string::npos) {
    const size_t end = text.find('>', i);
    if (end == std::string::npos) return false;
    std::string tag = text.substr(i + 1, end - i - 1);
    i = end + 1;
    if (tag.empty()) return false;
    if (tag.back() == '/') continue;  // self-closing
    if (tag[0] == '/') {
      if (stack.empty()) return false;
      if (tag.substr(1) != stack.back()) return false;
      stack.pop_back();
    } else {
      stack.push_back(tag.substr(0, tag.find(' ')));
    }
  }
  return stack.empty();
}

}  // namespace

TEST_CASE("two pure callers always reach showdown and sum to zero") {
  PolicyAgent a(opp::archetype("always_caller"), 1);
  PolicyAgent b(opp::archetype("always_caller"), 2);
  const auto result = run_variable_seeds(a, b, 40, 500);
  CHECK(result.records.size() == 40);
  CHECK(result.report.totals[0] + result.report.totals[1] == 0);
  for (const auto& record : result.records) {
    CHECK(record.result[0] + record.result[1] == 0);
    CHECK(record.steps.back().action != F);
  }
  // Callers never fold and never raise.
  const auto shares = action_percentages(result.records);
  const auto& row = shares.at("always_caller");
  CHECK(row[static_cast<size_t>(F)] == 0.0);
  CHECK(row[static_cast<size_t>(R)] == 0.0);
  CHECK(row[0] + row[1] + row[2] + row[3] == doctest::Approx(1.0));
}

TEST_CASE("a single-game report has exactly one payoff entry") {
  PolicyAgent a(opp::archetype("always_caller"), 1);
  PolicyAgent b(opp::archetype("conservative_folder"), 2);
  const auto result = run_variable_seeds(a, b, 1, 9);
  CHECK(result.report.per_game_payoffs.size() == 1);
}

TEST_CASE("identical configuration reproduces identical persisted bytes") {
  auto run_once = [] {
    pipeline::AgentConfig config;
    config.order = pipeline::ToMOrder::Second;
    pipeline::TomAgent agent("tom", config);
    PolicyAgent folder(opp::archetype("conservative_folder"), 77);
    const auto result = run_variable_seeds(agent, folder, 25, 1234);
    std::string lines;
    for (const auto& record : result.records) {
      lines += record_to_line(record) + "\n";
    }
    return std::make_pair(lines, result.report.totals);
  };
  const auto [lines1, totals1] = run_once();
  const auto [lines2, totals2] = run_once();
  CHECK(lines1 == lines2);
  CHECK(totals1 == totals2);
}

TEST_CASE("position swap pairs identical deals and cancels symmetric play") {
  // A deterministic policy on both seats makes leg 2 the exact mirror of
  // leg 1, so the combined totals cancel.
  PolicyAgent a(opp::archetype("aggressive_raiser"), 5);
  PolicyAgent b(opp::archetype("aggressive_raiser"), 5);
  const int n = 30;
  const auto result = run_position_swap(a, b, n, 900);
  REQUIRE(result.records.size() == static_cast<size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    const auto& leg1 = result.records[static_cast<size_t>(i)];
    const auto& leg2 = result.records[static_cast<size_t>(n + i)];
    CHECK(leg1.seed == leg2.seed);
    CHECK(leg1.deal_hole0 == leg2.deal_hole0);
    CHECK(leg1.deal_hole1 == leg2.deal_hole1);
    CHECK(leg1.deal_public == leg2.deal_public);
  }
  // Same policy and same per-leg seeds on both sides: every chip won in one
  // leg is lost in the mirrored one.
  CHECK(result.report.totals[0] == 0);
  CHECK(result.report.totals[1] == 0);
}

TEST_CASE("trained cfr beats a pure caller over swapped positions") {
  const auto profile =
      std::make_shared<cfr::StrategyProfile>(cfr::train(20000, 0));
  PolicyAgent cfr_agent(cfr::make_cfr_policy(profile), 41);
  PolicyAgent caller(opp::archetype("always_caller"), 42);
  const auto result = run_position_swap(cfr_agent, caller, 50, 3000);
  CHECK(result.report.totals[0] > 0);
  CHECK(result.report.winner == "cfr");
}

TEST_CASE("action percentages reject empty input and count single games") {
  CHECK_THROWS_AS(action_percentages({}), std::invalid_argument);

  PolicyAgent a(opp::archetype("aggressive_raiser"), 1);
  PolicyAgent b(opp::archetype("conservative_folder"), 2);
  const auto result = run_variable_seeds(a, b, 1, 4);
  const auto shares = action_percentages(result.records);
  for (const auto& [name, row] : shares) {
    (void)name;
    CHECK(row[0] + row[1] + row[2] + row[3] == doctest::Approx(1.0));
  }
  CHECK(shares.at("aggressive_raiser")[static_cast<size_t>(F)] == 0.0);
}

TEST_CASE("replays round-trip exactly, including deliberations") {
  pipeline::AgentConfig config;
  config.order = pipeline::ToMOrder::First;
  pipeline::TomAgent agent("tom", config);
  PolicyAgent bluffer(opp::archetype("polar_bluffer"), 13);
  const auto result = run_variable_seeds(agent, bluffer, 12, 77);

  const std::string path = "replays_roundtrip.jsonl";
  write_replays(result.records, path);
  const auto loaded = read_replays(path);
  REQUIRE(loaded.size() == result.records.size());

  const std::string path2 = "replays_roundtrip2.jsonl";
  write_replays(loaded, path2);
  CHECK(slurp(path) == slurp(path2));

  // Records without deliberations (policy seats) stay valid.
  bool saw_plain_step = false;
  for (const auto& record : loaded) {
    for (const auto& step : record.steps) {
      if (step.seat == 1) {
        CHECK(step.deliberation == nullptr);
        saw_plain_step = true;
      }
    }
  }
  CHECK(saw_plain_step);
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("replay reader rejects bad versions and names bad lines") {
  PolicyAgent a(opp::archetype("always_caller"), 1);
  PolicyAgent b(opp::archetype("always_caller"), 2);
  const auto result = run_variable_seeds(a, b, 2, 5);
  const std::string path = "replays_bad.jsonl";

  {
    auto line = record_to_line(result.records[0]);
    nlohmann::json j = nlohmann::json::parse(line);
    j["schema_version"] = 99;
    std::ofstream out(path);
    out << j.dump() << "\n";
  }
  CHECK_THROWS_WITH_AS(read_replays(path), "line 1: unsupported schema_version",
                       ReplayError);

  {
    std::ofstream out(path);
    out << record_to_line(result.records[0]) << "\n";
    out << "{ this is not json\n";
  }
  try {
    read_replays(path);
    FAIL("expected ReplayError");
  } catch (const ReplayError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("redacted replays drop prompts but keep structure") {
  pipeline::AgentConfig config;
  config.order = pipeline::ToMOrder::First;
  config.backend = std::make_shared<llm::ScriptedBackend>();
  config.template_dir = LEDUCMIND_TEMPLATE_DIR;
  pipeline::TomAgent agent("tom", config);
  PolicyAgent caller(opp::archetype("always_caller"), 3);
  const auto result = run_variable_seeds(agent, caller, 4, 21);

  const std::string path = "replays_redacted.jsonl";
  write_replays(result.records, path, /*redact=*/true);
  const auto text = slurp(path);
  CHECK(text.find("raw_prompts") == std::string::npos);
  const auto loaded = read_replays(path);
  bool saw_deliberation = false;
  for (const auto& record : loaded) {
    for (const auto& step : record.steps) {
      if (step.deliberation) {
        saw_deliberation = true;
        CHECK(step.deliberation->raw_prompts.empty());
      }
    }
  }
  CHECK(saw_deliberation);
  std::remove(path.c_str());
}

TEST_CASE("reports land on disk with consistent totals and valid markup") {
  PolicyAgent a(opp::archetype("aggressive_raiser"), 6);
  PolicyAgent b(opp::archetype("conservative_folder"), 7);
  const auto result = run_variable_seeds(a, b, 20, 800);
  const std::string dir = "report_out";
  emit_report(result.report, dir);

  const auto summary = nlohmann::json::parse(slurp(dir + "/summary.json"));
  CHECK(summary["protocol"] == "seeds");

  // CSV column sums equal the reported totals.
  std::ifstream csv(dir + "/payoffs.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "game,aggressive_raiser,conservative_folder");
  int rows = 0;
  long sum_a = 0, sum_b = 0;
  std::string line;
  while (std::getline(csv, line)) {
    ++rows;
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
    sum_a += std::stol(line.substr(c1 + 1, c2 - c1 - 1));
    sum_b += std::stol(line.substr(c2 + 1));
  }
  CHECK(rows == 20);
  CHECK(sum_a == summary["totals"]["aggressive_raiser"].get<long>());
  CHECK(sum_b == summary["totals"]["conservative_folder"].get<long>());

  for (int i = 0; i < 2; ++i) {
    const auto svg = slurp(dir + "/actions_" + std::to_string(i) + ".svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(well_formed_markup(svg));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("hindsight plumbing across a persisted oracle match") {
  for (bool hindsight : {true, false}) {
    pipeline::AgentConfig config;
    config.order = pipeline::ToMOrder::Second;
    config.hindsight = hindsight;
    pipeline::TomAgent agent("tom", config);
    PolicyAgent folder(opp::archetype("conservative_folder"), 55);
    MatchOptions options;
    options.hindsight = hindsight;
    const auto result = run_variable_seeds(agent, folder, 15, 42, options);

    for (const auto& record : agent.dataset().games) {
      CHECK(record.hindsight == hindsight);
      CHECK(record.hindsight_opponent_card.has_value() == hindsight);
    }
    const std::string path = "replays_hindsight.jsonl";
    write_replays(result.records, path);
    for (const auto& record : read_replays(path)) {
      CHECK(record.hindsight == hindsight);
      CHECK_FALSE(record.hindsight_opponent_card.has_value());
    }
    std::remove(path.c_str());
  }
}
