#include "leducmind/llm/backend.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "leducmind/game/cards.hpp"
#include "leducmind/llm/parser.hpp"
#include "leducmind/llm/sha256.hpp"

namespace leducmind::llm {

using nlohmann::json;

std::string transcript_key(const CompletionRequest& request) {
  std::ostringstream material;
  material.precision(12);
  material << request.model << '\x1f' << request.temperature << '\x1f'
           << request.prompt;
  return sha256_hex(material.str());
}

TranscriptBackend::TranscriptBackend(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open transcript file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw BackendError("malformed transcript line " + std::to_string(line_no) +
                         ": " + e.what());
    }
    responses_[record.at("key_hash").get<std::string>()] =
        record.at("response_text").get<std::string>();
  }
}

CompletionResponse TranscriptBackend::complete(const CompletionRequest& request) {
  if (request.prompt.empty()) throw BackendError("empty prompt");
  const auto key = transcript_key(request);
  const auto it = responses_.find(key);
  if (it == responses_.end()) {
    throw BackendError("no recorded completion for prompt (key " + key + ")");
  }
  CompletionResponse response;
  response.text = it->second;
  response.provider = "transcript";
  return response;
}

RecordingBackend::RecordingBackend(std::shared_ptr<CompletionBackend> inner,
                                   std::string path)
    : inner_(std::move(inner)), path_(std::move(path)) {}

CompletionResponse RecordingBackend::complete(const CompletionRequest& request) {
  auto response = inner_->complete(request);
  json record;
  record["key_hash"] = transcript_key(request);
  record["prompt_sha256"] = sha256_hex(request.prompt);
  record["response_text"] = response.text;
  std::ofstream file(path_, std::ios::app);
  if (!file) throw BackendError("cannot append to transcript file: " + path_);
  file << record.dump() << '\n';
  return response;
}

namespace {

uint64_t stable_hash(const std::string& text) {
  // FNV-1a; only used to pick deterministic pseudo-content.
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<game::PlayerAction> actions_from_prompt(const std::string& prompt) {
  std::vector<game::PlayerAction> out;
  const auto pos = prompt.find("Valid actions:");
  if (pos == std::string::npos) return out;
  const auto end = prompt.find('\n', pos);
  const std::string line = prompt.substr(pos, end - pos);
  for (auto action : game::all_actions()) {
    if (line.find(game::action_name(action)) != std::string::npos) {
      out.push_back(action);
    }
  }
  return out;
}

std::string scripted_pattern_text(uint64_t h) {
  const int a = 40 + static_cast<int>(h % 31);       // 40..70
  const int b = 100 - a;
  std::ostringstream out;
  out << "Opponent's Pattern:\n"
      << "1st Round:\n"
      << "When the opponent holds a King, facing a bet, he tends to raise (" << a
      << "%) or call (" << b << "%).\n"
      << "When the opponent holds a Queen, facing a bet, he tends to call (" << a
      << "%) or raise (" << b << "%).\n"
      << "When the opponent holds a Jack, facing a bet, he tends to fold (" << a
      << "%) or call (" << b << "%).\n"
      << "Reflexion:\n"
      << "Earlier games were lost by paying off stronger hands; apply pressure "
         "when the opponent shows weakness and release when raised.\n";
  return out.str();
}

std::string scripted_belief_text(uint64_t h) {
  const int j = 10 + static_cast<int>(h % 41);
  const int q = 10 + static_cast<int>((h >> 8) % 41);
  const int k = 100 - j - q >= 0 ? 100 - j - q : 0;
  std::ostringstream out;
  out << "Belief:\n"
      << "He might be holding a Jack (probability " << j
      << "%), a Queen (probability " << q << "%), or a King (probability " << k
      << "%).\n";
  return out.str();
}

std::string scripted_deliberation_text(const std::string& prompt, uint64_t h) {
  auto actions = actions_from_prompt(prompt);
  if (actions.empty()) {
    actions = {game::PlayerAction::Check, game::PlayerAction::Raise};
  }
  const auto chosen = actions[h % actions.size()];
  ParsedDeliberation d;
  const auto belief = extract_belief(scripted_belief_text(h));
  d.belief = belief.belief;
  d.has_belief = true;
  double offset = 0.0;
  for (auto action : actions) {
    // Chosen action carries the top gain so the stated selection is also the
    // argmax of the stated gains.
    offset += 0.25;
    d.plan_gains[action] =
        action == chosen ? 2.0 : -1.0 - offset;
  }
  d.selection = chosen;
  return serialize_deliberation(d);
}

}  // namespace

CompletionResponse ScriptedBackend::complete(const CompletionRequest& request) {
  const uint64_t h = stable_hash(request.prompt);
  CompletionResponse response;
  response.provider = "scripted";
  if (request.prompt.find("Make Reasonable Plans") != std::string::npos ||
      request.prompt.find("Valid actions:") != std::string::npos) {
    response.text = scripted_deliberation_text(request.prompt, h);
  } else if (request.prompt.find("probabilities about the cards") !=
             std::string::npos) {
    response.text = scripted_belief_text(h);
  } else {
    response.text = scripted_pattern_text(h);
  }
  return response;
}

CompletionResponse MalformedBackend::complete(const CompletionRequest&) {
  ++calls;
  CompletionResponse response;
  response.text = "mumble mumble nothing of structure here";
  response.provider = "malformed";
  return response;
}

}  // namespace leducmind::llm
