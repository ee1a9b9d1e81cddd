#include "leducmind/llm/http_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace leducmind::llm {

using nlohmann::json;

HttpBackend::HttpBackend(HttpBackendConfig config)
    : config_(std::move(config)), limiter_(config_.rate_limit_per_minute) {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw ConfigError("environment variable " + config_.api_key_env +
                      " is not set");
  }
  api_key_ = key;
}

CompletionResponse HttpBackend::complete(const CompletionRequest& request) {
  if (request.prompt.empty()) throw BackendError("empty prompt");
  if (request.temperature < 0) throw BackendError("negative temperature");
  json body;
  body["model"] = request.model;
  body["messages"] = json::array({json{{"role", "user"}, {"content", request.prompt}}});
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_tokens;
  const std::string payload = body.dump();

  httplib::Client client(config_.base_url);
  client.set_connection_timeout(std::chrono::duration<double>(config_.timeout_seconds));
  client.set_read_timeout(std::chrono::duration<double>(config_.timeout_seconds));
  client.set_bearer_token_auth(api_key_);

  double backoff = config_.backoff_initial_seconds;
  std::string failure;
  last_attempts_ = 0;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    limiter_.acquire();
    last_attempts_ = attempt;
    const auto start = std::chrono::steady_clock::now();
    auto result = client.Post(config_.path, payload, "application/json");
    const double latency =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();

    if (!result) {
      failure = "connection error: " + httplib::to_string(result.error());
    } else if (result->status == 200) {
      json parsed;
      try {
        parsed = json::parse(result->body);
        CompletionResponse response;
        response.text =
            parsed.at("choices").at(0).at("message").at("content").get<std::string>();
        if (parsed.contains("usage")) {
          response.prompt_tokens = parsed["usage"].value("prompt_tokens", 0);
          response.completion_tokens = parsed["usage"].value("completion_tokens", 0);
        }
        response.latency_seconds = latency;
        response.provider = parsed.value("model", std::string("unknown"));
        if (response.text.empty()) {
          throw BackendError("provider returned an empty completion");
        }
        return response;
      } catch (const json::exception& e) {
        throw BackendError(std::string("malformed provider payload: ") + e.what());
      }
    } else if (result->status == 401 || result->status == 403) {
      throw BackendError("authentication failed (HTTP " +
                         std::to_string(result->status) + ")");
    } else if (result->status == 429 || result->status >= 500) {
      failure = "HTTP " + std::to_string(result->status);
    } else {
      throw BackendError("provider error HTTP " + std::to_string(result->status) +
                         ": " + result->body);
    }

    if (attempt < config_.max_attempts) {
      std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
      backoff *= config_.backoff_multiplier;
    }
  }
  throw BackendError("request failed after " +
                     std::to_string(config_.max_attempts) +
                     " attempts; last error: " + failure);
}

}  // namespace leducmind::llm
