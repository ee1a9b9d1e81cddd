#pragma once

#include <memory>
#include <string>

#include "leducmind/llm/backend.hpp"
#include "leducmind/llm/rate_limiter.hpp"

namespace leducmind::llm {

struct HttpBackendConfig {
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string api_key_env = "OPENAI_API_KEY";
  int max_attempts = 3;
  double backoff_initial_seconds = 0.5;
  double backoff_multiplier = 2.0;
  double rate_limit_per_minute = 60.0;
  double timeout_seconds = 120.0;
};

// Chat-completion-shaped HTTP client with retries, exponential backoff and a
// client-side rate cap. The bearer token is read from the configured
// environment variable at construction; a missing token fails before any
// network traffic.
class HttpBackend : public CompletionBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);
  CompletionResponse complete(const CompletionRequest& request) override;
  std::string name() const override { return "http"; }

  int last_attempts() const { return last_attempts_; }

 private:
  HttpBackendConfig config_;
  std::string api_key_;
  RateLimiter limiter_;
  int last_attempts_ = 0;
};

}  // namespace leducmind::llm
