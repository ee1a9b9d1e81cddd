#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace leducmind::llm {

struct CompletionRequest {
  std::string prompt;
  std::string model = "oracle-mock";
  double temperature = 0.0;
  int max_tokens = 2048;
  std::string request_id;
};

struct CompletionResponse {
  std::string text;
  int prompt_tokens = 0;
  int completion_tokens = 0;
  double latency_seconds = 0.0;
  std::string provider;
};

struct BackendError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual CompletionResponse complete(const CompletionRequest& request) = 0;
  virtual std::string name() const = 0;
};

// Cache key over everything that determines a deterministic completion.
std::string transcript_key(const CompletionRequest& request);

// Replays recorded completions keyed by transcript_key; unknown prompts are
// an error so fixture gaps surface immediately.
class TranscriptBackend : public CompletionBackend {
 public:
  explicit TranscriptBackend(const std::string& path);
  CompletionResponse complete(const CompletionRequest& request) override;
  std::string name() const override { return "transcript"; }

 private:
  std::map<std::string, std::string> responses_;
};

// Tees an inner backend's completions into a transcript file.
class RecordingBackend : public CompletionBackend {
 public:
  RecordingBackend(std::shared_ptr<CompletionBackend> inner, std::string path);
  CompletionResponse complete(const CompletionRequest& request) override;
  std::string name() const override { return inner_->name() + "+recorder"; }

 private:
  std::shared_ptr<CompletionBackend> inner_;
  std::string path_;
};

// Offline stand-in for a live model: answers every pipeline prompt with
// canonical, parseable text derived deterministically from the prompt.
class ScriptedBackend : public CompletionBackend {
 public:
  CompletionResponse complete(const CompletionRequest& request) override;
  std::string name() const override { return "scripted"; }
};

// Always returns unparseable text; exercises retry/fallback paths.
class MalformedBackend : public CompletionBackend {
 public:
  CompletionResponse complete(const CompletionRequest& request) override;
  std::string name() const override { return "malformed"; }
  int calls = 0;
};

}  // namespace leducmind::llm
