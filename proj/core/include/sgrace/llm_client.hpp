#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "sgrace/config.hpp"
#include "sgrace/keywords.hpp"

namespace sgrace {

// Minimal chat-completion client surface so tests can substitute a stub.
class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

struct RetryPolicy {
  int max_attempts = 4;
  std::chrono::milliseconds initial_delay{250};
  double backoff_factor = 2.0;
};

// Talks to an OpenAI-style /v1/chat/completions endpoint. Credential comes
// from the environment variable named in the endpoint descriptor. Transient
// failures (connect errors, 429, 5xx) are retried with exponential backoff.
// Never invoked in CI; the offline pools cover every experiment.
class HttpLlmClient final : public LlmClient {
 public:
  HttpLlmClient(LlmEndpoint endpoint, RetryPolicy retry = {});
  ~HttpLlmClient() override;

  std::string complete(const std::string& prompt) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Renders the two keyword prompts, queries the client, parses and validates.
// Truncates over-long responses to n/m entries; fewer than n (or m) parsed
// entries is a malformed-response error.
KeywordPool fetch_pool_llm(LlmClient& client, const std::string& concept_name, int n, int m);

}  // namespace sgrace
