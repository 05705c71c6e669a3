#include "sgrace/llm_client.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace sgrace {

using nlohmann::json;

struct HttpLlmClient::Impl {
  LlmEndpoint endpoint;
  RetryPolicy retry;
  std::string credential;
};

HttpLlmClient::HttpLlmClient(LlmEndpoint endpoint, RetryPolicy retry)
    : impl_(std::make_unique<Impl>()) {
  impl_->endpoint = std::move(endpoint);
  impl_->retry = retry;
  if (const char* cred = std::getenv(impl_->endpoint.credential_env.c_str())) {
    impl_->credential = cred;
  }
}

HttpLlmClient::~HttpLlmClient() = default;

std::string HttpLlmClient::complete(const std::string& prompt) {
  json body;
  body["model"] = impl_->endpoint.model;
  body["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});

  httplib::Client cli(impl_->endpoint.base_url);
  cli.set_connection_timeout(10);
  cli.set_read_timeout(60);
  httplib::Headers headers;
  if (!impl_->credential.empty()) {
    headers.emplace("Authorization", "Bearer " + impl_->credential);
  }

  auto delay = impl_->retry.initial_delay;
  std::string last_error;
  for (int attempt = 1; attempt <= impl_->retry.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(delay);
      delay = std::chrono::milliseconds(
          static_cast<long long>(delay.count() * impl_->retry.backoff_factor));
    }
    auto res = cli.Post("/v1/chat/completions", headers, body.dump(), "application/json");
    if (!res) {
      last_error = "connection error: " + httplib::to_string(res.error());
      continue;  // transient
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;  // transient
    }
    if (res->status != 200) {
      throw Error("llm: HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    try {
      json reply = json::parse(res->body);
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw Error(std::string("llm: unexpected response shape: ") + e.what());
    }
  }
  throw Error("llm: request failed after " + std::to_string(impl_->retry.max_attempts) +
              " attempts (" + last_error + ")");
}

KeywordPool fetch_pool_llm(LlmClient& client, const std::string& concept_name, int n, int m) {
  auto [relevant_prompt, unrelated_prompt] = render_llm_prompts(concept_name, n, m);

  auto relevant = parse_keyword_response(client.complete(relevant_prompt));
  if (static_cast<int>(relevant.size()) < n) {
    throw Error("llm: malformed response: " + std::to_string(relevant.size()) +
                " relevant keywords parsed, requested " + std::to_string(n));
  }
  relevant.resize(static_cast<size_t>(n));

  auto unrelated = parse_keyword_response(client.complete(unrelated_prompt));
  if (static_cast<int>(unrelated.size()) < m) {
    throw Error("llm: malformed response: " + std::to_string(unrelated.size()) +
                " unrelated keywords parsed, requested " + std::to_string(m));
  }
  unrelated.resize(static_cast<size_t>(m));

  KeywordPool pool;
  pool.concept_name = concept_name;
  pool.relevant = std::move(relevant);
  pool.unrelated = std::move(unrelated);
  pool.provenance = PoolProvenance::llm;
  validate_pool(pool, n, m);
  return pool;
}

}  // namespace sgrace
