// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

// Eigen (via experiment.hpp) must precede httplib: <resolv.h> defines _res.
#include "reasonsat/experiment.hpp"
#include "reasonsat/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace reasonsat {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint '" + url + "' lacks a scheme");
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError("endpoint scheme must be http or https, got '" + scheme + "'");
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") throw ConfigError("this build has no TLS support; use an http endpoint");
#endif
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

bool retryable(int status) { return status == 408 || status == 429 || status >= 500; }

}  // namespace

LlmReply llm_complete(const LlmConfig& config, const std::string& prompt, std::uint64_t jitter_seed) {
  const Endpoint ep = split_url(config.endpoint);
  httplib::Client client(ep.origin);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(config.timeout_s));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  if (const char* key = std::getenv(config.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  nlohmann::ordered_json body;
  body["model"] = config.model;
  body["messages"] = nlohmann::ordered_json::array({{{"role", "user"}, {"content", prompt}}});
  if (config.temperature) body["temperature"] = *config.temperature;
  if (config.top_p) body["top_p"] = *config.top_p;
  if (config.max_tokens) body["max_tokens"] = *config.max_tokens;
  const std::string payload = body.dump();

  Rng jitter(jitter_seed);
  std::string last_error;
  const std::size_t max_attempts = config.max_retries + 1;
  for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
    double retry_after = 0.0;
    auto res = client.Post(ep.path, headers, payload, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
    } else if (res->status == 200) {
      try {
        const auto j = nlohmann::json::parse(res->body);
        LlmReply reply;
        reply.content = j.at("choices").at(0).at("message").at("content").get<std::string>();
        reply.attempts = attempt;
        if (j.contains("model") && j["model"].is_string()) reply.response_model = j["model"].get<std::string>();
        return reply;
      } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("malformed completion body: ") + e.what(), attempt);
      }
    } else {
      last_error = "HTTP " + std::to_string(res->status);
      if (!retryable(res->status)) throw TransportError(last_error + " (not retryable)", attempt);
      if (res->has_header("Retry-After")) {
        retry_after = std::atof(res->get_header_value("Retry-After").c_str());
      }
    }
    if (attempt == max_attempts) break;
    const double base = std::min(config.backoff_max_s,
                                 config.backoff_initial_s * std::pow(2.0, static_cast<double>(attempt - 1)));
    const double wait = std::max(retry_after, base * (0.5 + 0.5 * jitter.unit()));
    std::this_thread::sleep_for(std::chrono::duration<double>(wait));
  }
  throw TransportError(last_error + " after " + std::to_string(max_attempts) + " attempts", max_attempts);
}

}  // namespace reasonsat
