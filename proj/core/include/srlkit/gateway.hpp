// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#pragma once

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace srlkit::gateway {

struct CompletionRequest {
  std::string prompt;
  std::string model;
  double temperature = 0.0;
  int max_tokens = 512;
  std::vector<std::string> stop;
};

// Stable content key over (model, prompt, temperature, max_tokens):
// length-prefixed canonical serialization hashed with FNV-1a 64, hex.
// Identical across runs and platforms.
std::string cache_key(const CompletionRequest& request);

struct CompletionRecord {
  std::string key;
  CompletionRequest request;
  std::string response_text;
  std::int64_t latency_ms = 0;
  std::string timestamp;  // ISO-8601 UTC, informational only
};

// One record per line: {"key":..., "request":{...}, "response":...,
// "latency_ms":..., "timestamp":...}
std::string record_to_jsonl_line(const CompletionRecord& record);
CompletionRecord record_from_jsonl_line(std::string_view line);

struct RetryPolicy {
  int max_attempts = 3;
  std::vector<int> backoff_ms = {250, 1000, 4000};
};

struct BackendConfig {
  enum class Kind { Http, Replay, Mock };
  Kind kind = Kind::Mock;
  std::string endpoint;      // http: full URL incl. path
  std::string model;
  std::string api_key_env = "SRL_API_KEY";
  std::string cache_path;    // replay source; recording sink when record=true
  bool record = false;
  int max_parallel = 4;
  int timeout_s = 120;
  RetryPolicy retry;
};

// Transport interface: prompt in, text out.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string complete(const CompletionRequest& request) = 0;
};

// Scripted backend for tests and offline runs. Lookup order: exact cache
// key, then substring rules, then the responder callback, then the default
// response; completely unscripted prompts raise TransportError.
class MockBackend : public Backend {
 public:
  void script(std::string key, std::string response);
  void script_contains(std::string needle, std::string response);
  void set_responder(std::function<std::string(const CompletionRequest&)> responder);
  void set_default_response(std::string response);

  std::string complete(const CompletionRequest& request) override;

 private:
  std::map<std::string, std::string> by_key_;
  std::vector<std::pair<std::string, std::string>> by_contains_;
  std::function<std::string(const CompletionRequest&)> responder_;
  std::string default_response_;
  bool has_default_ = false;
};

// Generic chat/completions HTTP client. The prompt is sent as a single user
// message when the endpoint path looks chat-shaped, as a raw prompt field
// otherwise. 429 surfaces as RateLimitedError, everything else unhealthy as
// TransportError.
class HttpBackend : public Backend {
 public:
  HttpBackend(std::string endpoint, std::string api_key_env, int timeout_s = 120);
  std::string complete(const CompletionRequest& request) override;

 private:
  std::string endpoint_;
  std::string api_key_env_;
  int timeout_s_;
};

// Front door used by the pipeline: bounded concurrency, read-through cache,
// retries, request accounting.
//
//   replay: answers only from the cache file; a missing key is CacheMissError.
//   http:   cache hit short-circuits; misses go to the network and are
//           appended to the cache when recording is on.
//   mock:   like http but against the injected/scripted backend.
class Gateway {
 public:
  explicit Gateway(BackendConfig config, std::shared_ptr<Backend> backend = nullptr);

  std::string complete(const CompletionRequest& request);

  struct Stats {
    std::uint64_t requests = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t backend_calls = 0;
    std::uint64_t retries = 0;
    int max_in_flight = 0;
  };
  Stats stats() const;

  // Hash of the cache file bytes at load time ("0" when no cache).
  const std::string& cache_hash() const { return cache_hash_; }
  const BackendConfig& config() const { return config_; }

 private:
  std::string call_with_retries(const CompletionRequest& request);

  BackendConfig config_;
  std::shared_ptr<Backend> backend_;
  std::map<std::string, std::string> cache_;
  std::string cache_hash_ = "0";

  mutable std::mutex mu_;
  Stats stats_;
  int in_flight_ = 0;
  std::condition_variable slot_available_;
};

}  // namespace srlkit::gateway
