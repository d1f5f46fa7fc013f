// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#include "srlkit/gateway.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "srlkit/errors.hpp"
#include "srlkit/hashing.hpp"

namespace srlkit::gateway {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string canonical_request(const CompletionRequest& r) {
  auto field = [](std::string_view name, std::string_view value) {
    return std::string(name) + ":" + std::to_string(value.size()) + ":" +
           std::string(value) + ";";
  };
  return field("model", r.model) + field("prompt", r.prompt) +
         field("temperature", canonical_double(r.temperature)) +
         field("max_tokens", std::to_string(r.max_tokens));
}

std::string now_utc_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct ParsedUrl {
  std::string scheme_host;  // e.g. "http://localhost:8080"
  std::string path;         // "/v1/chat/completions"
};

ParsedUrl split_url(const std::string& endpoint) {
  const std::size_t scheme = endpoint.find("://");
  if (scheme == std::string::npos)
    throw ConfigError("endpoint must be a full URL: " + endpoint);
  const std::size_t path = endpoint.find('/', scheme + 3);
  if (path == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, path), endpoint.substr(path)};
}

}  // namespace

std::string cache_key(const CompletionRequest& request) {
  return content_hash(canonical_request(request));
}

std::string record_to_jsonl_line(const CompletionRecord& record) {
  ordered_json req;
  req["model"] = record.request.model;
  req["prompt"] = record.request.prompt;
  req["temperature"] = record.request.temperature;
  req["max_tokens"] = record.request.max_tokens;
  if (!record.request.stop.empty()) req["stop"] = record.request.stop;

  ordered_json j;
  j["key"] = record.key;
  j["request"] = std::move(req);
  j["response"] = record.response_text;
  j["latency_ms"] = record.latency_ms;
  j["timestamp"] = record.timestamp;
  return j.dump();
}

CompletionRecord record_from_jsonl_line(std::string_view line) {
  const ordered_json j = ordered_json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("key") ||
      !j.contains("response"))
    throw Error("malformed cache record: " + std::string(line.substr(0, 80)));
  CompletionRecord rec;
  rec.key = j["key"].get<std::string>();
  rec.response_text = j["response"].get<std::string>();
  if (j.contains("request") && j["request"].is_object()) {
    const auto& req = j["request"];
    rec.request.model = req.value("model", "");
    rec.request.prompt = req.value("prompt", "");
    rec.request.temperature = req.value("temperature", 0.0);
    rec.request.max_tokens = req.value("max_tokens", 512);
    if (req.contains("stop"))
      rec.request.stop = req["stop"].get<std::vector<std::string>>();
  }
  rec.latency_ms = j.value("latency_ms", std::int64_t{0});
  rec.timestamp = j.value("timestamp", "");
  return rec;
}

void MockBackend::script(std::string key, std::string response) {
  by_key_[std::move(key)] = std::move(response);
}

void MockBackend::script_contains(std::string needle, std::string response) {
  by_contains_.emplace_back(std::move(needle), std::move(response));
}

void MockBackend::set_responder(
    std::function<std::string(const CompletionRequest&)> responder) {
  responder_ = std::move(responder);
}

void MockBackend::set_default_response(std::string response) {
  default_response_ = std::move(response);
  has_default_ = true;
}

std::string MockBackend::complete(const CompletionRequest& request) {
  if (const auto it = by_key_.find(cache_key(request)); it != by_key_.end())
    return it->second;
  for (const auto& [needle, response] : by_contains_)
    if (request.prompt.find(needle) != std::string::npos) return response;
  if (responder_) return responder_(request);
  if (has_default_) return default_response_;
  throw TransportError("mock backend: no script for prompt");
}

HttpBackend::HttpBackend(std::string endpoint, std::string api_key_env,
                         int timeout_s)
    : endpoint_(std::move(endpoint)),
      api_key_env_(std::move(api_key_env)),
      timeout_s_(timeout_s) {}

std::string HttpBackend::complete(const CompletionRequest& request) {
  const ParsedUrl url = split_url(endpoint_);
  const bool chat_shape = url.path.find("chat") != std::string::npos;

  ordered_json body;
  body["model"] = request.model;
  if (chat_shape) {
    body["messages"] =
        ordered_json::array({ordered_json{{"role", "user"}, {"content", request.prompt}}});
  } else {
    body["prompt"] = request.prompt;
  }
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_tokens;
  if (!request.stop.empty()) body["stop"] = request.stop;

  httplib::Client client(url.scheme_host);
  client.set_connection_timeout(timeout_s_, 0);
  client.set_read_timeout(timeout_s_, 0);

  httplib::Headers headers;
  if (!api_key_env_.empty()) {
    if (const char* key = std::getenv(api_key_env_.c_str()); key && *key)
      headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  const auto res = client.Post(url.path, headers, body.dump(), "application/json");
  if (!res)
    throw TransportError("no response from " + endpoint_ + ": " +
                         httplib::to_string(res.error()));
  if (res->status == 429)
    throw RateLimitedError("429 from " + endpoint_);
  if (res->status < 200 || res->status >= 300)
    throw TransportError("HTTP " + std::to_string(res->status) + " from " +
                         endpoint_ + ": " + res->body.substr(0, 200));

  const json reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded())
    throw TransportError("unparseable response body from " + endpoint_);
  try {
    const auto& choices = reply.at("choices");
    if (choices.empty()) throw TransportError("empty choices from " + endpoint_);
    const auto& first = choices.at(0);
    if (first.contains("message"))
      return first.at("message").at("content").get<std::string>();
    return first.at("text").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("unexpected response shape: ") + e.what());
  }
}

Gateway::Gateway(BackendConfig config, std::shared_ptr<Backend> backend)
    : config_(std::move(config)), backend_(std::move(backend)) {
  if (config_.max_parallel < 1) config_.max_parallel = 1;

  if (!config_.cache_path.empty()) {
    std::ifstream in(config_.cache_path, std::ios::binary);
    if (in) {
      std::string contents((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
      cache_hash_ = content_hash(contents);
      std::size_t pos = 0;
      while (pos < contents.size()) {
        std::size_t nl = contents.find('\n', pos);
        if (nl == std::string::npos) nl = contents.size();
        const std::string_view line(contents.data() + pos, nl - pos);
        if (!line.empty() && line.find_first_not_of(" \t\r") != std::string_view::npos) {
          const CompletionRecord rec = record_from_jsonl_line(line);
          cache_[rec.key] = rec.response_text;
        }
        pos = nl + 1;
      }
    } else if (config_.kind == BackendConfig::Kind::Replay) {
      throw ConfigError("replay backend: cannot open cache " + config_.cache_path);
    }
  } else if (config_.kind == BackendConfig::Kind::Replay) {
    throw ConfigError("replay backend requires a cache path");
  }

  if (config_.kind == BackendConfig::Kind::Http && !backend_) {
    if (config_.endpoint.empty())
      throw ConfigError("http backend requires an endpoint");
    backend_ = std::make_shared<HttpBackend>(config_.endpoint, config_.api_key_env,
                                             config_.timeout_s);
  }
  if (config_.kind == BackendConfig::Kind::Mock && !backend_)
    backend_ = std::make_shared<MockBackend>();
}

std::string Gateway::call_with_retries(const CompletionRequest& request) {
  const int attempts = std::max(config_.retry.max_attempts, 1);
  for (int attempt = 0;; ++attempt) {
    try {
      return backend_->complete(request);
    } catch (const RateLimitedError&) {
      if (attempt + 1 >= attempts) throw;
    } catch (const TransportError&) {
      if (attempt + 1 >= attempts) throw;
    }
    {
      std::lock_guard lock(mu_);
      ++stats_.retries;
    }
    const auto& schedule = config_.retry.backoff_ms;
    const int delay =
        schedule.empty()
            ? 0
            : schedule[std::min<std::size_t>(attempt, schedule.size() - 1)];
    if (delay > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay));
  }
}

std::string Gateway::complete(const CompletionRequest& request) {
  if (request.prompt.empty()) throw Error("completion request with empty prompt");
  if (request.temperature < 0.0 || request.temperature > 2.0)
    throw Error("temperature out of range [0, 2]");

  const std::string key = cache_key(request);

  std::unique_lock lock(mu_);
  ++stats_.requests;
  slot_available_.wait(lock, [&] { return in_flight_ < config_.max_parallel; });
  ++in_flight_;
  stats_.max_in_flight = std::max(stats_.max_in_flight, in_flight_);

  auto release = [&] {
    --in_flight_;
    slot_available_.notify_one();
  };

  if (const auto it = cache_.find(key); it != cache_.end()) {
    ++stats_.cache_hits;
    const std::string response = it->second;
    release();
    return response;
  }
  if (config_.kind == BackendConfig::Kind::Replay) {
    release();
    lock.unlock();
    throw CacheMissError(key);
  }

  ++stats_.backend_calls;
  lock.unlock();

  const auto started = std::chrono::steady_clock::now();
  std::string response;
  try {
    response = call_with_retries(request);
  } catch (...) {
    std::lock_guard relock(mu_);
    release();
    throw;
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();

  lock.lock();
  // Exactly one record per key even under races or retries.
  if (!cache_.contains(key)) {
    cache_[key] = response;
    if (config_.record && !config_.cache_path.empty()) {
      CompletionRecord rec{key, request, response, elapsed, now_utc_iso8601()};
      std::ofstream out(config_.cache_path, std::ios::app | std::ios::binary);
      if (!out) {
        release();
        throw Error("cannot append to cache " + config_.cache_path);
      }
      out << record_to_jsonl_line(rec) << "\n";
    }
  }
  release();
  return response;
}

Gateway::Stats Gateway::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

}  // namespace srlkit::gateway
