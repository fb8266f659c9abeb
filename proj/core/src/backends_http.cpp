// OpenAI-compatible wire protocol: POST {base_url}/chat/completions and
// {base_url}/embeddings with JSON bodies. Kept in its own TU so only this
// file pays for the httplib include.

#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "nl2gql/backends.hpp"
#include "nl2gql/errors.hpp"

namespace nl2gql::backends {

using nlohmann::json;

namespace {

struct UrlParts {
  std::string host;  // scheme://authority
  std::string path_prefix;
};

UrlParts split_url(const std::string& base_url) {
  auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("backend URL must include scheme: " + base_url);
  auto path_start = base_url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {base_url, ""};
  std::string prefix = base_url.substr(path_start);
  if (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {base_url.substr(0, path_start), prefix};
}

json post_json(const std::string& base_url, const std::string& api_key,
               const std::string& endpoint, const json& body) {
  auto parts = split_url(base_url);
  httplib::Client client(parts.host);
  client.set_read_timeout(120, 0);
  httplib::Headers headers;
  if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);
  auto res = client.Post(parts.path_prefix + endpoint, headers, body.dump(),
                         "application/json");
  if (!res) throw TransportError("no response from " + base_url + endpoint);
  if (res->status == 429)
    throw RateLimited("HTTP 429 from " + base_url + endpoint);
  if (res->status < 200 || res->status >= 300)
    throw TransportError("HTTP " + std::to_string(res->status) + " from " + base_url +
                         endpoint + ": " + res->body);
  try {
    return json::parse(res->body);
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed response body: ") + e.what());
  }
}

template <typename Fn>
auto retrying(const RetryPolicy& retry, Fn&& fn) {
  double delay = retry.initial_delay_s;
  double spent = 0;
  for (int attempt = 1;; ++attempt) {
    try {
      return fn();
    } catch (const RateLimited&) {
      if (attempt >= retry.max_attempts || spent + delay > retry.max_total_delay_s) throw;
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
      spent += delay;
      delay = std::min(delay * 2, retry.max_total_delay_s - spent);
      if (delay <= 0) delay = 0.001;
    }
  }
}

}  // namespace

ChatResponse HttpChatBackend::chat(const ChatRequest& request) {
  json body;
  body["model"] = request.model_name;
  body["temperature"] = request.temperature;
  body["top_p"] = request.top_p;
  body["messages"] = json::array();
  for (const auto& m : request.messages)
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});

  return retrying(retry_, [&] {
    json j = post_json(base_url_, api_key_, "/chat/completions", body);
    ChatResponse resp;
    try {
      const auto& choice = j.at("choices").at(0);
      resp.content = choice.at("message").at("content").get<std::string>();
      resp.finish_reason = choice.value("finish_reason", "stop");
      if (j.contains("usage")) {
        TokenUsage usage;
        usage.prompt_tokens = j["usage"].value("prompt_tokens", std::int64_t{0});
        usage.completion_tokens = j["usage"].value("completion_tokens", std::int64_t{0});
        resp.usage = usage;
      }
    } catch (const json::exception& e) {
      throw TransportError(std::string("unexpected chat response shape: ") + e.what());
    }
    return resp;
  });
}

std::vector<EmbeddingVector> HttpEmbedBackend::embed(const std::vector<std::string>& texts) {
  if (texts.empty()) throw EmptyInput("embed: no texts");
  json body;
  body["model"] = model_;
  body["input"] = texts;

  return retrying(retry_, [&] {
    json j = post_json(base_url_, api_key_, "/embeddings", body);
    std::vector<EmbeddingVector> out;
    try {
      for (const auto& item : j.at("data")) {
        EmbeddingVector v;
        for (const auto& x : item.at("embedding")) v.values.push_back(x.get<double>());
        out.push_back(std::move(v));
      }
    } catch (const json::exception& e) {
      throw TransportError(std::string("unexpected embeddings response shape: ") + e.what());
    }
    if (out.size() != texts.size())
      throw TransportError("embeddings response count mismatch");
    return out;
  });
}

}  // namespace nl2gql::backends
