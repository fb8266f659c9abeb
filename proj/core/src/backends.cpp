#include "nl2gql/backends.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nl2gql/errors.hpp"

namespace nl2gql::backends {

using nlohmann::json;

namespace {

// FNV-1a 64-bit over the canonical JSON encoding.
std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string chat_request_key(const ChatRequest& request) {
  json j;
  j["kind"] = "chat";
  j["model"] = request.model_name;
  j["temperature"] = request.temperature;
  j["top_p"] = request.top_p;
  j["messages"] = json::array();
  for (const auto& m : request.messages)
    j["messages"].push_back({{"role", m.role}, {"content", m.content}});
  // nlohmann objects iterate in sorted key order, so dump() is canonical.
  return fnv1a_hex(j.dump());
}

std::string embed_request_key(const std::string& model_name, const std::string& text) {
  json j;
  j["kind"] = "embedding";
  j["model"] = model_name;
  j["input"] = text;
  return fnv1a_hex(j.dump());
}

// --- ReplayBackend ---

ReplayBackend::ReplayBackend(const std::string& fixture_path, std::string embed_model)
    : embed_model_(std::move(embed_model)) {
  std::ifstream in(fixture_path);
  if (!in) throw ConfigError("cannot open fixture file: " + fixture_path);
  std::stringstream ss;
  ss << in.rdbuf();
  load(ss.str());
}

ReplayBackend ReplayBackend::from_text(const std::string& fixture_text,
                                       std::string embed_model) {
  ReplayBackend b;
  b.embed_model_ = std::move(embed_model);
  b.load(fixture_text);
  return b;
}

void ReplayBackend::load(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> dim;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw FixtureError("fixture line " + std::to_string(lineno) + ": " + e.what());
    }
    std::string key = j.at("request_key").get<std::string>();
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "chat") {
      ChatResponse resp;
      resp.content = j.at("response").at("content").get<std::string>();
      resp.finish_reason = j["response"].value("finish_reason", "stop");
      if (!chat_.emplace(key, std::move(resp)).second)
        throw FixtureError("duplicate chat fixture key " + key);
    } else if (kind == "embedding") {
      EmbeddingVector v;
      for (const auto& x : j.at("response").at("values")) v.values.push_back(x.get<double>());
      if (dim && *dim != v.dim())
        throw FixtureError("mixed embedding dims in fixture (line " +
                           std::to_string(lineno) + ")");
      dim = v.dim();
      if (!embeddings_.emplace(key, std::move(v)).second)
        throw FixtureError("duplicate embedding fixture key " + key);
    } else {
      throw FixtureError("fixture line " + std::to_string(lineno) + ": unknown kind " + kind);
    }
  }
}

ChatResponse ReplayBackend::chat(const ChatRequest& request) {
  auto key = chat_request_key(request);
  auto it = chat_.find(key);
  if (it == chat_.end()) throw FixtureMiss(key);
  return it->second;
}

std::vector<EmbeddingVector> ReplayBackend::embed(const std::vector<std::string>& texts) {
  if (texts.empty()) throw EmptyInput("embed: no texts");
  std::vector<EmbeddingVector> out;
  for (const auto& t : texts) {
    if (trim(t).empty()) throw EmptyInput("embed: empty text");
    auto key = embed_request_key(embed_model_, t);
    auto it = embeddings_.find(key);
    if (it == embeddings_.end()) throw FixtureMiss(key);
    out.push_back(it->second);
  }
  return out;
}

// --- Recording ---

namespace {
void append_fixture_line(const std::string& path, const json& record) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw ConfigError("cannot append to fixture file: " + path);
  out << record.dump() << "\n";
}
}  // namespace

RecordingChatBackend::RecordingChatBackend(std::shared_ptr<ChatBackend> inner,
                                           std::string fixture_path)
    : inner_(std::move(inner)), fixture_path_(std::move(fixture_path)) {}

ChatResponse RecordingChatBackend::chat(const ChatRequest& request) {
  auto key = chat_request_key(request);
  {
    std::lock_guard lock(mu_);
    auto it = recorded_.find(key);
    if (it != recorded_.end()) return it->second;
  }
  auto resp = inner_->chat(request);
  std::lock_guard lock(mu_);
  if (recorded_.emplace(key, resp).second) {
    append_fixture_line(fixture_path_,
                        {{"request_key", key},
                         {"kind", "chat"},
                         {"response",
                          {{"content", resp.content}, {"finish_reason", resp.finish_reason}}}});
  }
  return resp;
}

RecordingEmbedBackend::RecordingEmbedBackend(std::shared_ptr<EmbedBackend> inner,
                                             std::string fixture_path)
    : inner_(std::move(inner)), fixture_path_(std::move(fixture_path)) {}

std::vector<EmbeddingVector> RecordingEmbedBackend::embed(
    const std::vector<std::string>& texts) {
  auto vectors = inner_->embed(texts);
  std::lock_guard lock(mu_);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    auto key = embed_request_key(inner_->model_name(), texts[i]);
    if (recorded_.emplace(key, vectors[i]).second) {
      append_fixture_line(fixture_path_, {{"request_key", key},
                                          {"kind", "embedding"},
                                          {"response", {{"values", vectors[i].values}}}});
    }
  }
  return vectors;
}

// --- HTTP (request logic lives in backends_http.cpp) ---

HttpChatBackend::HttpChatBackend(std::string base_url, std::string api_key, RetryPolicy retry)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)), retry_(retry) {}

HttpEmbedBackend::HttpEmbedBackend(std::string base_url, std::string api_key,
                                   std::string model, RetryPolicy retry)
    : base_url_(std::move(base_url)),
      api_key_(std::move(api_key)),
      model_(std::move(model)),
      retry_(retry) {}

// Defined in backends_http.cpp to keep the httplib include isolated.

// --- HashEmbedBackend ---

HashEmbedBackend::HashEmbedBackend(std::size_t dim, int ngram) : dim_(dim), ngram_(ngram) {
  if (dim_ == 0 || ngram_ < 1) throw ConfigError("hash embedder needs dim >= 1, ngram >= 1");
}

std::string HashEmbedBackend::model_name() const {
  return "hash-ngram-" + std::to_string(ngram_) + "-" + std::to_string(dim_);
}

std::vector<EmbeddingVector> HashEmbedBackend::embed(const std::vector<std::string>& texts) {
  if (texts.empty()) throw EmptyInput("embed: no texts");
  std::vector<EmbeddingVector> out;
  for (const auto& raw : texts) {
    if (trim(raw).empty()) throw EmptyInput("embed: empty text");
    std::string text;
    for (char c : raw) text += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    EmbeddingVector v;
    v.values.assign(dim_, 0.0);
    std::string padded = " " + text + " ";
    for (std::size_t i = 0; i + static_cast<std::size_t>(ngram_) <= padded.size(); ++i) {
      auto gram = padded.substr(i, ngram_);
      std::uint64_t h = 1469598103934665603ull;
      for (unsigned char c : gram) {
        h ^= c;
        h *= 1099511628211ull;
      }
      v.values[h % dim_] += 1.0;
    }
    double norm = 0;
    for (double x : v.values) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0)
      for (double& x : v.values) x /= norm;
    out.push_back(std::move(v));
  }
  return out;
}

// --- CachingEmbedBackend ---

CachingEmbedBackend::CachingEmbedBackend(std::shared_ptr<EmbedBackend> inner)
    : inner_(std::move(inner)) {}

std::vector<EmbeddingVector> CachingEmbedBackend::embed(
    const std::vector<std::string>& texts) {
  if (texts.empty()) throw EmptyInput("embed: no texts");
  std::vector<EmbeddingVector> out(texts.size());
  std::vector<std::string> misses;
  std::vector<std::size_t> miss_pos;
  {
    std::lock_guard lock(mu_);
    for (std::size_t i = 0; i < texts.size(); ++i) {
      auto key = embed_request_key(inner_->model_name(), texts[i]);
      auto it = cache_.find(key);
      if (it != cache_.end()) {
        out[i] = it->second;
      } else {
        misses.push_back(texts[i]);
        miss_pos.push_back(i);
      }
    }
  }
  if (!misses.empty()) {
    auto fetched = inner_->embed(misses);
    std::lock_guard lock(mu_);
    for (std::size_t i = 0; i < misses.size(); ++i) {
      cache_[embed_request_key(inner_->model_name(), misses[i])] = fetched[i];
      out[miss_pos[i]] = fetched[i];
    }
  }
  return out;
}

}  // namespace nl2gql::backends
