#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace nl2gql::backends {

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string content;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.2;
  double top_p = 0.7;
  std::string model_name;
};

struct TokenUsage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
};

struct ChatResponse {
  std::string content;
  std::string finish_reason = "stop";
  std::optional<TokenUsage> usage;
};

struct EmbeddingVector {
  std::vector<double> values;
  std::size_t dim() const { return values.size(); }
};

// Stable key over the canonicalized request. Invariant to JSON key order
// and insignificant whitespace; excludes live-only fields (auth, time).
std::string chat_request_key(const ChatRequest& request);
std::string embed_request_key(const std::string& model_name, const std::string& text);

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResponse chat(const ChatRequest& request) = 0;
};

class EmbedBackend {
 public:
  virtual ~EmbedBackend() = default;
  // One vector per input, order preserved, constant dim.
  virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
  virtual std::string model_name() const = 0;
};

// Reads a newline-delimited fixture file of {request_key, kind, response}
// records and serves responses by key. Read-only after load.
class ReplayBackend : public ChatBackend, public EmbedBackend {
 public:
  explicit ReplayBackend(const std::string& fixture_path,
                         std::string embed_model = "replay-embed");
  static ReplayBackend from_text(const std::string& fixture_text,
                                 std::string embed_model = "replay-embed");

  ChatResponse chat(const ChatRequest& request) override;
  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
  std::string model_name() const override { return embed_model_; }

  bool has_chat_key(const std::string& key) const { return chat_.count(key) > 0; }

 private:
  ReplayBackend() = default;
  void load(const std::string& text);
  std::map<std::string, ChatResponse> chat_;
  std::map<std::string, EmbeddingVector> embeddings_;
  std::string embed_model_ = "replay-embed";
};

// Wraps a live backend; serves hits from the fixture and appends misses.
class RecordingChatBackend : public ChatBackend {
 public:
  RecordingChatBackend(std::shared_ptr<ChatBackend> inner, std::string fixture_path);
  ChatResponse chat(const ChatRequest& request) override;

 private:
  std::shared_ptr<ChatBackend> inner_;
  std::string fixture_path_;
  std::map<std::string, ChatResponse> recorded_;
  std::mutex mu_;
};

class RecordingEmbedBackend : public EmbedBackend {
 public:
  RecordingEmbedBackend(std::shared_ptr<EmbedBackend> inner, std::string fixture_path);
  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
  std::string model_name() const override { return inner_->model_name(); }

 private:
  std::shared_ptr<EmbedBackend> inner_;
  std::string fixture_path_;
  std::map<std::string, EmbeddingVector> recorded_;
  std::mutex mu_;
};

struct RetryPolicy {
  int max_attempts = 5;
  double initial_delay_s = 0.5;
  double max_total_delay_s = 30.0;
};

// OpenAI-compatible chat-completions endpoint.
class HttpChatBackend : public ChatBackend {
 public:
  HttpChatBackend(std::string base_url, std::string api_key,
                  RetryPolicy retry = {});
  ChatResponse chat(const ChatRequest& request) override;

 private:
  std::string base_url_;
  std::string api_key_;
  RetryPolicy retry_;
};

// OpenAI-compatible embeddings endpoint.
class HttpEmbedBackend : public EmbedBackend {
 public:
  HttpEmbedBackend(std::string base_url, std::string api_key, std::string model,
                   RetryPolicy retry = {});
  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
  std::string model_name() const override { return model_; }

 private:
  std::string base_url_;
  std::string api_key_;
  std::string model_;
  RetryPolicy retry_;
};

// Deterministic offline embedder: hashed character n-gram counts,
// L2-normalized. Useful as the default similarity scorer in replay runs.
class HashEmbedBackend : public EmbedBackend {
 public:
  explicit HashEmbedBackend(std::size_t dim = 256, int ngram = 3);
  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
  std::string model_name() const override;

 private:
  std::size_t dim_;
  int ngram_;
};

// Memoizes embed calls by (model_name, text). Internally synchronized.
class CachingEmbedBackend : public EmbedBackend {
 public:
  explicit CachingEmbedBackend(std::shared_ptr<EmbedBackend> inner);
  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
  std::string model_name() const override { return inner_->model_name(); }

 private:
  std::shared_ptr<EmbedBackend> inner_;
  std::map<std::string, EmbeddingVector> cache_;
  std::mutex mu_;
};

}  // namespace nl2gql::backends
