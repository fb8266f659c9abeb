#include "nl2gql/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nl2gql::config {

namespace {

using nlohmann::json;

std::string interpolate_env(const std::string& s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '$' && i + 1 < s.size() && s[i + 1] == '{') {
      std::size_t close = s.find('}', i + 2);
      if (close == std::string::npos)
        throw ConfigError("unterminated ${...} in config value: " + s);
      std::string var = s.substr(i + 2, close - (i + 2));
      const char* value = std::getenv(var.c_str());
      if (!value)
        throw ConfigError("environment variable not set: " + var);
      out += value;
      i = close + 1;
    } else {
      out += s[i++];
    }
  }
  return out;
}

std::string get_string(const json& doc, const std::string& key,
                       const std::string& fallback = "") {
  if (!doc.contains(key)) return fallback;
  return interpolate_env(doc.at(key).get<std::string>());
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

}  // namespace

Config load_config(const std::string& document, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  Config cfg;
  if (!doc.contains("backends") || !doc.at("backends").is_object())
    throw ConfigError("config requires a backends object");
  for (const auto& [name, entry] : doc.at("backends").items()) {
    BackendConfig b;
    b.kind = get_string(entry, "kind");
    b.base_url = get_string(entry, "base_url");
    b.api_key = get_string(entry, "api_key");
    b.model = get_string(entry, "model");
    b.fixture = resolve(get_string(entry, "fixture"), base_dir);
    b.dim = entry.value("dim", 256);
    b.ngram = entry.value("ngram", 3);
    if (b.kind != "replay" && b.kind != "record" && b.kind != "http" &&
        b.kind != "hash")
      throw ConfigError("backend " + name + ": unknown kind '" + b.kind + "'");
    if ((b.kind == "replay" || b.kind == "record") && b.fixture.empty())
      throw ConfigError("backend " + name + ": kind '" + b.kind +
                        "' requires a fixture path");
    if ((b.kind == "http" || b.kind == "record") && b.base_url.empty())
      throw ConfigError("backend " + name + ": kind '" + b.kind +
                        "' requires a base_url");
    cfg.backends[name] = std::move(b);
  }

  if (!doc.contains("roles") || !doc.at("roles").is_object())
    throw ConfigError("config requires a roles object");
  const auto& roles = doc.at("roles");
  cfg.ranker = get_string(roles, "ranker");
  cfg.rewriter_embed = get_string(roles, "rewriter_embed");
  cfg.refiner = get_string(roles, "refiner");
  for (const auto& [role, name] :
       std::map<std::string, std::string>{{"ranker", cfg.ranker},
                                          {"rewriter_embed", cfg.rewriter_embed},
                                          {"refiner", cfg.refiner}}) {
    if (name.empty()) throw ConfigError("role not bound: " + role);
    if (!cfg.backends.count(name))
      throw ConfigError("role " + role + " bound to unknown backend: " + name);
  }

  if (doc.contains("sampling")) {
    cfg.temperature = doc.at("sampling").value("temperature", 0.2);
    cfg.top_p = doc.at("sampling").value("top_p", 0.7);
  }
  if (doc.contains("align")) {
    const auto& a = doc.at("align");
    cfg.align_params.tau1 = a.value("tau1", 1.0);
    cfg.align_params.k = a.value("k", 5);
    cfg.align_params.span_ngrams = a.value("span_ngrams", 4);
  }
  if (doc.contains("similarity")) {
    const auto& s = doc.at("similarity");
    cfg.similarity.alpha = s.value("alpha", 0.5);
    cfg.similarity.beta = s.value("beta", 0.5);
    cfg.similarity.theta = s.value("theta", 0.9);
    cfg.similarity.bm25_k1 = s.value("k1", 1.2);
    cfg.similarity.bm25_b = s.value("b", 0.75);
  }
  if (doc.contains("paths")) {
    const auto& p = doc.at("paths");
    cfg.schema_path = resolve(get_string(p, "schema"), base_dir);
    cfg.graph_path = resolve(get_string(p, "graph"), base_dir);
    cfg.skeleton_override_path = resolve(get_string(p, "skeleton_override"), base_dir);
  }
  return cfg;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_config(buffer.str(),
                     std::filesystem::path(path).parent_path().string());
}

BackendSet build_backends(const Config& cfg) {
  BackendSet set;
  for (const auto& [name, b] : cfg.backends) {
    if (b.kind == "replay") {
      auto replay = std::make_shared<backends::ReplayBackend>(b.fixture);
      set.chat[name] = replay;
      set.embed[name] = replay;
    } else if (b.kind == "http") {
      set.chat[name] = std::make_shared<backends::HttpChatBackend>(b.base_url, b.api_key);
      set.embed[name] =
          std::make_shared<backends::HttpEmbedBackend>(b.base_url, b.api_key, b.model);
    } else if (b.kind == "record") {
      set.chat[name] = std::make_shared<backends::RecordingChatBackend>(
          std::make_shared<backends::HttpChatBackend>(b.base_url, b.api_key), b.fixture);
      set.embed[name] = std::make_shared<backends::RecordingEmbedBackend>(
          std::make_shared<backends::HttpEmbedBackend>(b.base_url, b.api_key, b.model),
          b.fixture);
    } else if (b.kind == "hash") {
      set.embed[name] = std::make_shared<backends::HashEmbedBackend>(
          static_cast<std::size_t>(b.dim), b.ngram);
    }
  }
  return set;
}

pipeline::RoleBackends BackendSet::roles(const Config& cfg) const {
  pipeline::RoleBackends r;
  auto chat_it = chat.find(cfg.ranker);
  if (chat_it == chat.end())
    throw ConfigError("ranker backend has no chat capability: " + cfg.ranker);
  r.ranker = chat_it->second.get();
  r.ranker_model = cfg.backends.at(cfg.ranker).model.empty()
                       ? "ranker"
                       : cfg.backends.at(cfg.ranker).model;

  auto embed_it = embed.find(cfg.rewriter_embed);
  if (embed_it == embed.end())
    throw ConfigError("rewriter_embed backend has no embedding capability: " +
                      cfg.rewriter_embed);
  r.rewriter_embed = embed_it->second.get();

  chat_it = chat.find(cfg.refiner);
  if (chat_it == chat.end())
    throw ConfigError("refiner backend has no chat capability: " + cfg.refiner);
  r.refiner = chat_it->second.get();
  r.refiner_model = cfg.backends.at(cfg.refiner).model.empty()
                        ? "refiner"
                        : cfg.backends.at(cfg.refiner).model;

  r.temperature = cfg.temperature;
  r.top_p = cfg.top_p;
  return r;
}

}  // namespace nl2gql::config
