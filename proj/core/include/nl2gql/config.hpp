#pragma once

#include <map>
#include <memory>
#include <string>

#include "nl2gql/align.hpp"
#include "nl2gql/backends.hpp"
#include "nl2gql/errors.hpp"
#include "nl2gql/eval.hpp"
#include "nl2gql/pipeline.hpp"

namespace nl2gql::config {

// One named backend. `kind` selects the implementation:
//   replay — serve chat and embeddings from a fixture file
//   record — live HTTP backend, appending misses to the fixture file
//   http   — live OpenAI-compatible endpoint
//   hash   — deterministic offline embedder (embeddings only)
struct BackendConfig {
  std::string kind;
  std::string base_url;
  std::string api_key;
  std::string model;
  std::string fixture;
  int dim = 256;    // hash backend
  int ngram = 3;    // hash backend
};

struct Config {
  std::map<std::string, BackendConfig> backends;
  // Role name -> backend name; all three must be bound.
  std::string ranker;
  std::string rewriter_embed;
  std::string refiner;
  double temperature = 0.2;
  double top_p = 0.7;
  align::RetrieveParams align_params;
  eval::SimilarityParams similarity;
  std::string schema_path;
  std::string graph_path;
  std::string skeleton_override_path;  // optional
};

// Parse and validate a config document. String values interpolate
// ${ENV_VAR} references; unset variables raise ConfigError. Relative paths
// are resolved against base_dir when it is nonempty.
Config load_config(const std::string& document, const std::string& base_dir = "");

// Read the file, then load with base_dir = its parent directory.
Config load_config_file(const std::string& path);

// Instantiated backends, keyed by config name. Chat and embed maps may
// share an object (replay fixtures serve both).
struct BackendSet {
  std::map<std::string, std::shared_ptr<backends::ChatBackend>> chat;
  std::map<std::string, std::shared_ptr<backends::EmbedBackend>> embed;

  // Role bindings for pipeline::translate; pointers into this set.
  pipeline::RoleBackends roles(const Config& cfg) const;
};

BackendSet build_backends(const Config& cfg);

}  // namespace nl2gql::config
