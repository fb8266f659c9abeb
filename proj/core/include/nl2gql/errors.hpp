#pragma once

#include <stdexcept>
#include <string>

namespace nl2gql {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input document (JSON, fixture file, query file).
struct ParseError : Error {
  using Error::Error;
};

// Schema-level violation: duplicate names, dangling references, cycles.
struct SchemaError : Error {
  using Error::Error;
};

// Instance-data violation: unknown types, dangling endpoints, bad dtypes.
struct DataError : Error {
  using Error::Error;
};

struct UnknownEdgeType : Error {
  using Error::Error;
};

struct UnknownKeyword : Error {
  using Error::Error;
};

struct EmptyInput : Error {
  using Error::Error;
};

struct DimMismatch : Error {
  using Error::Error;
};

// Backend transport failure (network, HTTP status).
struct TransportError : Error {
  using Error::Error;
};

// Replay fixture has no entry for the request key.
struct FixtureMiss : Error {
  explicit FixtureMiss(const std::string& key)
      : Error("fixture miss for request key " + key), request_key(key) {}
  std::string request_key;
};

// Fixture file itself is inconsistent (key collision, mixed dims).
struct FixtureError : Error {
  using Error::Error;
};

struct RateLimited : Error {
  using Error::Error;
};

struct BackendError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct NoQueryFound : Error {
  using Error::Error;
};

struct KTooLarge : Error {
  using Error::Error;
};

// Gold result table is empty; combined similarity is undefined.
struct EmptyGold : Error {
  using Error::Error;
};

// A gold query failed to parse or execute — a dataset defect.
struct GoldExecutionError : Error {
  GoldExecutionError(const std::string& item_id, const std::string& msg)
      : Error("gold query failed for item " + item_id + ": " + msg), item(item_id) {}
  std::string item;
};

// Ranker reply did not match the instructed list format after a re-prompt.
struct ParseFailure : Error {
  using Error::Error;
};

// A pipeline stage failed; carries the stage name for diagnostics.
struct StageError : Error {
  StageError(const std::string& stage_name, const std::string& msg)
      : Error("[" + stage_name + "] " + msg), stage(stage_name) {}
  std::string stage;
};

}  // namespace nl2gql
