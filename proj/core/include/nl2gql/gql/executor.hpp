#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nl2gql/errors.hpp"
#include "nl2gql/gql/ast.hpp"
#include "nl2gql/graph_store.hpp"

namespace nl2gql::gql {

// Statement parsed but not executable by the embedded engine.
struct UnsupportedFeature : Error {
  explicit UnsupportedFeature(const std::string& kw)
      : Error("unsupported statement: " + kw), keyword(kw) {}
  std::string keyword;
};

// Unknown tag/edge/attr or column reference out of scope.
struct SemanticError : Error {
  using Error::Error;
};

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
};

bool operator==(const ResultTable& a, const ResultTable& b);

// Canonical text form: tab-separated header, one row per line, null as
// __NULL__. Frozen; Algorithm-style scoring tokenizes this text.
std::string to_canonical_text(const ResultTable& table);

struct ExecParams {
  std::uint64_t sample_seed = 42;
};

ResultTable execute(const GqlStatement& stmt, const graph::GraphStore& store,
                    const ExecParams& params = {});

// Convenience: parse then execute.
ResultTable execute_query(const std::string& text, const graph::GraphStore& store,
                          const ExecParams& params = {});

}  // namespace nl2gql::gql
