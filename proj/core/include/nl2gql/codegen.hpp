#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "nl2gql/graph_store.hpp"

namespace nl2gql::codegen {

enum class KeywordKind { Crud, Clause };

struct SkeletonEntry {
  std::string keyword;
  KeywordKind kind = KeywordKind::Crud;
  std::string meaning;
  std::string example;
};

struct Skeleton {
  std::vector<SkeletonEntry> entries;

  const SkeletonEntry* find(const std::string& keyword) const;
  std::vector<std::string> keywords() const;
  std::vector<std::string> crud_keywords() const;
  std::vector<std::string> clause_keywords() const;
};

// Class-style rendering of a graph schema, used as prompt context only.
struct CodeSchema {
  std::string text;
  // Concept name -> (offset, length) of its class block within `text`.
  std::map<std::string, std::pair<std::size_t, std::size_t>> class_index;
};

CodeSchema render_code_schema(const graph::GraphSchema& schema);

// The compiled-in nGQL keyword catalog: 13 CRUD + 8 clause entries.
Skeleton builtin_skeleton();

// Load a replacement catalog from a JSON document of
// [{keyword, kind, meaning, example}, ...].
Skeleton load_skeleton(const std::string& document);

// Render code-style blocks for exactly the selected keywords, in catalog
// order. Unknown keywords raise UnknownKeyword.
std::string render_skeleton(const Skeleton& skeleton,
                            const std::set<std::string>& selected);

}  // namespace nl2gql::codegen
