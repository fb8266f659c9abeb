#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "nl2gql/backends.hpp"
#include "nl2gql/codegen.hpp"
#include "nl2gql/errors.hpp"
#include "nl2gql/graph_store.hpp"

namespace nl2gql::dataset {

struct NlGqlPair {
  std::string nl;
  std::string gql;
  std::string schema_id;
  std::string language = "en";     // en | zh
  std::string provenance = "manual";  // manual | gql2nl | kbqa_style
};

struct ReasoningTrace {
  std::vector<std::string> crud_choice;
  std::string crud_note;
  std::vector<std::string> clause_choice;
  std::string clause_note;
  std::vector<std::string> schema_choice;
  std::string schema_note;
};

struct TrainRecord {
  std::string nl;
  std::string gql;
  std::string sch;  // code-schema subset text
  std::string ske;  // skeleton subset text
  ReasoningTrace rea;
};

struct SplitSpec {
  double train_fraction = 0.8;
  std::set<std::string> holdout_schemas;
  std::uint64_t seed = 0;
};

struct Gql2NlResult {
  std::vector<std::string> variants;  // distinct phrasings, reply order kept
  bool deduplicated = false;          // true when the model repeated itself
};

struct SplitResult {
  std::vector<NlGqlPair> train;
  std::vector<NlGqlPair> test;
  bool infeasible = false;  // holdout alone exceeded the test budget
};

enum class KCenterInit { FirstIndex, MaxNorm };

// Ask a chat backend for n_variants phrasings of a valid query.
// Duplicates are removed; fewer than requested sets the flag.
Gql2NlResult gql2nl(const std::string& gql, const graph::GraphSchema& schema,
                    int n_variants, backends::ChatBackend& backend,
                    const std::string& model_name = "gql2nl");

// Derive the reasoning trace mechanically from the gold query's AST and
// render the matching schema/skeleton subsets.
TrainRecord build_train_record(const NlGqlPair& pair, const graph::GraphSchema& schema,
                               const codegen::Skeleton& skeleton);

// Greedy farthest-point selection under Euclidean distance. Ties break to
// the lowest index; indices returned in selection order.
std::vector<std::size_t> k_center_greedy(
    const std::vector<backends::EmbeddingVector>& vectors, std::size_t k,
    KCenterInit init = KCenterInit::MaxNorm);

// Max over unselected points of the distance to the nearest selected one.
double coverage_radius(const std::vector<backends::EmbeddingVector>& vectors,
                       const std::vector<std::size_t>& selected);

// Holdout schemas go wholly to test; the rest splits by seeded shuffle.
SplitResult split_by_schema(const std::vector<NlGqlPair>& pairs, const SplitSpec& spec);

// Newline-delimited JSON records, UTF-8.
std::vector<NlGqlPair> load_pairs(const std::string& text);
std::string serialize_pairs(const std::vector<NlGqlPair>& pairs);
std::string serialize_train_records(const std::vector<TrainRecord>& records);

}  // namespace nl2gql::dataset
