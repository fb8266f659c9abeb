#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "nl2gql/backends.hpp"
#include "nl2gql/errors.hpp"
#include "nl2gql/gql/executor.hpp"
#include "nl2gql/graph_store.hpp"

namespace nl2gql::eval {

struct EvalItem {
  std::string id;  // diagnostics only; item index when absent
  std::string nl;
  std::string gold_gql;
  std::string generated_gql;
  std::string schema_id;
};

struct SimilarityParams {
  double alpha = 0.5;
  double beta = 0.5;
  double theta = 0.9;  // correctness threshold on combined similarity
  double bm25_k1 = 1.2;
  double bm25_b = 0.75;
  // Map the BM25 cosine by (x+1)/2 before combining. On by default; the
  // mapping compresses the term into [0.5, 1].
  bool normalize_bm25 = true;
};

enum class ErrorCategory {
  SchemaSelection,
  SkeletonSelection,
  NoRelatedInformation,
  SyntaxError,
  QueryMisunderstanding,
  Other,
  None,
};

std::string error_category_name(ErrorCategory c);

struct ItemResult {
  std::string id;
  bool valid = false;
  double combined_sim = 0;
  double ca = 0;  // per-item comprehension cosine, clamped to [0, 1]
  bool correct = false;
  ErrorCategory error_category = ErrorCategory::Other;
  std::string detail;  // diagnostic note (parse error text, etc.)
};

struct EvalReport {
  double sa = 0;
  double ca = 0;
  double ea = 0;
  double iea = 0;
  std::size_t n_total = 0;
  std::size_t n_valid = 0;
  std::size_t n_correct = 0;
  double theta = 0.9;
  std::vector<ItemResult> items;
};

// bert_score stand-in: scores two canonical result texts in [0, 1].
using Scorer = std::function<double(const std::string&, const std::string&)>;

// Default scorer: embedding-backend cosine clamped to [0, 1].
Scorer make_embed_scorer(backends::EmbedBackend& backend);

// Case-folded tokens split on whitespace and punctuation.
std::vector<std::string> tokenize_text(const std::string& text);

double syntax_accuracy(const std::vector<EvalItem>& items);

// Mean cosine between gold and generated query embeddings, negatives
// clamped to 0.
double comprehension_accuracy(const std::vector<EvalItem>& items,
                              backends::EmbedBackend& backend);

// Weighted blend of token overlap, BM25-vector cosine, and scorer output
// over the canonical texts of the two tables. Throws EmptyGold when the
// gold table tokenizes to nothing.
double combined_similarity(const gql::ResultTable& gold_result,
                           const gql::ResultTable& gql_result,
                           const SimilarityParams& params, const Scorer& scorer);

using StoreLookup =
    std::function<const graph::GraphStore&(const std::string& schema_id)>;

// Full batch evaluation: SA over parse validity, CA over query embeddings,
// EA/IEA over combined similarity against theta. Gold execution failures
// raise GoldExecutionError. Items evaluate independently across `jobs`
// threads; the report is order-independent.
EvalReport evaluate(const std::vector<EvalItem>& items, const StoreLookup& stores,
                    backends::EmbedBackend& embed_backend,
                    const SimilarityParams& params = {}, int jobs = 1,
                    Scorer scorer = {});

// Evidence gathered about one evaluated item, optionally including
// pipeline intermediates when the generation was produced by translate().
struct ErrorEvidence {
  bool parsed = false;
  bool correct = false;
  double ca = 0;
  // Names the gold query references, from its AST.
  std::vector<std::string> gold_schema_names;
  std::vector<std::string> gold_crud;
  bool gold_references_vid = false;
  // Pipeline intermediates; meaningful only when have_trace is set.
  bool have_trace = false;
  std::vector<std::string> ranker_schema;
  std::vector<std::string> ranker_crud;
  bool rewrite_matched_any = false;
};

// Rule-based assignment into the error taxonomy. Correct items map to None.
ErrorCategory classify_error(const ErrorEvidence& ev);

// Human-readable metric table, one row per metric plus counts.
std::string format_report(const EvalReport& report);

}  // namespace nl2gql::eval
