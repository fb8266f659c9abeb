#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nl2gql/backends.hpp"
#include "nl2gql/graph_store.hpp"

namespace nl2gql::align {

enum class CandidateKind { NodeVid, AttrValue, TagName, EdgeName };

std::string candidate_kind_name(CandidateKind k);

struct CandidateItem {
  std::string surface;
  CandidateKind kind = CandidateKind::NodeVid;
  // Resolves into the store/schema: vid, "vid.attr", or a schema name.
  std::string locator;
};

enum class MatchStage { Character, Semantic, Fallback };

struct AlignmentMatch {
  // Character offsets of the matched span within the query.
  std::size_t span_start = 0;
  std::size_t span_end = 0;
  CandidateItem candidate;
  double u1 = 0;  // char-level score
  double u2 = 0;  // cosine score
  MatchStage stage = MatchStage::Character;
};

struct Substitution {
  std::string original;
  std::string canonical;
  CandidateKind kind = CandidateKind::NodeVid;
};

struct RewriteResult {
  std::string rewritten_query;
  std::vector<Substitution> substitutions;
  std::vector<std::string> unmatched;
};

struct RetrieveParams {
  double tau1 = 1.0;       // char-score admission threshold
  int k = 5;               // matches kept per span
  int span_ngrams = 4;     // longest span, in whitespace tokens
};

// Unit edit distance over Unicode scalar values (UTF-8 decoded).
std::size_t levenshtein(const std::string& a, const std::string& b);

// min(len Q, len I) / distance, case-folded; exact match scores
// 2 * min-length so it strictly dominates any distance-1 pair.
double char_score(const std::string& q, const std::string& item);

double cosine(const backends::EmbeddingVector& u, const backends::EmbeddingVector& v);

// Every node vid, string attr value, tag name, and edge name in the store.
// Deduplicated by (surface, kind) within one node; deterministic order.
std::vector<CandidateItem> build_index(const graph::GraphStore& store);

// Two-level retrieval: char-score filter over query n-gram spans, then
// semantic ranking of survivors. Whole-query semantic fallback when the
// filter comes up empty.
std::vector<AlignmentMatch> retrieve(const std::string& query,
                                     const std::vector<CandidateItem>& index,
                                     backends::EmbedBackend& embed_backend,
                                     const RetrieveParams& params = {});

// Replace matched spans with canonical surfaces plus a "(kind: name)" hint.
// Non-overlapping substitutions chosen greedily by descending (u1, u2).
RewriteResult rewrite(const std::string& query,
                      const std::vector<AlignmentMatch>& matches,
                      const graph::GraphSchema& schema);

}  // namespace nl2gql::align
