#include "nl2gql/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "nl2gql/align.hpp"
#include "nl2gql/gql/parser.hpp"

namespace nl2gql::eval {

std::string error_category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::SchemaSelection: return "schema_selection";
    case ErrorCategory::SkeletonSelection: return "skeleton_selection";
    case ErrorCategory::NoRelatedInformation: return "no_related_information";
    case ErrorCategory::SyntaxError: return "syntax_error";
    case ErrorCategory::QueryMisunderstanding: return "query_misunderstanding";
    case ErrorCategory::Other: return "other";
    case ErrorCategory::None: return "none";
  }
  return "?";
}

std::vector<std::string> tokenize_text(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c >= 0x80) {
      cur += static_cast<char>(std::tolower(c));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

bool parses(const std::string& text) {
  try {
    gql::parse(text);
    return true;
  } catch (const gql::GqlSyntaxError&) {
    return false;
  }
}

// Cosine over BM25-weighted term vectors built from the two-document
// corpus {gold, generated}.
double bm25_cosine(const std::vector<std::string>& t1,
                   const std::vector<std::string>& t2,
                   const SimilarityParams& params) {
  std::map<std::string, std::size_t> tf1, tf2;
  for (const auto& t : t1) ++tf1[t];
  for (const auto& t : t2) ++tf2[t];

  const double n_docs = 2.0;
  const double avgdl = (static_cast<double>(t1.size()) + t2.size()) / 2.0;
  auto weight = [&](const std::map<std::string, std::size_t>& tf, double doc_len,
                    const std::string& term) {
    auto it = tf.find(term);
    if (it == tf.end()) return 0.0;
    double df = (tf1.count(term) ? 1.0 : 0.0) + (tf2.count(term) ? 1.0 : 0.0);
    double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
    double f = static_cast<double>(it->second);
    double denom =
        f + params.bm25_k1 * (1.0 - params.bm25_b +
                              params.bm25_b * (avgdl > 0 ? doc_len / avgdl : 0.0));
    return idf * f * (params.bm25_k1 + 1.0) / denom;
  };

  std::set<std::string> vocab;
  for (const auto& [t, _] : tf1) vocab.insert(t);
  for (const auto& [t, _] : tf2) vocab.insert(t);

  double dot = 0, n1 = 0, n2 = 0;
  for (const auto& term : vocab) {
    double w1 = weight(tf1, static_cast<double>(t1.size()), term);
    double w2 = weight(tf2, static_cast<double>(t2.size()), term);
    dot += w1 * w2;
    n1 += w1 * w1;
    n2 += w2 * w2;
  }
  if (n1 == 0 || n2 == 0) return 0.0;
  return dot / (std::sqrt(n1) * std::sqrt(n2));
}

}  // namespace

Scorer make_embed_scorer(backends::EmbedBackend& backend) {
  return [&backend](const std::string& a, const std::string& b) {
    auto vecs = backend.embed({a, b});
    return clamp01(align::cosine(vecs[0], vecs[1]));
  };
}

double syntax_accuracy(const std::vector<EvalItem>& items) {
  if (items.empty()) throw EmptyInput("syntax_accuracy over empty item list");
  std::size_t valid = 0;
  for (const auto& item : items)
    if (parses(item.generated_gql)) ++valid;
  return static_cast<double>(valid) / static_cast<double>(items.size());
}

double comprehension_accuracy(const std::vector<EvalItem>& items,
                              backends::EmbedBackend& backend) {
  if (items.empty()) throw EmptyInput("comprehension_accuracy over empty item list");
  double total = 0;
  for (const auto& item : items) {
    auto vecs = backend.embed({item.gold_gql, item.generated_gql});
    total += clamp01(align::cosine(vecs[0], vecs[1]));
  }
  return total / static_cast<double>(items.size());
}

double combined_similarity(const gql::ResultTable& gold_result,
                           const gql::ResultTable& gql_result,
                           const SimilarityParams& params, const Scorer& scorer) {
  std::string text1 = gql::to_canonical_text(gold_result);
  std::string text2 = gql::to_canonical_text(gql_result);
  auto t1 = tokenize_text(text1);
  auto t2 = tokenize_text(text2);
  if (t1.empty()) throw EmptyGold("gold result table has no tokens");

  std::set<std::string> s1(t1.begin(), t1.end());
  std::set<std::string> s2(t2.begin(), t2.end());
  std::size_t inter = 0;
  for (const auto& t : s1)
    if (s2.count(t)) ++inter;
  double jaccard = static_cast<double>(inter) / static_cast<double>(s1.size());

  double bm25 = bm25_cosine(t1, t2, params);
  if (params.normalize_bm25) bm25 = (bm25 + 1.0) / 2.0;

  double bert = scorer ? clamp01(scorer(text1, text2)) : 0.0;

  double combined = params.beta * (params.alpha * jaccard + (1.0 - params.alpha) * bm25) +
                    (1.0 - params.beta) * bert;
  return clamp01(combined);
}

ErrorCategory classify_error(const ErrorEvidence& ev) {
  if (ev.correct) return ErrorCategory::None;
  if (!ev.parsed) return ErrorCategory::SyntaxError;
  if (ev.have_trace) {
    for (const auto& name : ev.gold_schema_names) {
      if (std::find(ev.ranker_schema.begin(), ev.ranker_schema.end(), name) ==
          ev.ranker_schema.end())
        return ErrorCategory::SchemaSelection;
    }
    for (const auto& kw : ev.gold_crud) {
      if (std::find(ev.ranker_crud.begin(), ev.ranker_crud.end(), kw) ==
          ev.ranker_crud.end())
        return ErrorCategory::SkeletonSelection;
    }
    if (!ev.rewrite_matched_any && ev.gold_references_vid)
      return ErrorCategory::NoRelatedInformation;
  }
  if (ev.ca >= 0.8) return ErrorCategory::QueryMisunderstanding;
  return ErrorCategory::Other;
}

EvalReport evaluate(const std::vector<EvalItem>& items, const StoreLookup& stores,
                    backends::EmbedBackend& embed_backend,
                    const SimilarityParams& params, int jobs, Scorer scorer) {
  if (items.empty()) throw EmptyInput("evaluate over empty item list");
  if (!scorer) scorer = make_embed_scorer(embed_backend);

  EvalReport report;
  report.theta = params.theta;
  report.n_total = items.size();
  report.items.resize(items.size());

  auto eval_one = [&](std::size_t i) {
    const EvalItem& item = items[i];
    ItemResult& r = report.items[i];
    r.id = item.id.empty() ? std::to_string(i) : item.id;

    gql::GqlStatement gold_stmt;
    gql::ResultTable gold_result;
    const graph::GraphStore& store = stores(item.schema_id);
    try {
      gold_stmt = gql::parse(item.gold_gql);
      gold_result = gql::execute(gold_stmt, store);
    } catch (const gql::GqlSyntaxError& e) {
      throw GoldExecutionError(r.id, e.message());
    } catch (const Error& e) {
      throw GoldExecutionError(r.id, e.what());
    }

    {
      auto vecs = embed_backend.embed({item.gold_gql, item.generated_gql});
      r.ca = clamp01(align::cosine(vecs[0], vecs[1]));
    }

    ErrorEvidence ev;
    auto gold_profile = gql::profile(gold_stmt);
    ev.gold_schema_names = gold_profile.schema_names;
    ev.gold_crud = gold_profile.crud;
    ev.gold_references_vid = !gold_profile.vids.empty();
    ev.ca = r.ca;

    try {
      auto stmt = gql::parse(item.generated_gql);
      r.valid = true;
      ev.parsed = true;
      try {
        auto result = gql::execute(stmt, store);
        r.combined_sim = combined_similarity(gold_result, result, params, scorer);
      } catch (const gql::UnsupportedFeature&) {
        r.combined_sim = 0.0;
      } catch (const gql::SemanticError& e) {
        r.combined_sim = 0.0;
        r.detail = e.what();
      }
    } catch (const gql::GqlSyntaxError& e) {
      r.valid = false;
      r.combined_sim = 0.0;
      r.detail = e.message();
    }

    r.correct = r.valid && r.combined_sim >= params.theta;
    ev.correct = r.correct;
    r.error_category = classify_error(ev);
  };

  if (jobs <= 1 || items.size() < 2) {
    for (std::size_t i = 0; i < items.size(); ++i) eval_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= items.size()) return;
        try {
          eval_one(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    };
    std::vector<std::thread> threads;
    int n = std::min<int>(jobs, static_cast<int>(items.size()));
    threads.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  double ca_sum = 0;
  for (const auto& r : report.items) {
    if (r.valid) ++report.n_valid;
    if (r.correct) ++report.n_correct;
    ca_sum += r.ca;
  }
  report.sa = static_cast<double>(report.n_valid) / static_cast<double>(report.n_total);
  report.ca = ca_sum / static_cast<double>(report.n_total);
  report.ea =
      static_cast<double>(report.n_correct) / static_cast<double>(report.n_total);
  report.iea = report.n_valid == 0
                   ? 0.0
                   : static_cast<double>(report.n_correct) /
                         static_cast<double>(report.n_valid);
  return report;
}

std::string format_report(const EvalReport& report) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "theta=%.4f\n"
                "metric  value\n"
                "SA      %.4f\n"
                "CA      %.4f\n"
                "EA      %.4f\n"
                "IEA     %.4f\n"
                "counts  total=%zu valid=%zu correct=%zu\n",
                report.theta, report.sa, report.ca, report.ea, report.iea,
                report.n_total, report.n_valid, report.n_correct);
  return buf;
}

}  // namespace nl2gql::eval
