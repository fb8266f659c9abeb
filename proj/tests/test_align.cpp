#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "fixtures.hpp"
#include "nl2gql/align.hpp"
#include "nl2gql/errors.hpp"

using namespace nl2gql;
using namespace nl2gql::align;

namespace {

// [DERIVED] memoized recursive edit-distance oracle.
std::size_t lev_oracle(const std::string& a, const std::string& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> rec = [&](std::size_t i,
                                                                 std::size_t j) {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    auto key = std::make_pair(i, j);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::size_t best = std::min({rec(i + 1, j) + 1, rec(i, j + 1) + 1,
                                 rec(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1)});
    memo[key] = best;
    return best;
  };
  return rec(0, 0);
}

}  // namespace

TEST_CASE("levenshtein on known pairs") {
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "") == 3);
  CHECK(levenshtein("same", "same") == 0);
  CHECK(levenshtein("", "") == 0);
}

TEST_CASE("levenshtein counts Unicode scalar values, not bytes") {
  // Two-byte UTF-8 codepoints: one substitution, not two.
  CHECK(levenshtein("\xc3\xa9", "\xc3\xa8") == 1);
}

TEST_CASE("levenshtein is a metric (random short strings vs oracle)") {
  std::mt19937_64 rng(3);
  auto rand_str = [&] {
    std::string s;
    int len = static_cast<int>(rng() % 7);
    for (int i = 0; i < len; ++i) s += static_cast<char>('a' + rng() % 4);
    return s;
  };
  for (int trial = 0; trial < 300; ++trial) {
    auto a = rand_str(), b = rand_str(), c = rand_str();
    auto ab = levenshtein(a, b);
    CHECK(ab == lev_oracle(a, b));
    CHECK(ab == levenshtein(b, a));
    CHECK((ab == 0) == (a == b));
    CHECK(ab <= levenshtein(a, c) + levenshtein(c, b));
  }
}

TEST_CASE("char_score is min-len over distance, with the exact-match rule") {
  CHECK(char_score("kitten", "sitting") == doctest::Approx(2.0));
  CHECK(char_score("abc", "abc") == doctest::Approx(6.0));
  CHECK(char_score("a", "b") == doctest::Approx(1.0));
  // Case-folded before comparison.
  CHECK(char_score("TIM DUNCAN", "tim duncan") == doctest::Approx(20.0));
  CHECK_THROWS_AS(char_score("", "x"), EmptyInput);
  CHECK_THROWS_AS(char_score("x", ""), EmptyInput);
}

TEST_CASE("char_score symmetry and exact-match dominance") {
  CHECK(char_score("abcd", "bcda") == char_score("bcda", "abcd"));
  // Exact match strictly dominates any distance-1 pair of the same min-length.
  CHECK(char_score("abc", "abc") > char_score("abc", "abd"));
}

TEST_CASE("cosine") {
  backends::EmbeddingVector a{{1, 0}}, b{{0, 1}}, c{{1, 1}}, zero{{0, 0}};
  CHECK(cosine(a, a) == doctest::Approx(1.0));
  CHECK(cosine(a, b) == doctest::Approx(0.0));
  CHECK(cosine(a, c) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-9));
  CHECK(cosine(a, zero) == doctest::Approx(0.0));
  backends::EmbeddingVector d3{{1, 0, 0}};
  CHECK_THROWS_AS(cosine(a, d3), DimMismatch);
}

TEST_CASE("build_index enumerates vids, string attrs, tag and edge names") {
  auto store = make_basketball_store();
  auto index = build_index(store);

  auto has = [&](const std::string& surface, CandidateKind kind) {
    for (const auto& c : index)
      if (c.surface == surface && c.kind == kind) return true;
    return false;
  };
  CHECK(has("player100", CandidateKind::NodeVid));
  CHECK(has("Tim Duncan", CandidateKind::AttrValue));
  CHECK(has("player", CandidateKind::TagName));
  CHECK(has("team", CandidateKind::TagName));
  CHECK(has("follow", CandidateKind::EdgeName));
  CHECK(has("serve", CandidateKind::EdgeName));
  // Int attrs do not become candidates.
  CHECK_FALSE(has("42", CandidateKind::AttrValue));

  auto again = build_index(store);
  REQUIRE(again.size() == index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    CHECK(again[i].surface == index[i].surface);
    CHECK(again[i].locator == index[i].locator);
  }
}

TEST_CASE("retrieve finds the exact entity span first") {
  auto store = make_basketball_store();
  auto index = build_index(store);
  backends::HashEmbedBackend embed(256, 3);
  auto matches = retrieve("Who does Tim Duncan follow?", index, embed);
  REQUIRE_FALSE(matches.empty());

  bool found = false;
  for (const auto& m : matches) {
    if (m.candidate.surface == "Tim Duncan" &&
        m.candidate.kind == CandidateKind::AttrValue) {
      found = true;
      CHECK(m.u1 == doctest::Approx(20.0));  // exact match, 2 * min-len 10
      CHECK(m.stage == MatchStage::Character);
    }
  }
  CHECK(found);
}

TEST_CASE("retrieve falls back to whole-query semantic ranking") {
  auto store = make_basketball_store();
  std::vector<CandidateItem> index = {
      {"zzzz", CandidateKind::NodeVid, "zzzz"},
      {"qqqq", CandidateKind::NodeVid, "qqqq"},
  };
  backends::HashEmbedBackend embed(256, 3);
  RetrieveParams params;
  params.tau1 = 2.0;  // nothing short of an exact span match survives
  auto matches = retrieve("0123 4567 89", index, embed, params);
  for (const auto& m : matches) CHECK(m.stage == MatchStage::Fallback);
}

TEST_CASE("retrieve rejects an empty index") {
  backends::HashEmbedBackend embed(64, 3);
  CHECK_THROWS_AS(retrieve("query", {}, embed), EmptyInput);
}

namespace {

// Scales every vector of an inner backend by a constant factor.
class ScaledEmbed : public backends::EmbedBackend {
 public:
  ScaledEmbed(backends::EmbedBackend& inner, double factor)
      : inner_(inner), factor_(factor) {}
  std::vector<backends::EmbeddingVector> embed(
      const std::vector<std::string>& texts) override {
    auto out = inner_.embed(texts);
    for (auto& v : out)
      for (auto& x : v.values) x *= factor_;
    return out;
  }
  std::string model_name() const override { return inner_.model_name(); }

 private:
  backends::EmbedBackend& inner_;
  double factor_;
};

}  // namespace

TEST_CASE("retrieve ranking is invariant under uniform embedding scaling") {
  auto store = make_basketball_store();
  auto index = build_index(store);
  backends::HashEmbedBackend base(128, 3);
  ScaledEmbed scaled(base, 3.25);

  auto m1 = retrieve("Which team does Tony Parker serve?", index, base);
  auto m2 = retrieve("Which team does Tony Parker serve?", index, scaled);
  REQUIRE(m1.size() == m2.size());
  for (std::size_t i = 0; i < m1.size(); ++i) {
    CHECK(m1[i].candidate.surface == m2[i].candidate.surface);
    CHECK(m1[i].span_start == m2[i].span_start);
    CHECK(m1[i].u2 == doctest::Approx(m2[i].u2).epsilon(1e-9));
  }
}

TEST_CASE("rewrite: identity without matches, substitution with them") {
  auto store = make_basketball_store();
  auto schema = store.schema();

  auto r0 = rewrite("No entities here.", {}, schema);
  CHECK(r0.rewritten_query == "No entities here.");
  CHECK(r0.substitutions.empty());

  auto index = build_index(store);
  backends::HashEmbedBackend embed(256, 3);
  std::string q = "Who does Tim Duncan follow?";
  auto matches = retrieve(q, index, embed);
  auto r1 = rewrite(q, matches, schema);
  CHECK(r1.rewritten_query.find("Tim Duncan") != std::string::npos);
  CHECK_FALSE(r1.substitutions.empty());

  // Idempotence: a canonical span that already carries its hint is left
  // untouched when matched again.
  auto pos = r1.rewritten_query.find("Tim Duncan");
  REQUIRE(pos != std::string::npos);
  AlignmentMatch again;
  again.span_start = pos;
  again.span_end = pos + std::string("Tim Duncan").size();
  again.candidate = {"Tim Duncan", CandidateKind::AttrValue, "player100.name"};
  again.u1 = 20;
  again.u2 = 1.0;
  auto r2 = rewrite(r1.rewritten_query, {again}, schema);
  CHECK(r2.rewritten_query == r1.rewritten_query);
  CHECK(r2.substitutions.empty());
}

TEST_CASE("rewrite applies only the higher-ranked of two overlapping spans") {
  auto schema = make_basketball_schema();
  std::string q = "find alpha beta now";
  AlignmentMatch strong;
  strong.span_start = 5;
  strong.span_end = 15;  // "alpha beta"
  strong.candidate = {"AlphaBeta", CandidateKind::NodeVid, "AlphaBeta"};
  strong.u1 = 20;
  strong.u2 = 0.9;
  AlignmentMatch weak;
  weak.span_start = 11;
  weak.span_end = 15;  // "beta" overlaps
  weak.candidate = {"Beta", CandidateKind::NodeVid, "Beta"};
  weak.u1 = 8;
  weak.u2 = 0.8;

  auto result = rewrite(q, {weak, strong}, schema);
  REQUIRE(result.substitutions.size() == 1);
  CHECK(result.substitutions[0].canonical == "AlphaBeta");
  CHECK(result.rewritten_query.find("AlphaBeta") != std::string::npos);
  CHECK(result.rewritten_query.find("(node_vid: AlphaBeta)") != std::string::npos);
}
