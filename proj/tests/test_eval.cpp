#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "nl2gql/eval.hpp"
#include "nl2gql/gql/executor.hpp"

using namespace nl2gql;
using namespace nl2gql::eval;

namespace {

// The header row is part of the canonical text, so the column name joins
// the token sets; tests pick it deliberately.
gql::ResultTable table_of(std::vector<std::string> words,
                          std::string column = "a") {
  gql::ResultTable t;
  t.columns = {std::move(column)};
  for (auto& w : words) t.rows.push_back({Value(std::move(w))});
  return t;
}

Scorer const_scorer(double v) {
  return [v](const std::string&, const std::string&) { return v; };
}

}  // namespace

TEST_CASE("tokenize_text case-folds and splits on punctuation") {
  CHECK(tokenize_text("Tim Duncan, age: 42!") ==
        (std::vector<std::string>{"tim", "duncan", "age", "42"}));
  CHECK(tokenize_text("") == std::vector<std::string>{});
  CHECK(tokenize_text("  ---  ") == std::vector<std::string>{});
}

TEST_CASE("syntax_accuracy counts parseable generations") {
  std::vector<EvalItem> items = {
      {"1", "", "", "GO FROM \"a\" OVER e YIELD dst(edge)", ""},
      {"2", "", "", "GO OVER FROM x", ""},
      {"3", "", "", "LOOKUP ON t WHERE t.a > 1 YIELD id(vertex)", ""},
      {"4", "", "", "", ""},
  };
  CHECK(syntax_accuracy(items) == doctest::Approx(0.5));
  CHECK_THROWS_AS(syntax_accuracy({}), EmptyInput);
}

TEST_CASE("comprehension_accuracy is 1 for identical query pairs") {
  backends::HashEmbedBackend embed(128, 3);
  std::vector<EvalItem> same = {
      {"1", "q", "GO FROM \"a\" OVER e YIELD dst(edge)",
       "GO FROM \"a\" OVER e YIELD dst(edge)", ""}};
  CHECK(comprehension_accuracy(same, embed) == doctest::Approx(1.0));

  std::vector<EvalItem> mixed = same;
  mixed.push_back({"2", "q", "completely different text",
                   "zzz qqq xxx unrelated tokens", ""});
  auto ca = comprehension_accuracy(mixed, embed);
  CHECK(ca < 1.0);
  CHECK(ca >= 0.0);
}

TEST_CASE("combined_similarity: identical tables score 1") {
  auto t = table_of({"Tony Parker", "Manu Ginobili"});
  SimilarityParams p;
  CHECK(combined_similarity(t, t, p, const_scorer(1.0)) == doctest::Approx(1.0));
}

TEST_CASE("combined_similarity: disjoint tables with a zero scorer score 0.125") {
  // [DERIVED] beta * (alpha*0 + (1-alpha) * (cos(-ish 0)+1)/2) + (1-beta)*0
  // with defaults alpha = beta = 0.5 and orthogonal BM25 vectors:
  // 0.5 * (0.5 * 0 + 0.5 * 0.5) = 0.125.
  auto gold = table_of({"aaa bbb"}, "eee");
  auto gen = table_of({"ccc ddd"}, "fff");
  SimilarityParams p;
  CHECK(combined_similarity(gold, gen, p, const_scorer(0.0)) ==
        doctest::Approx(0.125));
}

TEST_CASE("combined_similarity isolates the jaccard term") {
  // Gold tokens {a, b, c}; generated {a, b, d} -> |∩| / |gold| = 2/3.
  // The shared column name "a" already sits in both sets.
  auto gold = table_of({"b c"});
  auto gen = table_of({"b d"});
  SimilarityParams p;
  p.beta = 1.0;   // drop the scorer term
  p.alpha = 1.0;  // drop the BM25 term
  CHECK(combined_similarity(gold, gen, p, const_scorer(0.0)) ==
        doctest::Approx(2.0 / 3.0));

  // Token *sets*: duplicates in either table do not change the score.
  auto gold_dup = table_of({"b c", "a a b"});
  CHECK(combined_similarity(gold_dup, gen, p, const_scorer(0.0)) ==
        doctest::Approx(2.0 / 3.0));
}

TEST_CASE("combined_similarity uses the gold set as the jaccard denominator") {
  auto gold = table_of({"b"});
  auto superset = table_of({"b c d e f"});
  SimilarityParams p;
  p.beta = 1.0;
  p.alpha = 1.0;
  // Every gold token is covered, extras are free: asymmetric by design.
  CHECK(combined_similarity(gold, superset, p, const_scorer(0.0)) ==
        doctest::Approx(1.0));
  CHECK(combined_similarity(superset, gold, p, const_scorer(0.0)) ==
        doctest::Approx(2.0 / 6.0));
}

TEST_CASE("combined_similarity stays within [0, 1] and rejects empty gold") {
  auto gold = table_of({"x y"});
  auto gen = table_of({"x z"});
  SimilarityParams p;
  for (double s : {0.0, 0.5, 1.0}) {
    auto v = combined_similarity(gold, gen, p, const_scorer(s));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  gql::ResultTable empty;
  CHECK_THROWS_AS(combined_similarity(empty, gen, p, const_scorer(0.5)),
                  EmptyGold);
}

TEST_CASE("published metric arithmetic holds under the identity ea = sa * iea") {
  CHECK(std::abs(0.5704 * 0.8956 - 0.5109) < 1e-4);
  CHECK(std::abs(0.4823 * 0.8725 - 0.4208) < 1e-4);
}

TEST_CASE("evaluate: full batch on the basketball fixture") {
  auto store = make_basketball_store();
  StoreLookup lookup = [&](const std::string&) -> const graph::GraphStore& {
    return store;
  };
  backends::HashEmbedBackend embed(128, 3);

  std::vector<EvalItem> items = {
      // Exact match: correct.
      {"1", "who does tim follow",
       "GO FROM \"player100\" OVER follow YIELD $.player.name",
       "GO FROM \"player100\" OVER follow YIELD $.player.name", "s"},
      // Valid but wrong start vertex: valid, incorrect.
      {"2", "who does tim follow",
       "GO FROM \"player100\" OVER follow YIELD $.player.name",
       "GO FROM \"player103\" OVER follow YIELD $.player.name", "s"},
      // Unparseable: invalid.
      {"3", "who does tim follow",
       "GO FROM \"player100\" OVER follow YIELD $.player.name", "GO OVER x",
       "s"},
      // Valid syntax but unknown edge: valid, incorrect.
      {"4", "who does tim follow",
       "GO FROM \"player100\" OVER follow YIELD $.player.name",
       "GO FROM \"player100\" OVER likes YIELD $.player.name", "s"},
  };

  auto report = evaluate(items, lookup, embed);
  CHECK(report.n_total == 4);
  CHECK(report.n_valid == 3);
  CHECK(report.n_correct == 1);
  CHECK(report.sa == doctest::Approx(0.75));
  CHECK(report.ea == doctest::Approx(0.25));
  CHECK(report.iea == doctest::Approx(1.0 / 3.0));
  CHECK(report.ea == doctest::Approx(report.sa * report.iea));

  REQUIRE(report.items.size() == 4);
  CHECK(report.items[0].correct);
  CHECK(report.items[0].error_category == ErrorCategory::None);
  CHECK_FALSE(report.items[2].valid);
  CHECK(report.items[2].error_category == ErrorCategory::SyntaxError);

  // Multi-threaded evaluation yields the same report.
  auto parallel = evaluate(items, lookup, embed, {}, 4);
  CHECK(parallel.sa == doctest::Approx(report.sa));
  CHECK(parallel.ea == doctest::Approx(report.ea));
  for (std::size_t i = 0; i < report.items.size(); ++i) {
    CHECK(parallel.items[i].correct == report.items[i].correct);
    CHECK(parallel.items[i].combined_sim ==
          doctest::Approx(report.items[i].combined_sim));
  }
}

TEST_CASE("evaluate raises GoldExecutionError on a broken gold query") {
  auto store = make_basketball_store();
  StoreLookup lookup = [&](const std::string&) -> const graph::GraphStore& {
    return store;
  };
  backends::HashEmbedBackend embed(64, 3);
  std::vector<EvalItem> items = {
      {"1", "q", "GO OVER broken gold", "GO FROM \"a\" OVER follow YIELD dst(edge)",
       "s"}};
  CHECK_THROWS_AS(evaluate(items, lookup, embed), GoldExecutionError);
}

TEST_CASE("classify_error applies the taxonomy rules in order") {
  ErrorEvidence ev;
  ev.correct = true;
  CHECK(classify_error(ev) == ErrorCategory::None);

  ev = {};
  ev.parsed = false;
  CHECK(classify_error(ev) == ErrorCategory::SyntaxError);

  ev = {};
  ev.parsed = true;
  ev.have_trace = true;
  ev.gold_schema_names = {"follow"};
  ev.ranker_schema = {"serve"};
  CHECK(classify_error(ev) == ErrorCategory::SchemaSelection);

  ev.ranker_schema = {"follow"};
  ev.gold_crud = {"GO"};
  ev.ranker_crud = {"MATCH"};
  CHECK(classify_error(ev) == ErrorCategory::SkeletonSelection);

  ev.ranker_crud = {"GO"};
  ev.gold_references_vid = true;
  ev.rewrite_matched_any = false;
  CHECK(classify_error(ev) == ErrorCategory::NoRelatedInformation);

  ev.rewrite_matched_any = true;
  ev.ca = 0.95;
  CHECK(classify_error(ev) == ErrorCategory::QueryMisunderstanding);

  ev.ca = 0.2;
  CHECK(classify_error(ev) == ErrorCategory::Other);
}

TEST_CASE("error category names are stable snake_case identifiers") {
  CHECK(error_category_name(ErrorCategory::SchemaSelection) == "schema_selection");
  CHECK(error_category_name(ErrorCategory::SkeletonSelection) ==
        "skeleton_selection");
  CHECK(error_category_name(ErrorCategory::NoRelatedInformation) ==
        "no_related_information");
  CHECK(error_category_name(ErrorCategory::SyntaxError) == "syntax_error");
  CHECK(error_category_name(ErrorCategory::QueryMisunderstanding) ==
        "query_misunderstanding");
  CHECK(error_category_name(ErrorCategory::Other) == "other");
  CHECK(error_category_name(ErrorCategory::None) == "none");
}

TEST_CASE("format_report includes every headline metric") {
  EvalReport r;
  r.sa = 1.0;
  r.ca = 0.5;
  r.ea = 0.25;
  r.iea = 0.25;
  r.n_total = 4;
  r.n_valid = 4;
  r.n_correct = 1;
  auto text = format_report(r);
  for (const char* needle : {"SA", "CA", "EA", "IEA", "4", "1"})
    CHECK(text.find(needle) != std::string::npos);
}
