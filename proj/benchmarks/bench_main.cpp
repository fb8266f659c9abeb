#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "nl2gql/align.hpp"
#include "nl2gql/backends.hpp"
#include "nl2gql/eval.hpp"
#include "nl2gql/gql/executor.hpp"
#include "nl2gql/gql/parser.hpp"
#include "nl2gql/graph_store.hpp"

using namespace nl2gql;

namespace {

graph::GraphSchema bench_schema() {
  graph::GraphSchema s;
  s.space_name = "bench";
  s.tags = {{"player", "", std::nullopt,
             {{"name", Dtype::String, ""}, {"age", Dtype::Int, ""}}}};
  s.edges = {{"follow", "", {"player"}, {"player"}, {{"w", Dtype::Int, ""}}}};
  return s;
}

graph::GraphStore bench_store(int n_nodes, int n_edges) {
  std::mt19937_64 rng(1);
  std::vector<graph::NodeRecord> nodes;
  for (int i = 0; i < n_nodes; ++i)
    nodes.push_back({"v" + std::to_string(i),
                     "player",
                     {{"name", std::string("name") + std::to_string(i)},
                      {"age", static_cast<std::int64_t>(18 + i % 30)}}});
  std::vector<graph::EdgeRecord> edges;
  std::set<std::pair<int, int>> seen;
  while (static_cast<int>(edges.size()) < n_edges) {
    int a = static_cast<int>(rng() % n_nodes);
    int b = static_cast<int>(rng() % n_nodes);
    if (!seen.insert({a, b}).second) continue;
    edges.push_back({"v" + std::to_string(a), "v" + std::to_string(b), "follow",
                     0, {{"w", static_cast<std::int64_t>(rng() % 100)}}});
  }
  return graph::GraphStore(bench_schema(), std::move(nodes), std::move(edges));
}

void BM_ParseGo(benchmark::State& state) {
  const std::string q =
      "GO 2 STEPS FROM \"v0\" OVER follow WHERE $$.player.age > 30 "
      "YIELD $.player.name AS n | ORDER BY $-.n | LIMIT 10";
  for (auto _ : state) benchmark::DoNotOptimize(gql::parse(q));
}
BENCHMARK(BM_ParseGo);

void BM_ParseMatch(benchmark::State& state) {
  const std::string q =
      "MATCH (n: player {name: 'name1'}) - [e: follow] -> (m) RETURN m";
  for (auto _ : state) benchmark::DoNotOptimize(gql::parse(q));
}
BENCHMARK(BM_ParseMatch);

void BM_ExecuteTwoHop(benchmark::State& state) {
  auto store = bench_store(static_cast<int>(state.range(0)),
                           static_cast<int>(state.range(0)) * 4);
  auto stmt = gql::parse(
      "GO 2 STEPS FROM \"v0\" OVER follow YIELD DISTINCT dst(edge)");
  for (auto _ : state) benchmark::DoNotOptimize(gql::execute(stmt, store));
}
BENCHMARK(BM_ExecuteTwoHop)->Arg(64)->Arg(256)->Arg(1024);

void BM_Levenshtein(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::string a, b;
  for (int i = 0; i < static_cast<int>(state.range(0)); ++i) {
    a += static_cast<char>('a' + rng() % 26);
    b += static_cast<char>('a' + rng() % 26);
  }
  for (auto _ : state) benchmark::DoNotOptimize(align::levenshtein(a, b));
}
BENCHMARK(BM_Levenshtein)->Arg(16)->Arg(64)->Arg(256);

void BM_Retrieve(benchmark::State& state) {
  auto store = bench_store(static_cast<int>(state.range(0)),
                           static_cast<int>(state.range(0)) * 2);
  auto index = align::build_index(store);
  backends::HashEmbedBackend embed(256, 3);
  const std::string query = "Who does name17 follow in the league?";
  for (auto _ : state)
    benchmark::DoNotOptimize(align::retrieve(query, index, embed));
}
BENCHMARK(BM_Retrieve)->Arg(64)->Arg(256);

void BM_HashEmbed(benchmark::State& state) {
  backends::HashEmbedBackend embed(256, 3);
  std::vector<std::string> texts = {
      "Who does Tim Duncan follow?",
      "Which team does Tony Parker serve?",
      "How old is Tim Duncan?",
  };
  for (auto _ : state) benchmark::DoNotOptimize(embed.embed(texts));
}
BENCHMARK(BM_HashEmbed);

void BM_CombinedSimilarity(benchmark::State& state) {
  gql::ResultTable gold, gen;
  gold.columns = gen.columns = {"name"};
  for (int i = 0; i < 50; ++i) {
    gold.rows.push_back({Value(std::string("player") + std::to_string(i))});
    gen.rows.push_back({Value(std::string("player") + std::to_string(i + 5))});
  }
  backends::HashEmbedBackend embed(128, 3);
  auto scorer = eval::make_embed_scorer(embed);
  eval::SimilarityParams p;
  for (auto _ : state)
    benchmark::DoNotOptimize(eval::combined_similarity(gold, gen, p, scorer));
}
BENCHMARK(BM_CombinedSimilarity);

}  // namespace

BENCHMARK_MAIN();
