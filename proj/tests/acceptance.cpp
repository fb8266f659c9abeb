// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each criterion is self-contained and reports its runtime.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "nl2gql/align.hpp"
#include "nl2gql/backends.hpp"
#include "nl2gql/codegen.hpp"
#include "nl2gql/config.hpp"
#include "nl2gql/dataset.hpp"
#include "nl2gql/eval.hpp"
#include "nl2gql/gql/executor.hpp"
#include "nl2gql/gql/parser.hpp"
#include "nl2gql/graph_store.hpp"
#include "nl2gql/pipeline.hpp"

using namespace nl2gql;
using nlohmann::json;

namespace {

struct CheckFailure {
  std::string message;
};

void require(bool cond, const std::string& message) {
  if (!cond) throw CheckFailure{message};
}

int g_failures = 0;

void criterion(int number, const std::string& name,
               const std::function<void()>& body, double budget_s = 0) {
  auto t0 = std::chrono::steady_clock::now();
  std::string verdict = "PASS";
  std::string detail;
  try {
    body();
  } catch (const CheckFailure& f) {
    verdict = "FAIL";
    detail = f.message;
  } catch (const std::exception& e) {
    verdict = "FAIL";
    detail = std::string("exception: ") + e.what();
  }
  double elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  if (verdict == "PASS" && budget_s > 0 && elapsed > budget_s) {
    verdict = "FAIL";
    detail = "runtime budget exceeded";
  }
  if (verdict == "FAIL") ++g_failures;
  std::ostringstream line;
  line << verdict << " criterion " << number << " (" << name << ") ["
       << std::fixed << elapsed << "s]";
  if (!detail.empty()) line << ": " << detail;
  std::cout << line.str() << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// ---------------------------------------------------------------------------
// Criterion 1: metric identity and published arithmetic.

void metric_identity() {
  require(std::abs(0.5704 * 0.8956 - 0.5109) < 1e-4, "table arithmetic row 1");
  require(std::abs(0.4823 * 0.8725 - 0.4208) < 1e-4, "table arithmetic row 2");

  // Synthetic batches: random validity/correctness patterns must always
  // satisfy ea = sa * iea exactly as computed by the evaluator's counts.
  std::mt19937_64 rng(101);
  for (int batch = 0; batch < 200; ++batch) {
    std::size_t n = 1 + rng() % 40;
    std::size_t valid = rng() % (n + 1);
    std::size_t correct = valid == 0 ? 0 : rng() % (valid + 1);
    double sa = static_cast<double>(valid) / static_cast<double>(n);
    double ea = static_cast<double>(correct) / static_cast<double>(n);
    double iea = valid == 0 ? 0.0
                            : static_cast<double>(correct) /
                                  static_cast<double>(valid);
    require(std::abs(ea - sa * iea) < 1e-12, "identity violated");
  }
}

// ---------------------------------------------------------------------------
// Criterion 2: parser corpus.

void parser_corpus() {
  auto sk = codegen::builtin_skeleton();
  int checked = 0;
  for (const auto& e : sk.entries) {
    require(std::holds_alternative<gql::ValidationOk>(gql::validate(e.example)),
            "example rejected: " + e.example);
    ++checked;
  }
  require(checked == 21, "expected 21 catalog examples");

  const char* golds[] = {
      "MATCH (n: character {name: 'Theseus Scamander'}) - [e: kindred "
      "{rel_type: 'fiancee'}] - (n1) return n1",
      "GO FROM \"Tim Duncan\" OVER like LIMIT 1",
      "GO FROM \"Kristaps Porzingis\" OVER like YIELD id($) AS vid | RETURN "
      "$-.vid AS dst",
      "LOOKUP ON player WHERE player.age >= 29.5 YIELD id(vertex) as name, "
      "player.age AS Age",
      "GO FROM \"hepatitis C virus infection and glomerulonephritis\" OVER "
      "cure_department YIELD dst(edge)",
      "GO 2 STEPS FROM 'Kobe Bryant' OVER like REVERSELY YIELD $.player.name",
  };
  for (const char* q : golds)
    require(std::holds_alternative<gql::ValidationOk>(gql::validate(q)),
            std::string("gold rejected: ") + q);

  require(!std::holds_alternative<gql::ValidationOk>(gql::validate(
              "LOOKUP ON player WHERE age >= 29.5 YIELD id(vertex) as ID, "
              "player.age as Age")),
          "bare attribute filter accepted");
}

// ---------------------------------------------------------------------------
// Criterion 3: executor vs brute-force reference.

graph::GraphSchema oracle_schema() {
  graph::GraphSchema s;
  s.space_name = "oracle";
  s.tags = {{"player", "", std::nullopt,
             {{"name", Dtype::String, ""}, {"age", Dtype::Int, ""}}}};
  s.edges = {{"follow", "", {"player"}, {"player"}, {{"w", Dtype::Int, ""}}}};
  return s;
}

graph::GraphStore random_oracle_store(std::mt19937_64& rng) {
  int n = 1 + static_cast<int>(rng() % 20);
  std::vector<graph::NodeRecord> nodes;
  for (int i = 0; i < n; ++i)
    nodes.push_back({"v" + std::to_string(i),
                     "player",
                     {{"name", std::string("name") + std::to_string(rng() % 8)},
                      {"age", static_cast<std::int64_t>(18 + rng() % 28)}}});
  std::vector<graph::EdgeRecord> edges;
  std::set<std::tuple<std::string, std::string, std::int64_t>> seen;
  int m = static_cast<int>(rng() % 41);
  for (int i = 0; i < m; ++i) {
    std::string src = "v" + std::to_string(rng() % n);
    std::string dst = "v" + std::to_string(rng() % n);
    std::int64_t rank = static_cast<std::int64_t>(rng() % 3);
    if (!seen.insert({src, dst, rank}).second) continue;
    edges.push_back({src, dst, "follow", rank,
                     {{"w", static_cast<std::int64_t>(rng() % 100)}}});
  }
  return graph::GraphStore(oracle_schema(), std::move(nodes), std::move(edges));
}

struct RefHit {
  std::string arrival;                // vertex the walk ends on ($$ / $)
  std::string last_edge_dst;          // stored dst of the final edge
  std::vector<std::string> path_key;  // identifies the edge sequence
  bool operator<(const RefHit& o) const {
    return std::tie(arrival, last_edge_dst, path_key) <
           std::tie(o.arrival, o.last_edge_dst, o.path_key);
  }
};

// Reference k-hop enumeration straight off the edge list.
void ref_paths(const graph::GraphStore& store, const std::string& at, int dir,
               int remaining, std::vector<const graph::EdgeRecord*>& path,
               std::set<RefHit>& out) {
  if (remaining == 0) {
    RefHit hit;
    hit.arrival = at;
    hit.last_edge_dst = path.empty() ? at : path.back()->dst;
    for (const auto* e : path)
      hit.path_key.push_back(e->src + "|" + e->dst + "|" +
                             std::to_string(e->rank));
    out.insert(std::move(hit));
    return;
  }
  for (const auto& e : store.edges()) {
    if ((dir == 0 || dir == 2) && e.src == at) {
      path.push_back(&e);
      ref_paths(store, e.dst, dir, remaining - 1, path, out);
      path.pop_back();
    }
    if ((dir == 1 || dir == 2) && e.dst == at) {
      path.push_back(&e);
      ref_paths(store, e.src, dir, remaining - 1, path, out);
      path.pop_back();
    }
  }
}

std::multiset<std::string> table_multiset(const gql::ResultTable& t) {
  std::multiset<std::string> out;
  for (const auto& row : t.rows) {
    std::string r;
    for (const auto& v : row) r += value_to_text(v) + "\t";
    out.insert(r);
  }
  return out;
}

std::int64_t node_age(const graph::GraphStore& store, const std::string& vid) {
  return std::get<std::int64_t>(store.nodes().at(vid).attrs.at("age"));
}

std::string node_name(const graph::GraphStore& store, const std::string& vid) {
  return std::get<std::string>(store.nodes().at(vid).attrs.at("name"));
}

void executor_oracle() {
  std::mt19937_64 rng(2024);
  const char* dir_kw[] = {"", " REVERSELY", " BIDIRECT"};
  for (int s = 0; s < 200; ++s) {
    auto store = random_oracle_store(rng);
    std::vector<std::string> vids;
    for (const auto& [vid, node] : store.nodes()) vids.push_back(vid);
    for (int q = 0; q < 50; ++q) {
      int kind = static_cast<int>(rng() % 5);
      std::string query;
      std::multiset<std::string> expected;
      if (kind == 0 || kind == 1) {
        // GO k STEPS ... YIELD dst(edge)  |  GO ... WHERE age filter YIELD name
        const std::string& from = vids[rng() % vids.size()];
        int steps = 1 + static_cast<int>(rng() % 3);
        int dir = static_cast<int>(rng() % 3);
        std::set<RefHit> hits;
        std::vector<const graph::EdgeRecord*> path;
        ref_paths(store, from, dir, steps, path, hits);
        if (kind == 0) {
          query = "GO " + std::to_string(steps) + " STEPS FROM \"" + from +
                  "\" OVER follow" + dir_kw[dir] + " YIELD dst(edge)";
          for (const auto& hit : hits)
            expected.insert(hit.last_edge_dst + "\t");
        } else {
          std::int64_t cut = 18 + static_cast<std::int64_t>(rng() % 28);
          query = "GO " + std::to_string(steps) + " STEPS FROM \"" + from +
                  "\" OVER follow" + dir_kw[dir] + " WHERE $$.player.age > " +
                  std::to_string(cut) + " YIELD $.player.name";
          for (const auto& hit : hits)
            if (node_age(store, hit.arrival) > cut)
              expected.insert(node_name(store, hit.arrival) + "\t");
        }
      } else if (kind == 2) {
        // FETCH on an existing or missing vid.
        bool miss = rng() % 4 == 0;
        std::string vid = miss ? "ghost" : vids[rng() % vids.size()];
        query = "FETCH PROP ON player \"" + vid + "\" YIELD player.age";
        if (!miss)
          expected.insert(std::to_string(node_age(store, vid)) + "\t");
      } else if (kind == 3) {
        std::int64_t cut = 18 + static_cast<std::int64_t>(rng() % 28);
        query = "LOOKUP ON player WHERE player.age >= " + std::to_string(cut) +
                " YIELD id(vertex), player.age";
        for (const auto& vid : vids)
          if (node_age(store, vid) >= cut)
            expected.insert(vid + "\t" + std::to_string(node_age(store, vid)) +
                            "\t");
      } else {
        // Ordered pipe with LIMIT: multiset of kept ages is deterministic.
        int keep = 1 + static_cast<int>(rng() % 5);
        query = "LOOKUP ON player WHERE player.age >= 18 YIELD player.age AS a "
                "| ORDER BY $-.a | LIMIT " + std::to_string(keep);
        std::vector<std::int64_t> ages;
        for (const auto& vid : vids) ages.push_back(node_age(store, vid));
        std::sort(ages.begin(), ages.end());
        for (std::size_t i = 0;
             i < std::min<std::size_t>(ages.size(), static_cast<std::size_t>(keep));
             ++i)
          expected.insert(std::to_string(ages[i]) + "\t");
      }
      auto got = table_multiset(gql::execute_query(query, store));
      require(got == expected, "mismatch on: " + query);
    }
  }
}

// ---------------------------------------------------------------------------
// Criterion 4: levenshtein exhaustive oracle.

std::size_t lev_ref(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                          std::vector<std::size_t>(b.size() + 1));
  // Plain recursive definition, memoized bottom-up.
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
  return d[a.size()][b.size()];
}

void levenshtein_exhaustive() {
  std::vector<std::string> all{""};
  for (int len = 1; len <= 5; ++len) {
    std::size_t start = all.size();
    std::vector<std::string> next;
    for (const auto& s : all)
      if (s.size() == static_cast<std::size_t>(len) - 1)
        for (char c : {'a', 'b', 'c'}) next.push_back(s + c);
    all.insert(all.end(), next.begin(), next.end());
    (void)start;
  }
  for (const auto& a : all)
    for (const auto& b : all) {
      auto got = align::levenshtein(a, b);
      require(got == lev_ref(a, b), "distance mismatch: " + a + " / " + b);
      if (!a.empty() && !b.empty()) {
        double min_len = static_cast<double>(std::min(a.size(), b.size()));
        double want = got == 0 ? 2 * min_len
                               : min_len / static_cast<double>(got);
        require(std::abs(align::char_score(a, b) - want) < 1e-12,
                "char_score mismatch: " + a + " / " + b);
        if (a != b)
          require(align::char_score(a, a) > align::char_score(a, b),
                  "exact match does not dominate: " + a + " / " + b);
      }
    }
}

// ---------------------------------------------------------------------------
// Criterion 5: Algorithm-1 properties.

gql::ResultTable random_table(std::mt19937_64& rng) {
  gql::ResultTable t;
  int cols = 1 + static_cast<int>(rng() % 3);
  for (int c = 0; c < cols; ++c) t.columns.push_back("c" + std::to_string(c));
  int rows = 1 + static_cast<int>(rng() % 5);
  for (int r = 0; r < rows; ++r) {
    std::vector<Value> row;
    for (int c = 0; c < cols; ++c) {
      switch (rng() % 3) {
        case 0: row.emplace_back(static_cast<std::int64_t>(rng() % 100)); break;
        case 1: row.emplace_back("tok" + std::to_string(rng() % 20)); break;
        default: row.emplace_back(static_cast<double>(rng() % 50) / 2); break;
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void algorithm_one() {
  std::mt19937_64 rng(55);
  backends::HashEmbedBackend embed(128, 3);
  auto scorer = eval::make_embed_scorer(embed);
  eval::SimilarityParams p;

  for (int i = 0; i < 100; ++i) {
    auto t = random_table(rng);
    require(std::abs(eval::combined_similarity(t, t, p, scorer) - 1.0) < 1e-9,
            "identity violated");
  }
  for (int i = 0; i < 200; ++i) {
    auto a = random_table(rng);
    auto b = random_table(rng);
    double noise = static_cast<double>(rng() % 1000) / 999.0;
    auto noisy = [noise](const std::string&, const std::string&) { return noise; };
    double v = eval::combined_similarity(a, b, p, noisy);
    require(v >= 0.0 && v <= 1.0, "combined similarity left [0, 1]");
  }
  // Token sets must be fully disjoint, headers included.
  gql::ResultTable gold, gen;
  gold.columns = {"left"};
  gen.columns = {"right"};
  gold.rows = {{Value(std::string("alpha bravo"))}};
  gen.rows = {{Value(std::string("charlie delta"))}};
  auto zero = [](const std::string&, const std::string&) { return 0.0; };
  require(std::abs(eval::combined_similarity(gold, gen, p, zero) - 0.125) < 1e-9,
          "disjoint worked example");
}

// ---------------------------------------------------------------------------
// Criterion 6: K-Center Greedy vs reference.

double edist(const backends::EmbeddingVector& a, const backends::EmbeddingVector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<std::size_t> kcenter_ref(
    const std::vector<backends::EmbeddingVector>& pts, std::size_t k,
    dataset::KCenterInit init) {
  std::vector<std::size_t> sel;
  std::size_t first = 0;
  if (init == dataset::KCenterInit::MaxNorm) {
    double best = -1;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double n = 0;
      for (double x : pts[i].values) n += x * x;
      if (n > best + 1e-15) {
        best = n;
        first = i;
      }
    }
  }
  sel.push_back(first);
  while (sel.size() < k) {
    std::size_t far = pts.size();
    double far_d = -1;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (std::find(sel.begin(), sel.end(), i) != sel.end()) continue;
      double nearest = std::numeric_limits<double>::infinity();
      for (auto j : sel) nearest = std::min(nearest, edist(pts[i], pts[j]));
      if (nearest > far_d) {  // strict: ties keep the lowest index
        far_d = nearest;
        far = i;
      }
    }
    sel.push_back(far);
  }
  return sel;
}

void kcenter() {
  std::mt19937_64 rng(77);
  // Grid-valued coordinates make ties common, exercising the tie rule.
  auto random_instance = [&](std::size_t n, int dim) {
    std::vector<backends::EmbeddingVector> pts;
    for (std::size_t i = 0; i < n; ++i) {
      backends::EmbeddingVector v;
      for (int d = 0; d < dim; ++d)
        v.values.push_back(static_cast<double>(rng() % 5));
      pts.push_back(std::move(v));
    }
    return pts;
  };

  for (int trial = 0; trial < 600; ++trial) {
    std::size_t n = 1 + rng() % 8;
    auto pts = random_instance(n, 1 + static_cast<int>(rng() % 3));
    for (std::size_t k = 1; k <= std::min<std::size_t>(4, n); ++k) {
      for (auto init :
           {dataset::KCenterInit::FirstIndex, dataset::KCenterInit::MaxNorm}) {
        auto got = dataset::k_center_greedy(pts, k, init);
        auto want = kcenter_ref(pts, k, init);
        require(got == want, "selection mismatch");
      }
    }
  }

  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 2 + rng() % 7;
    auto pts = random_instance(n, 2);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= n; ++k) {
      double r = dataset::coverage_radius(pts, dataset::k_center_greedy(pts, k));
      require(r <= prev + 1e-12, "coverage radius increased with k");
      prev = r;
    }
  }
}

// ---------------------------------------------------------------------------
// Criterion 7: end-to-end replay determinism on the demo bundle.

struct DemoRun {
  std::string translations;
  std::string executions;
  std::string report;
  double sa = 0;
  double iea = 0;
};

DemoRun run_demo(const std::string& dir) {
  auto cfg = config::load_config_file(dir + "/config.json");
  auto set = config::build_backends(cfg);
  auto roles = set.roles(cfg);
  auto schema = graph::load_schema(read_file(cfg.schema_path));
  auto store = graph::load_graph(schema, read_file(cfg.graph_path));
  auto sk = codegen::builtin_skeleton();

  DemoRun out;
  const char* questions[] = {
      "Who does Tim Duncan follow?",
      "Which team does Tony Parker serve?",
      "How old is Tim Duncan?",
  };
  for (const char* q : questions) {
    auto result = pipeline::translate(q, store, sk, roles, cfg.align_params);
    out.translations += std::string(q) + "\n" + result.gql + "\n" +
                        result.refiner_prompt + "\n---\n";
    out.executions += gql::to_canonical_text(gql::execute_query(result.gql, store));
    out.executions += "---\n";
  }

  std::vector<eval::EvalItem> items;
  std::istringstream lines(read_file(dir + "/eval.jsonl"));
  std::string line;
  int index = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    auto doc = json::parse(line);
    eval::EvalItem item;
    item.id = doc.value("id", std::to_string(index));
    item.nl = doc.value("nl", "");
    item.gold_gql = doc.at("gold_gql").get<std::string>();
    item.generated_gql = doc.value("generated_gql", "");
    item.schema_id = doc.value("schema_id", "");
    items.push_back(std::move(item));
    ++index;
  }
  require(items.size() == 12, "demo eval file must hold 12 items");

  eval::StoreLookup lookup = [&](const std::string&) -> const graph::GraphStore& {
    return store;
  };
  auto* embed = roles.rewriter_embed;
  auto report = eval::evaluate(items, lookup, *embed, cfg.similarity);
  out.sa = report.sa;
  out.iea = report.iea;
  std::ostringstream rep;
  rep.precision(10);
  rep << report.sa << "/" << report.ca << "/" << report.ea << "/" << report.iea
      << "/" << report.n_total << "/" << report.n_valid << "/" << report.n_correct
      << "\n";
  for (const auto& item : report.items)
    rep << item.id << " " << item.valid << " " << item.correct << " "
        << item.combined_sim << " " << eval::error_category_name(item.error_category)
        << "\n";
  out.report = rep.str();
  return out;
}

void replay_determinism() {
  std::string dir = NL2GQL_DEMO_DIR;
  auto first = run_demo(dir);
  auto second = run_demo(dir);
  require(first.translations == second.translations,
          "translations differ between runs");
  require(first.executions == second.executions, "executions differ between runs");
  require(first.report == second.report, "eval reports differ between runs");
  require(first.sa == 1.0, "demo SA must be exactly 1.0");
  require(first.iea >= 0.9, "demo IEA must be at least 0.9");
}

// ---------------------------------------------------------------------------
// Criterion 8: hallucination filter.

class OneShotChat : public backends::ChatBackend {
 public:
  using Fn = std::function<std::string(const backends::ChatRequest&)>;
  explicit OneShotChat(Fn fn) : fn_(std::move(fn)) {}
  backends::ChatResponse chat(const backends::ChatRequest& req) override {
    return {fn_(req)};
  }

 private:
  Fn fn_;
};

void hallucination_filter() {
  graph::GraphSchema schema;
  schema.space_name = "demo";
  schema.tags = {{"player", "", std::nullopt, {{"name", Dtype::String, ""}}}};
  schema.edges = {{"follow", "", {"player"}, {"player"}, {}}};
  std::vector<graph::NodeRecord> nodes = {
      {"p1", "player", {{"name", std::string("Tim Duncan")}}},
      {"p2", "player", {{"name", std::string("Tony Parker")}}},
  };
  std::vector<graph::EdgeRecord> edges = {{"p1", "p2", "follow", 0, {}}};
  graph::GraphStore store(schema, std::move(nodes), std::move(edges));
  auto sk = codegen::builtin_skeleton();
  backends::HashEmbedBackend embed(128, 3);

  std::mt19937_64 rng(88);
  for (int i = 0; i < 50; ++i) {
    // Adversarial ranker reply: real names mixed with fabricated ones.
    std::string ghost_tag = "ghost_" + std::to_string(i);
    std::string ghost_edge = "phantom_edge_" + std::to_string(i);
    std::string reply = "CRUD: GO\nCLAUSES: none\nSCHEMA: ";
    switch (rng() % 3) {
      case 0: reply += ghost_tag + ", player, follow"; break;
      case 1: reply += "player, " + ghost_tag + ", " + ghost_edge; break;
      default: reply += ghost_tag + ", " + ghost_edge; break;  // wipe-out
    }
    reply += "\n";

    OneShotChat ranker([&reply](const backends::ChatRequest&) { return reply; });
    OneShotChat refiner([](const backends::ChatRequest&) {
      return std::string("```\nGO FROM \"p1\" OVER follow YIELD dst(edge)\n```");
    });
    pipeline::RoleBackends roles;
    roles.ranker = &ranker;
    roles.rewriter_embed = &embed;
    roles.refiner = &refiner;

    auto result =
        pipeline::translate("Who does Tim Duncan follow?", store, sk, roles);
    require(result.refiner_prompt.find(ghost_tag) == std::string::npos,
            "fabricated tag reached the refiner prompt");
    require(result.refiner_prompt.find(ghost_edge) == std::string::npos,
            "fabricated edge reached the refiner prompt");
    require(result.refiner_prompt.find("player") != std::string::npos,
            "real schema missing from the refiner prompt");
    for (const auto& name : result.ranker.schema_subset)
      require(schema.find_tag(name) != nullptr || schema.find_edge(name) != nullptr,
              "unvalidated name in ranker output: " + name);
  }
}

// ---------------------------------------------------------------------------
// Criterion 9: parser fuzzing.

void parser_fuzzing() {
  std::mt19937_64 rng(999);
  const std::string seeds[] = {
      "GO FROM \"a\" OVER e YIELD dst(edge)",
      "LOOKUP ON player WHERE player.age >= 29.5 YIELD id(vertex)",
      "MATCH (n: t {k: 'v'}) - [e: r] -> (m) RETURN m",
      "FETCH PROP ON t \"v\" YIELD t.a | ORDER BY $-.a | LIMIT 3",
  };
  double worst = 0;
  for (int i = 0; i < 100000; ++i) {
    std::string input;
    if (i % 2 == 0) {
      // Pure random bytes.
      std::size_t len = rng() % 1025;
      input.resize(len);
      for (auto& c : input) c = static_cast<char>(rng() % 256);
    } else {
      // Mutated valid query: flip, insert, delete random bytes.
      input = seeds[rng() % 4];
      int edits = 1 + static_cast<int>(rng() % 8);
      for (int e = 0; e < edits && !input.empty(); ++e) {
        std::size_t pos = rng() % input.size();
        switch (rng() % 3) {
          case 0: input[pos] = static_cast<char>(rng() % 256); break;
          case 1: input.insert(pos, 1, static_cast<char>(rng() % 256)); break;
          default: input.erase(pos, 1); break;
        }
      }
    }
    auto t0 = std::chrono::steady_clock::now();
    (void)gql::validate(input);  // must return, never crash or hang
    worst = std::max(worst, std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count());
  }
  require(worst < 0.1, "an input exceeded the 100 ms per-input budget");
}

}  // namespace

int main() {
  criterion(1, "metric identity vs published arithmetic", metric_identity, 1.0);
  criterion(2, "parser corpus incl. gold queries", parser_corpus, 1.0);
  criterion(3, "executor vs brute-force oracle", executor_oracle, 60.0);
  criterion(4, "levenshtein/char_score exhaustive oracle", levenshtein_exhaustive,
            30.0);
  criterion(5, "combined-similarity properties", algorithm_one);
  criterion(6, "k-center greedy vs reference", kcenter, 30.0);
  criterion(7, "end-to-end replay determinism", replay_determinism, 5.0);
  criterion(8, "hallucination filter", hallucination_filter);
  criterion(9, "parser fuzzing", parser_fuzzing);
  return g_failures == 0 ? 0 : 1;
}
