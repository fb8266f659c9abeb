#include <doctest.h>

#include "nl2gql/codegen.hpp"
#include "nl2gql/gql/parser.hpp"

using namespace nl2gql;
using namespace nl2gql::gql;

namespace {

bool ok(const std::string& text) {
  return std::holds_alternative<ValidationOk>(validate(text));
}

}  // namespace

TEST_CASE("gold query corpus validates") {
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
  for (const char* q : golds) {
    INFO(q);
    CHECK(ok(q));
  }
}

TEST_CASE("bare attribute names in LOOKUP filters are rejected") {
  CHECK_FALSE(ok(
      "LOOKUP ON player WHERE age >= 29.5 YIELD id(vertex) as ID, "
      "player.age as Age"));
  // Qualified form of the same query is fine.
  CHECK(ok(
      "LOOKUP ON player WHERE player.age >= 29.5 YIELD id(vertex) as ID, "
      "player.age as Age"));
}

TEST_CASE("every builtin skeleton example parses") {
  auto sk = codegen::builtin_skeleton();
  for (const auto& e : sk.entries) {
    INFO(e.keyword << ": " << e.example);
    CHECK(ok(e.example));
  }
}

TEST_CASE("syntax errors are reported, not crashed on") {
  for (const char* bad : {
           "GO OVER FROM x",
           "",
           "   \t  ",
           "GO FROM",
           "GO FROM \"a\" OVER",
           "LOOKUP ON",
           "MATCH (n:",
           "FETCH PROP ON",
           "GO FROM \"a\" OVER e YIELD",
           "GO FROM \"unterminated OVER e",
           "| LIMIT 3",
           "GO FROM \"a\" OVER e YIELD dst(edge) |",
           "GO FROM \"a\" OVER e YIELD dst(edge) | NONSENSE 3",
       }) {
    INFO(bad);
    CHECK_FALSE(ok(bad));
  }
}

TEST_CASE("recognized-but-unsupported forms validate and flag as unsupported") {
  for (const char* q : {
           "INSERT VERTEX player(name, age) VALUES \"p9\": (\"Nobody\", 20)",
           "CREATE TAG player(name string, age int)",
           "UNWIND [1, 2, 3] AS x RETURN x",
       }) {
    INFO(q);
    REQUIRE(ok(q));
    CHECK(is_unsupported(parse(q)));
  }
  CHECK_FALSE(is_unsupported(parse("GO FROM \"a\" OVER e YIELD dst(edge)")));
}

TEST_CASE("GO statement structure") {
  auto stmt = parse(
      "GO 2 STEPS FROM \"a\", \"b\" OVER like, serve REVERSELY "
      "WHERE $$.player.age > 30 YIELD DISTINCT $.player.name AS n");
  auto& go = std::get<GoStmt>(stmt.head);
  CHECK(go.steps_min == 2);
  CHECK(go.steps_max == 2);
  CHECK(go.from_vids == std::vector<std::string>{"a", "b"});
  CHECK(go.over == std::vector<std::string>{"like", "serve"});
  CHECK(go.direction == GoDirection::Reversely);
  REQUIRE(go.where != nullptr);
  CHECK(go.yield_distinct);
  REQUIRE(go.yield_items.size() == 1);
  CHECK(go.yield_items[0].alias == "n");
}

TEST_CASE("GO variants: ranges, wildcard edges, sample") {
  auto range = parse("GO 1 TO 3 STEPS FROM \"a\" OVER e YIELD dst(edge)");
  auto& g1 = std::get<GoStmt>(range.head);
  CHECK(g1.steps_min == 1);
  CHECK(g1.steps_max == 3);

  auto star = parse("GO FROM \"a\" OVER * BIDIRECT YIELD dst(edge)");
  auto& g2 = std::get<GoStmt>(star.head);
  CHECK(g2.over_all);
  CHECK(g2.direction == GoDirection::Bidirect);

  auto sampled =
      parse("GO 2 STEPS FROM \"a\" OVER e YIELD dst(edge) SAMPLE [2, 1]");
  auto& g3 = std::get<GoStmt>(sampled.head);
  REQUIRE(g3.sample.has_value());
  CHECK(*g3.sample == std::vector<std::int64_t>{2, 1});
}

TEST_CASE("MATCH pattern structure and the two-hop ceiling") {
  auto stmt = parse(
      "MATCH (n: player {name: 'Tim Duncan'}) - [e: follow] -> (m) RETURN m");
  auto& m = std::get<MatchStmt>(stmt.head);
  REQUIRE(m.nodes.size() == 2);
  REQUIRE(m.edges.size() == 1);
  CHECK(m.nodes[0].tag == "player");
  CHECK(m.nodes[0].props.at("name") == Value(std::string("Tim Duncan")));
  CHECK(m.edges[0].etype == "follow");
  CHECK(m.edges[0].dir == EdgeDir::Out);

  // Three hops parse but land in the unsupported bucket.
  auto deep = parse("MATCH (a) - [] - (b) - [] - (c) - [] - (d) RETURN d");
  CHECK(is_unsupported(deep));
}

TEST_CASE("pipes split into stages") {
  auto stmt = parse(
      "LOOKUP ON player WHERE player.age >= 30 YIELD player.age AS a "
      "| ORDER BY $-.a DESC | LIMIT 2, 3 | YIELD $-.a AS top");
  REQUIRE(stmt.stages.size() == 3);
  auto& ob = std::get<OrderByStage>(stmt.stages[0]);
  REQUIRE(ob.keys.size() == 1);
  CHECK_FALSE(ob.keys[0].ascending);
  auto& lim = std::get<LimitStage>(stmt.stages[1]);
  CHECK(lim.offset == 2);
  CHECK(lim.count == 3);
  CHECK(std::holds_alternative<YieldStage>(stmt.stages[2]));
}

TEST_CASE("render produces canonical text that reparses to the same AST") {
  const char* queries[] = {
      "go from 'a' over like reversely yield dst(edge) as d",
      "LOOKUP ON player WHERE player.age >= 29.5 YIELD id(vertex) as name, "
      "player.age AS Age",
      "FETCH PROP ON player \"player100\" YIELD player.age",
      "MATCH (n: player {name: 'Tim Duncan'}) - [e: follow] -> (m) RETURN m",
      "GO FROM \"a\" OVER e YIELD id($) AS vid | RETURN $-.vid AS dst",
      "GO FROM \"a\" OVER e YIELD $.player.name AS n | GROUP BY $-.n YIELD "
      "$-.n, count(*) AS c | ORDER BY $-.c | SKIP 1 | LIMIT 5",
  };
  for (const char* q : queries) {
    INFO(q);
    auto once = render(parse(q));
    auto twice = render(parse(once));
    CHECK(once == twice);  // canonical form is a fixed point
  }
}

TEST_CASE("profile extracts the surface inventory") {
  auto p = profile(parse(
      "GO 2 STEPS FROM \"player100\" OVER follow WHERE $$.player.age > 30 "
      "YIELD $.player.name | LIMIT 3"));
  CHECK(p.crud == std::vector<std::string>{"GO"});
  CHECK(p.clauses == std::vector<std::string>{"WHERE", "LIMIT"});
  CHECK(p.schema_names == std::vector<std::string>{"follow", "player"});
  CHECK(p.vids == std::vector<std::string>{"player100"});

  auto u = profile(parse("CREATE TAG player(name string)"));
  CHECK(u.crud == std::vector<std::string>{"CREATE TAG"});
}

TEST_CASE("tokenizer: comments, keywords case-folded, variables") {
  auto toks = tokenize("GO from \"a\" // trailing note");
  REQUIRE(toks.size() >= 3);
  CHECK(toks[0].kind == TokenKind::Keyword);
  CHECK(toks[0].text == "GO");
  CHECK(toks[1].text == "FROM");
  CHECK(toks[2].kind == TokenKind::StringLit);
  CHECK(toks.back().kind == TokenKind::End);

  CHECK_THROWS_AS(tokenize("GO FROM \"never closed"), GqlSyntaxError);
}
