#include "nl2gql/codegen.hpp"

#include <algorithm>

#include <json.hpp>

#include "nl2gql/errors.hpp"

namespace nl2gql::codegen {

using nlohmann::json;

const SkeletonEntry* Skeleton::find(const std::string& keyword) const {
  for (const auto& e : entries)
    if (e.keyword == keyword) return &e;
  return nullptr;
}

std::vector<std::string> Skeleton::keywords() const {
  std::vector<std::string> out;
  for (const auto& e : entries) out.push_back(e.keyword);
  return out;
}

std::vector<std::string> Skeleton::crud_keywords() const {
  std::vector<std::string> out;
  for (const auto& e : entries)
    if (e.kind == KeywordKind::Crud) out.push_back(e.keyword);
  return out;
}

std::vector<std::string> Skeleton::clause_keywords() const {
  std::vector<std::string> out;
  for (const auto& e : entries)
    if (e.kind == KeywordKind::Clause) out.push_back(e.keyword);
  return out;
}

namespace {

std::string class_ident(const std::string& keyword) {
  std::string out = keyword;
  std::replace(out.begin(), out.end(), ' ', '_');
  return out;
}

void append_attr_lines(std::string& text, const std::vector<graph::AttrDef>& attrs) {
  if (attrs.empty()) {
    text += "        pass\n";
    return;
  }
  for (const auto& a : attrs) {
    text += "        self." + a.name + ": " + dtype_name(a.dtype);
    if (!a.description.empty()) text += "  # " + a.description;
    text += "\n";
  }
}

}  // namespace

CodeSchema render_code_schema(const graph::GraphSchema& schema) {
  CodeSchema out;
  std::string& text = out.text;
  text += "# Graph space: " + schema.space_name + "\n";
  text += "class Tag:\n    pass\n\nclass Edge:\n    pass\n\n";

  for (const auto& tag : schema.tags) {
    std::size_t start = text.size();
    std::string base = tag.parent ? *tag.parent : std::string("Tag");
    text += "class " + tag.name + "(" + base + "):\n";
    text += "    \"\"\"" + tag.description + "\"\"\"\n";
    text += "    def __init__(self):\n";
    append_attr_lines(text, tag.attrs);
    text += "\n";
    out.class_index[tag.name] = {start, text.size() - start};
  }
  for (const auto& edge : schema.edges) {
    std::size_t start = text.size();
    text += "class " + edge.name + "(Edge):\n";
    text += "    \"\"\"" + edge.description + "\"\"\"\n";
    std::string srcs, dsts;
    for (const auto& t : edge.src_tags) srcs += (srcs.empty() ? "" : ", ") + t;
    for (const auto& t : edge.dst_tags) dsts += (dsts.empty() ? "" : ", ") + t;
    text += "    # from: [" + srcs + "] to: [" + dsts + "]\n";
    text += "    def __init__(self):\n";
    append_attr_lines(text, edge.attrs);
    text += "\n";
    out.class_index[edge.name] = {start, text.size() - start};
  }
  return out;
}

Skeleton builtin_skeleton() {
  Skeleton s;
  auto crud = [&](const char* kw, const char* meaning, const char* example) {
    s.entries.push_back({kw, KeywordKind::Crud, meaning, example});
  };
  auto clause = [&](const char* kw, const char* meaning, const char* example) {
    s.entries.push_back({kw, KeywordKind::Clause, meaning, example});
  };

  crud("CREATE SPACE", "Create a new graph database space",
       "CREATE SPACE my_graph(space_id: int, ...);");
  crud("CREATE TAG", "Create a vertex label, defining vertex properties",
       "CREATE TAG person(name: string, age: int);");
  crud("CREATE EDGE", "Create an edge type, defining edge properties",
       "CREATE EDGE knows(since: int);");
  crud("INSERT", "Insert new vertices or edges into the database",
       "INSERT VERTEX person(name, age) VALUES \"alice\":(\"Alice\", 30);");
  crud("GO", "Traverse the database based on specified conditions",
       "GO FROM \"alice\" OVER knows YIELD $$.person.name;");
  crud("FETCH", "Retrieve properties of vertices or edges",
       "FETCH PROP ON person \"alice\" YIELD person.name, person.age;");
  crud("LOOKUP", "Index-based query operation",
       "LOOKUP ON person WHERE person.age > 25 YIELD person.name;");
  crud("MATCH", "Match graph patterns, used for complex queries",
       "MATCH (p:person)-[:knows]->(f:person) RETURN p.person.name, f.person.name;");
  crud("UPDATE", "Update properties of vertices or edges in the database",
       "UPDATE VERTEX \"alice\" SET person.age = 31;");
  crud("UPSERT", "Insert or update operation; insert if it does not exist",
       "UPSERT VERTEX \"bob\" SET person.name = \"Bob\", person.age = 28;");
  crud("DELETE", "Delete vertices or edges from the database",
       "DELETE VERTEX \"bob\";");
  crud("GET SUBGRAPH", "Obtain a subgraph of the graph",
       "GET SUBGRAPH 2 STEPS FROM \"alice\" YIELD VERTICES AS friends, EDGES AS relationships;");
  crud("FIND PATH", "Find a path between two vertices",
       "FIND SHORTEST PATH FROM \"alice\" TO \"bob\" OVER * YIELD path as p;");

  clause("GROUP BY", "Group results by a variable and apply aggregation functions",
         "GO FROM \"player100\" OVER follow BIDIRECT YIELD $$.player.name as Name | "
         "GROUP BY $-.Name YIELD $-.Name as Player, count(*) AS Name_Count");
  clause("LIMIT", "Limit the number of rows returned by a query",
         "GO FROM \"player100\" OVER follow REVERSELY YIELD $$.player.name AS Friend, "
         "$$.player.age AS Age | ORDER BY $-.Age, $-.Friend | LIMIT 1, 3");
  clause("SKIP", "Skip a number of rows before starting to return rows from a query",
         "MATCH (v:player{name:\"Tim Duncan\"}) --> (v2) RETURN v2.player.name AS Name, "
         "v2.player.age AS Age ORDER BY Age DESC SKIP 1");
  clause("SAMPLE", "Sample a specified list of steps in a traversal",
         "GO 3 STEPS FROM \"player100\" OVER * YIELD properties($$).name AS NAME, "
         "properties($$).age AS Age SAMPLE [1,2,3]");
  clause("ORDER BY", "Sort the results of a query by one or more expressions",
         "FETCH PROP ON player \"player100\", \"player101\", \"player102\", \"player103\" "
         "YIELD player.age AS age, player.name AS name | ORDER BY $-.age ASC, $-.name DESC");
  clause("WHERE", "Filter the results of a query based on specified conditions",
         "MATCH (v:player) WHERE v.player.name == \"Tim Duncan\" XOR (v.player.age < 30 AND "
         "v.player.name == \"Yao Ming\") OR NOT (v.player.name == \"Yao Ming\" OR "
         "v.player.name == \"Tim Duncan\") RETURN v.player.name, v.player.age");
  clause("WITH", "Use the results of a match expression for further processing",
         "MATCH p=(v:player{name:\"Tim Duncan\"})--() WITH nodes(p) AS n UNWIND n AS n1 "
         "RETURN DISTINCT n1");
  clause("UNWIND", "Expand a list and return each element as a separate row",
         "UNWIND [1,2,3] AS n RETURN n");
  return s;
}

Skeleton load_skeleton(const std::string& document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::exception& e) {
    throw ParseError(std::string("skeleton document: ") + e.what());
  }
  Skeleton s;
  try {
    for (const auto& ej : j) {
      SkeletonEntry entry;
      entry.keyword = ej.at("keyword").get<std::string>();
      std::string kind = ej.at("kind").get<std::string>();
      if (kind == "crud") entry.kind = KeywordKind::Crud;
      else if (kind == "clause") entry.kind = KeywordKind::Clause;
      else throw ParseError("skeleton entry " + entry.keyword + ": unknown kind " + kind);
      entry.meaning = ej.at("meaning").get<std::string>();
      entry.example = ej.at("example").get<std::string>();
      if (entry.keyword.empty() || entry.example.empty())
        throw ParseError("skeleton entry with empty keyword or example");
      if (s.find(entry.keyword))
        throw ParseError("duplicate skeleton keyword " + entry.keyword);
      s.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("skeleton document: ") + e.what());
  }
  return s;
}

std::string render_skeleton(const Skeleton& skeleton,
                            const std::set<std::string>& selected) {
  std::string offenders;
  for (const auto& kw : selected) {
    if (!skeleton.find(kw)) offenders += (offenders.empty() ? "" : ", ") + kw;
  }
  if (!offenders.empty()) throw UnknownKeyword("unknown skeleton keyword(s): " + offenders);

  std::string text = "# GQL skeleton: keywords with meaning and example\n";
  for (const auto& entry : skeleton.entries) {
    if (!selected.count(entry.keyword)) continue;
    const char* base = entry.kind == KeywordKind::Crud ? "CRUD" : "Clause";
    text += "\nclass " + class_ident(entry.keyword) + "(" + base + "):\n";
    text += "    \"\"\"" + entry.meaning + "\"\"\"\n";
    text += "    # Example: " + entry.example + "\n";
  }
  return text;
}

}  // namespace nl2gql::codegen
