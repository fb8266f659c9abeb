// Regenerates the demo replay fixture from the demo schema/graph. The
// canned replies are authored here; request keys are computed through the
// same request builders the pipeline uses, so replay runs hit every key.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nl2gql/align.hpp"
#include "nl2gql/backends.hpp"
#include "nl2gql/codegen.hpp"
#include "nl2gql/graph_store.hpp"
#include "nl2gql/pipeline.hpp"

namespace {

using nlohmann::json;
using namespace nl2gql;

struct DemoCase {
  std::string nl;
  std::string ranker_reply;
  std::string gql;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regenerate the demo chat fixture"};
  std::string schema_path, graph_path, out_path;
  app.add_option("--schema", schema_path)->required();
  app.add_option("--graph", graph_path)->required();
  app.add_option("--out", out_path)->required();
  CLI11_PARSE(app, argc, argv);

  auto schema = graph::load_schema(read_file(schema_path));
  graph::GraphStore store = graph::load_graph(schema, read_file(graph_path));
  auto skeleton = codegen::builtin_skeleton();
  backends::HashEmbedBackend embed(256, 3);
  auto index = align::build_index(store);

  std::vector<DemoCase> cases = {
      {"Who does Tim Duncan follow?",
       "CRUD: GO\nCLAUSES: none\nSCHEMA: player, follow\n",
       "GO FROM \"player100\" OVER follow YIELD dst(edge)"},
      {"Which team does Tony Parker serve?",
       "CRUD: GO\nCLAUSES: none\nSCHEMA: player, team, serve\n",
       "GO FROM \"player101\" OVER serve YIELD $$.team.name"},
      {"How old is Tim Duncan?",
       "CRUD: FETCH\nCLAUSES: none\nSCHEMA: player\n",
       "FETCH PROP ON player \"player100\" YIELD player.age"},
  };

  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return 1;
  }

  for (const auto& demo : cases) {
    auto ranker_request = pipeline::make_ranker_request(schema, skeleton, demo.nl);
    out << json{{"request_key", backends::chat_request_key(ranker_request)},
                {"kind", "chat"},
                {"response", {{"content", demo.ranker_reply}}}}
               .dump()
        << "\n";

    // Reproduce the pipeline's rewriter stage to assemble the exact
    // refiner request the replay run will issue.
    pipeline::RankerOutput parsed;
    std::stringstream reply(demo.ranker_reply);
    std::string line;
    while (std::getline(reply, line)) {
      auto split = [&](std::size_t n) {
        std::vector<std::string> items;
        std::stringstream vals(line.substr(n));
        std::string item;
        while (std::getline(vals, item, ',')) {
          while (!item.empty() && item.front() == ' ') item.erase(item.begin());
          while (!item.empty() && item.back() == ' ') item.pop_back();
          if (!item.empty() && item != "none") items.push_back(item);
        }
        return items;
      };
      if (line.rfind("CRUD:", 0) == 0) parsed.crud_keywords = split(5);
      if (line.rfind("CLAUSES:", 0) == 0) parsed.clauses = split(8);
      if (line.rfind("SCHEMA:", 0) == 0) parsed.schema_subset = split(7);
    }
    auto ranker = pipeline::validate_ranker_output(parsed, schema, skeleton);
    auto matches = align::retrieve(demo.nl, index, embed);
    auto rewrite = align::rewrite(demo.nl, matches, schema);
    auto input = pipeline::build_refiner_input(ranker, rewrite, schema, skeleton);
    auto refiner_request = pipeline::make_refiner_request(input);
    out << json{{"request_key", backends::chat_request_key(refiner_request)},
                {"kind", "chat"},
                {"response", {{"content", "```ngql\n" + demo.gql + "\n```\n"}}}}
               .dump()
        << "\n";
  }

  std::cerr << "wrote " << cases.size() * 2 << " fixture records to " << out_path
            << "\n";
  return 0;
}
