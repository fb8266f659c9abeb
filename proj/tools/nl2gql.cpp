// Command-line front end: translate, validate, exec, eval, dataset, schema.
//
// Exit codes: 0 success, 1 generic/validation failure, 2 configuration
// error, 3 backend error, 4 pipeline error (stage-labeled), 5 unsupported
// statement, 6 gold-query execution error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nl2gql/config.hpp"
#include "nl2gql/dataset.hpp"
#include "nl2gql/eval.hpp"
#include "nl2gql/gql/executor.hpp"
#include "nl2gql/gql/parser.hpp"
#include "nl2gql/pipeline.hpp"

namespace {

using nlohmann::json;
using namespace nl2gql;

constexpr int kExitConfig = 2;
constexpr int kExitBackend = 3;
constexpr int kExitPipeline = 4;
constexpr int kExitUnsupported = 5;
constexpr int kExitGoldExec = 6;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
}

struct Workspace {
  config::Config cfg;
  config::BackendSet backends;
  graph::GraphSchema schema;
  std::unique_ptr<graph::GraphStore> store;
  codegen::Skeleton skeleton;
};

Workspace load_workspace(const std::string& config_path) {
  Workspace ws;
  ws.cfg = config::load_config_file(config_path);
  if (ws.cfg.schema_path.empty()) throw ConfigError("config paths.schema is required");
  ws.schema = graph::load_schema(read_file(ws.cfg.schema_path));
  if (!ws.cfg.graph_path.empty()) {
    ws.store = std::make_unique<graph::GraphStore>(
        graph::load_graph(ws.schema, read_file(ws.cfg.graph_path)));
  } else {
    ws.store = std::make_unique<graph::GraphStore>(ws.schema,
                                                   std::vector<graph::NodeRecord>{},
                                                   std::vector<graph::EdgeRecord>{});
  }
  ws.skeleton = ws.cfg.skeleton_override_path.empty()
                    ? codegen::builtin_skeleton()
                    : codegen::load_skeleton(read_file(ws.cfg.skeleton_override_path));
  ws.backends = config::build_backends(ws.cfg);
  return ws;
}

json trace_document(const pipeline::TranslationResult& result) {
  json doc;
  doc["gql"] = result.gql;
  doc["ranker"] = {{"schema_subset", result.ranker.schema_subset},
                   {"crud_keywords", result.ranker.crud_keywords},
                   {"clauses", result.ranker.clauses},
                   {"raw", result.ranker.raw},
                   {"warnings", result.ranker.warnings},
                   {"fail_open_schema", result.ranker.fail_open_schema},
                   {"fail_open_crud", result.ranker.fail_open_crud}};
  json matches = json::array();
  for (const auto& m : result.matches) {
    matches.push_back({{"span", {m.span_start, m.span_end}},
                       {"surface", m.candidate.surface},
                       {"kind", align::candidate_kind_name(m.candidate.kind)},
                       {"locator", m.candidate.locator},
                       {"u1", m.u1},
                       {"u2", m.u2}});
  }
  doc["matches"] = matches;
  json subs = json::array();
  for (const auto& s : result.rewrite.substitutions)
    subs.push_back({{"original", s.original},
                    {"canonical", s.canonical},
                    {"kind", align::candidate_kind_name(s.kind)}});
  doc["rewrite"] = {{"rewritten_query", result.rewrite.rewritten_query},
                    {"substitutions", subs},
                    {"unmatched", result.rewrite.unmatched}};
  doc["refiner_prompt"] = result.refiner_prompt;
  doc["refiner_raw"] = result.refiner_raw;
  return doc;
}

int cmd_translate(const std::string& config_path, const std::string& query,
                  const std::string& query_file, bool trace) {
  Workspace ws = load_workspace(config_path);
  std::vector<std::string> queries;
  if (!query.empty()) queries.push_back(query);
  if (!query_file.empty()) {
    std::stringstream stream(read_file(query_file));
    std::string line;
    while (std::getline(stream, line))
      if (!line.empty()) queries.push_back(line);
  }
  if (queries.empty()) throw ConfigError("no query given (use --query or --query-file)");

  auto roles = ws.backends.roles(ws.cfg);
  for (const auto& q : queries) {
    auto result =
        pipeline::translate(q, *ws.store, ws.skeleton, roles, ws.cfg.align_params);
    if (trace) {
      std::cout << trace_document(result).dump(2) << "\n";
    } else {
      std::cout << result.gql << "\n";
    }
  }
  return 0;
}

int cmd_validate(const std::string& query, const std::string& file) {
  std::vector<std::string> queries;
  if (!query.empty()) queries.push_back(query);
  if (!file.empty()) {
    std::stringstream stream(read_file(file));
    std::string line;
    while (std::getline(stream, line))
      if (!line.empty()) queries.push_back(line);
  }
  if (queries.empty()) throw ConfigError("no queries to validate");

  int failures = 0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    auto verdict = gql::validate(queries[i]);
    if (std::holds_alternative<gql::GqlSyntaxError>(verdict)) {
      const auto& err = std::get<gql::GqlSyntaxError>(verdict);
      std::cout << "line " << (i + 1) << ": " << err.message() << "\n";
      ++failures;
    } else {
      std::cout << "line " << (i + 1) << ": ok\n";
    }
  }
  return failures == 0 ? 0 : 1;
}

int cmd_exec(const std::string& config_path, const std::string& query,
             std::uint64_t seed) {
  Workspace ws = load_workspace(config_path);
  gql::ExecParams params;
  params.sample_seed = seed;
  auto table = gql::execute_query(query, *ws.store, params);
  std::cout << gql::to_canonical_text(table);
  return 0;
}

std::vector<eval::EvalItem> load_eval_items(const std::string& text) {
  std::vector<eval::EvalItem> items;
  std::stringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty()) continue;
    json doc = json::parse(line);
    eval::EvalItem item;
    item.id = doc.value("id", std::to_string(line_no));
    item.nl = doc.value("nl", "");
    item.gold_gql = doc.at("gold_gql").get<std::string>();
    item.generated_gql = doc.value("generated_gql", "");
    item.schema_id = doc.value("schema_id", "");
    items.push_back(std::move(item));
  }
  return items;
}

int cmd_eval(const std::string& config_path, const std::string& eval_file, int jobs,
             double theta_override, bool has_theta) {
  Workspace ws = load_workspace(config_path);
  auto items = load_eval_items(read_file(eval_file));
  if (items.empty()) throw ConfigError("eval file is empty: " + eval_file);

  auto roles = ws.backends.roles(ws.cfg);
  for (auto& item : items) {
    if (item.generated_gql.empty()) {
      auto result = pipeline::translate(item.nl, *ws.store, ws.skeleton, roles,
                                        ws.cfg.align_params);
      item.generated_gql = result.gql;
    }
  }

  auto params = ws.cfg.similarity;
  if (has_theta) params.theta = theta_override;
  auto embed_it = ws.backends.embed.find(ws.cfg.rewriter_embed);
  if (embed_it == ws.backends.embed.end())
    throw ConfigError("rewriter_embed backend has no embedding capability");
  const graph::GraphStore& store = *ws.store;
  auto report = eval::evaluate(
      items, [&](const std::string&) -> const graph::GraphStore& { return store; },
      *embed_it->second, params, jobs);

  json doc;
  doc["theta"] = report.theta;
  doc["sa"] = report.sa;
  doc["ca"] = report.ca;
  doc["ea"] = report.ea;
  doc["iea"] = report.iea;
  doc["n_total"] = report.n_total;
  doc["n_valid"] = report.n_valid;
  doc["n_correct"] = report.n_correct;
  json rows = json::array();
  for (const auto& r : report.items)
    rows.push_back({{"id", r.id},
                    {"valid", r.valid},
                    {"combined_sim", r.combined_sim},
                    {"ca", r.ca},
                    {"correct", r.correct},
                    {"error_category", eval::error_category_name(r.error_category)}});
  doc["items"] = rows;
  std::cout << doc.dump(2) << "\n";
  std::cerr << eval::format_report(report);
  return 0;
}

int cmd_dataset_sample(const std::string& vectors_file, std::size_t k,
                       const std::string& init_name) {
  std::vector<backends::EmbeddingVector> vectors;
  std::stringstream stream(read_file(vectors_file));
  std::string line;
  while (std::getline(stream, line)) {
    if (line.empty()) continue;
    json doc = json::parse(line);
    backends::EmbeddingVector v;
    for (const auto& x : doc) v.values.push_back(x.get<double>());
    vectors.push_back(std::move(v));
  }
  auto init = init_name == "first" ? dataset::KCenterInit::FirstIndex
                                   : dataset::KCenterInit::MaxNorm;
  auto selected = dataset::k_center_greedy(vectors, k, init);
  json doc = json::array();
  for (auto i : selected) doc.push_back(i);
  std::cout << doc.dump() << "\n";
  return 0;
}

int cmd_dataset_split(const std::string& pairs_file, double fraction,
                      std::uint64_t seed, const std::string& holdout_csv,
                      const std::string& out_train, const std::string& out_test) {
  auto pairs = dataset::load_pairs(read_file(pairs_file));
  dataset::SplitSpec spec;
  spec.train_fraction = fraction;
  spec.seed = seed;
  std::stringstream stream(holdout_csv);
  std::string name;
  while (std::getline(stream, name, ','))
    if (!name.empty()) spec.holdout_schemas.insert(name);
  auto result = dataset::split_by_schema(pairs, spec);
  write_file(out_train, dataset::serialize_pairs(result.train));
  write_file(out_test, dataset::serialize_pairs(result.test));
  std::cerr << "train=" << result.train.size() << " test=" << result.test.size()
            << (result.infeasible ? " (holdout exceeded test budget)" : "") << "\n";
  return 0;
}

int cmd_dataset_records(const std::string& config_path, const std::string& pairs_file,
                        const std::string& out_file) {
  Workspace ws = load_workspace(config_path);
  auto pairs = dataset::load_pairs(read_file(pairs_file));
  std::vector<dataset::TrainRecord> records;
  records.reserve(pairs.size());
  for (const auto& pair : pairs)
    records.push_back(dataset::build_train_record(pair, ws.schema, ws.skeleton));
  write_file(out_file, dataset::serialize_train_records(records));
  std::cerr << "wrote " << records.size() << " records\n";
  return 0;
}

int cmd_schema_codegen(const std::string& schema_path) {
  auto schema = graph::load_schema(read_file(schema_path));
  std::cout << codegen::render_code_schema(schema).text;
  return 0;
}

int cmd_schema_skeleton(const std::string& skeleton_path,
                        const std::string& keywords_csv) {
  auto skeleton = skeleton_path.empty()
                      ? codegen::builtin_skeleton()
                      : codegen::load_skeleton(read_file(skeleton_path));
  std::set<std::string> selected;
  if (keywords_csv.empty()) {
    for (const auto& kw : skeleton.keywords()) selected.insert(kw);
  } else {
    std::stringstream stream(keywords_csv);
    std::string kw;
    while (std::getline(stream, kw, ','))
      if (!kw.empty()) selected.insert(kw);
  }
  std::cout << codegen::render_skeleton(skeleton, selected);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"natural language to nGQL toolkit"};
  app.require_subcommand(1);

  std::string config_path, query, query_file, eval_file, pairs_file, vectors_file;
  std::string out_train = "train.jsonl", out_test = "test.jsonl",
              out_records = "records.jsonl";
  std::string holdout_csv, init_name = "maxnorm", schema_path, skeleton_path,
              keywords_csv;
  bool trace = false;
  int jobs = 1;
  double theta = 0.9, fraction = 0.8;
  std::uint64_t seed = 42;
  std::size_t k = 1;

  auto* translate = app.add_subcommand("translate", "translate NL to nGQL");
  translate->add_option("--config", config_path)->required();
  translate->add_option("--query", query);
  translate->add_option("--query-file", query_file);
  translate->add_flag("--trace", trace, "dump intermediates as JSON");

  auto* validate = app.add_subcommand("validate", "syntax-check queries");
  validate->add_option("--query", query);
  validate->add_option("file", query_file, "file with one query per line");

  auto* exec = app.add_subcommand("exec", "execute a query against the graph");
  exec->add_option("--config", config_path)->required();
  exec->add_option("--query", query)->required();
  exec->add_option("--seed", seed, "SAMPLE clause seed");

  auto* eval_cmd = app.add_subcommand("eval", "run the metric suite");
  eval_cmd->add_option("--config", config_path)->required();
  eval_cmd->add_option("file", eval_file)->required();
  eval_cmd->add_option("--jobs", jobs);
  auto* theta_opt = eval_cmd->add_option("--theta", theta);

  auto* ds = app.add_subcommand("dataset", "dataset tooling");
  auto* sample = ds->add_subcommand("sample", "k-center greedy selection");
  sample->add_option("--vectors", vectors_file)->required();
  sample->add_option("--k", k)->required();
  sample->add_option("--init", init_name)->check(CLI::IsMember({"first", "maxnorm"}));
  auto* split = ds->add_subcommand("split", "schema-holdout train/test split");
  split->add_option("--pairs", pairs_file)->required();
  split->add_option("--fraction", fraction);
  split->add_option("--seed", seed);
  split->add_option("--holdout", holdout_csv, "comma-separated schema ids");
  split->add_option("--out-train", out_train);
  split->add_option("--out-test", out_test);
  auto* records = ds->add_subcommand("records", "build ranker training records");
  records->add_option("--config", config_path)->required();
  records->add_option("--pairs", pairs_file)->required();
  records->add_option("--out", out_records);
  ds->require_subcommand(1);

  auto* schema_cmd = app.add_subcommand("schema", "prompt renderings");
  auto* codegen_cmd = schema_cmd->add_subcommand("codegen", "code-form schema");
  codegen_cmd->add_option("--schema", schema_path)->required();
  auto* skeleton_cmd = schema_cmd->add_subcommand("skeleton", "keyword catalog");
  skeleton_cmd->add_option("--skeleton", skeleton_path);
  skeleton_cmd->add_option("--keywords", keywords_csv);
  schema_cmd->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*translate) return cmd_translate(config_path, query, query_file, trace);
    if (*validate) return cmd_validate(query, query_file);
    if (*exec) return cmd_exec(config_path, query, seed);
    if (*eval_cmd)
      return cmd_eval(config_path, eval_file, jobs, theta, theta_opt->count() > 0);
    if (*sample) return cmd_dataset_sample(vectors_file, k, init_name);
    if (*split)
      return cmd_dataset_split(pairs_file, fraction, seed, holdout_csv, out_train,
                               out_test);
    if (*records) return cmd_dataset_records(config_path, pairs_file, out_records);
    if (*codegen_cmd) return cmd_schema_codegen(schema_path);
    if (*skeleton_cmd) return cmd_schema_skeleton(skeleton_path, keywords_csv);
  } catch (const gql::UnsupportedFeature& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const GoldExecutionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGoldExec;
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  } catch (const ParseFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  } catch (const NoQueryFound& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  } catch (const TransportError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const FixtureMiss& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const FixtureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const RateLimited& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const BackendError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnknownKeyword& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const gql::GqlSyntaxError& e) {
    std::cerr << "error: " << e.message() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
