#include "nl2gql/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <optional>
#include <set>
#include <sstream>

namespace nl2gql::pipeline {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string to_upper(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream stream(s);
  while (std::getline(stream, cur, ',')) {
    cur = trim(cur);
    if (cur.empty()) continue;
    std::string upper = to_upper(cur);
    if (upper == "NONE" || cur == "-") continue;
    out.push_back(cur);
  }
  return out;
}

void dedupe(std::vector<std::string>& v) {
  std::vector<std::string> out;
  for (const auto& s : v)
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  v = std::move(out);
}

// The three labeled lists, or nullopt when any label is missing.
std::optional<RankerOutput> parse_ranker_reply(const std::string& raw) {
  RankerOutput out;
  out.raw = raw;
  bool saw_crud = false, saw_clauses = false, saw_schema = false;
  std::stringstream stream(raw);
  std::string line;
  while (std::getline(stream, line)) {
    std::string upper = to_upper(line);
    auto value_after = [&](std::size_t label_len) {
      return trim(line.substr(label_len));
    };
    std::size_t start = upper.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    upper = upper.substr(start);
    line = trim(line);
    if (upper.rfind("CRUD:", 0) == 0) {
      out.crud_keywords = split_commas(value_after(5));
      saw_crud = true;
    } else if (upper.rfind("CLAUSES:", 0) == 0) {
      out.clauses = split_commas(value_after(8));
      saw_clauses = true;
    } else if (upper.rfind("SCHEMA:", 0) == 0) {
      out.schema_subset = split_commas(value_after(7));
      saw_schema = true;
    }
  }
  if (!saw_crud || !saw_clauses || !saw_schema) return std::nullopt;
  for (auto& kw : out.crud_keywords) kw = to_upper(kw);
  for (auto& kw : out.clauses) kw = to_upper(kw);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::string build_ranker_prompt(const codegen::CodeSchema& code_schema,
                                const codegen::Skeleton& skeleton,
                                const std::string& query) {
  std::string prompt;
  prompt += "# Graph schema (code form)\n";
  prompt += code_schema.text;
  if (!prompt.empty() && prompt.back() != '\n') prompt += '\n';
  prompt += "\n# GQL skeleton catalog\n";
  std::set<std::string> all;
  for (const auto& kw : skeleton.keywords()) all.insert(kw);
  prompt += codegen::render_skeleton(skeleton, all);
  if (prompt.back() != '\n') prompt += '\n';
  prompt += "\n# User query\n";
  prompt += query;
  prompt += "\n\n# Task\n";
  prompt +=
      "Select what this query needs. Reply with exactly three lines and "
      "nothing else:\n"
      "CRUD: <comma-separated CRUD keywords from the catalog>\n"
      "CLAUSES: <comma-separated clause keywords from the catalog, or none>\n"
      "SCHEMA: <comma-separated tag and edge names from the schema>\n";
  return prompt;
}

RankerOutput validate_ranker_output(RankerOutput out, const graph::GraphSchema& schema,
                                    const codegen::Skeleton& skeleton) {
  dedupe(out.schema_subset);
  dedupe(out.crud_keywords);
  dedupe(out.clauses);

  auto crud = skeleton.crud_keywords();
  auto clauses = skeleton.clause_keywords();

  std::vector<std::string> kept;
  for (const auto& name : out.schema_subset) {
    if (schema.find_tag(name) || schema.find_edge(name)) {
      kept.push_back(name);
    } else {
      out.warnings.push_back("dropped unknown schema name: " + name);
    }
  }
  out.schema_subset = kept;

  kept.clear();
  for (const auto& kw : out.crud_keywords) {
    if (std::find(crud.begin(), crud.end(), kw) != crud.end()) {
      kept.push_back(kw);
    } else {
      out.warnings.push_back("dropped unknown CRUD keyword: " + kw);
    }
  }
  out.crud_keywords = kept;

  kept.clear();
  for (const auto& kw : out.clauses) {
    if (std::find(clauses.begin(), clauses.end(), kw) != clauses.end()) {
      kept.push_back(kw);
    } else {
      out.warnings.push_back("dropped unknown clause keyword: " + kw);
    }
  }
  out.clauses = kept;

  if (out.schema_subset.empty()) {
    for (const auto& tag : schema.tags) out.schema_subset.push_back(tag.name);
    for (const auto& edge : schema.edges) out.schema_subset.push_back(edge.name);
    out.fail_open_schema = true;
    out.warnings.push_back("schema subset empty after validation; using full schema");
  }
  if (out.crud_keywords.empty()) {
    out.crud_keywords = crud;
    out.fail_open_crud = true;
    out.warnings.push_back("CRUD list empty after validation; using full CRUD set");
  }
  return out;
}

backends::ChatRequest make_ranker_request(const graph::GraphSchema& schema,
                                          const codegen::Skeleton& skeleton,
                                          const std::string& query,
                                          const std::string& model_name,
                                          double temperature, double top_p) {
  auto code_schema = codegen::render_code_schema(schema);
  backends::ChatRequest request;
  request.model_name = model_name;
  request.temperature = temperature;
  request.top_p = top_p;
  request.messages = {
      {"system", "You classify graph queries against a schema and a keyword catalog."},
      {"user", build_ranker_prompt(code_schema, skeleton, query)}};
  return request;
}

RankerOutput rank(const graph::GraphSchema& schema, const codegen::Skeleton& skeleton,
                  const std::string& query, backends::ChatBackend& backend,
                  const std::string& model_name, double temperature, double top_p) {
  auto request = make_ranker_request(schema, skeleton, query, model_name, temperature,
                                     top_p);
  auto response = backend.chat(request);
  auto parsed = parse_ranker_reply(response.content);
  if (!parsed) {
    request.messages.push_back({"assistant", response.content});
    request.messages.push_back(
        {"user",
         "Your reply did not match the required format. Reply with exactly the "
         "three labeled lines (CRUD:, CLAUSES:, SCHEMA:) and nothing else."});
    response = backend.chat(request);
    parsed = parse_ranker_reply(response.content);
  }
  if (!parsed) throw ParseFailure("ranker reply not in the labeled-list format");
  return validate_ranker_output(std::move(*parsed), schema, skeleton);
}

std::string build_refiner_prompt(const RefinerInput& input) {
  std::string prompt;
  prompt += "# Graph schema (code form)\n";
  prompt += input.code_schema_subset;
  if (!prompt.empty() && prompt.back() != '\n') prompt += '\n';
  prompt += "\n# GQL skeleton (selected keywords)\n";
  prompt += input.skeleton_subset;
  if (prompt.back() != '\n') prompt += '\n';
  if (!input.retrieved_facts.empty()) {
    prompt += "\n# Retrieved graph facts\n";
    for (const auto& fact : input.retrieved_facts) prompt += "- " + fact + "\n";
  }
  prompt += "\n# User query (rewritten)\n";
  prompt += input.rewritten_query;
  prompt += "\n\n# Task\n";
  prompt +=
      "Write exactly one nGQL statement answering the query. Reply with a "
      "single fenced code block containing only the statement.\n";
  return prompt;
}

backends::ChatRequest make_refiner_request(const RefinerInput& input,
                                           const std::string& model_name,
                                           double temperature, double top_p) {
  backends::ChatRequest request;
  request.model_name = model_name;
  request.temperature = temperature;
  request.top_p = top_p;
  request.messages = {
      {"system", "You translate natural language questions into nGQL queries."},
      {"user", build_refiner_prompt(input)}};
  return request;
}

std::string refine(const RefinerInput& input, backends::ChatBackend& backend,
                   const std::string& model_name, double temperature, double top_p) {
  return backend.chat(make_refiner_request(input, model_name, temperature, top_p))
      .content;
}

RefinerInput build_refiner_input(const RankerOutput& ranker,
                                 const align::RewriteResult& rewrite,
                                 const graph::GraphSchema& schema,
                                 const codegen::Skeleton& skeleton) {
  graph::GraphSchema subset;
  subset.space_name = schema.space_name;
  std::set<std::string> names(ranker.schema_subset.begin(), ranker.schema_subset.end());
  for (const auto& tag : schema.tags)
    if (names.count(tag.name)) subset.tags.push_back(tag);
  for (const auto& edge : schema.edges)
    if (names.count(edge.name)) subset.edges.push_back(edge);

  std::set<std::string> keywords(ranker.crud_keywords.begin(),
                                 ranker.crud_keywords.end());
  keywords.insert(ranker.clauses.begin(), ranker.clauses.end());

  RefinerInput input;
  input.code_schema_subset = codegen::render_code_schema(subset).text;
  input.skeleton_subset = codegen::render_skeleton(skeleton, keywords);
  input.rewritten_query = rewrite.rewritten_query;
  for (const auto& sub : rewrite.substitutions) {
    std::string fact = sub.canonical + " (" + align::candidate_kind_name(sub.kind) +
                       "), matched from \"" + sub.original + "\"";
    if (std::find(input.retrieved_facts.begin(), input.retrieved_facts.end(), fact) ==
        input.retrieved_facts.end())
      input.retrieved_facts.push_back(fact);
  }
  return input;
}

std::string extract_gql(const std::string& raw, const codegen::Skeleton& skeleton) {
  if (trim(raw).empty()) throw NoQueryFound("empty refiner reply");

  auto strip_statement = [](std::string s) {
    s = trim(s);
    while (!s.empty() && s.back() == ';') {
      s.pop_back();
      s = trim(s);
    }
    return s;
  };

  std::size_t fence = raw.find("```");
  if (fence != std::string::npos) {
    std::size_t body_start = raw.find('\n', fence);
    if (body_start != std::string::npos) {
      ++body_start;
      std::size_t close = raw.find("```", body_start);
      if (close != std::string::npos) {
        std::string body = strip_statement(raw.substr(body_start, close - body_start));
        if (!body.empty()) return body;
      }
    }
  }

  auto crud = skeleton.crud_keywords();
  std::stringstream stream(raw);
  std::string line;
  while (std::getline(stream, line)) {
    std::string upper = to_upper(trim(line));
    for (const auto& kw : crud) {
      std::size_t at = upper.find(kw);
      if (at == std::string::npos) continue;
      // Keyword must be a standalone word; text before it is prose to strip.
      if (at > 0 && (std::isalnum(static_cast<unsigned char>(upper[at - 1])) ||
                     upper[at - 1] == '_'))
        continue;
      std::size_t after = at + kw.size();
      if (after < upper.size() &&
          (std::isalnum(static_cast<unsigned char>(upper[after])) ||
           upper[after] == '_'))
        continue;
      std::string tail = strip_statement(trim(line).substr(at));
      if (!tail.empty()) return tail;
    }
  }
  throw NoQueryFound("no fenced block or CRUD-keyword line in reply");
}

TranslationResult translate(const std::string& query, const graph::GraphStore& store,
                            const codegen::Skeleton& skeleton,
                            const RoleBackends& roles,
                            const align::RetrieveParams& retrieve_params) {
  if (!roles.ranker || !roles.rewriter_embed || !roles.refiner)
    throw ConfigError("translate requires ranker, rewriter_embed, and refiner backends");

  TranslationResult result;
  const auto& schema = store.schema();

  auto t0 = std::chrono::steady_clock::now();
  try {
    result.ranker = rank(schema, skeleton, query, *roles.ranker, roles.ranker_model,
                         roles.temperature, roles.top_p);
  } catch (const Error& e) {
    throw StageError("ranker", e.what());
  }
  result.stage_timings["ranker"] = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  try {
    auto index = align::build_index(store);
    result.matches =
        align::retrieve(query, index, *roles.rewriter_embed, retrieve_params);
    result.rewrite = align::rewrite(query, result.matches, schema);
  } catch (const Error& e) {
    throw StageError("rewriter", e.what());
  }
  result.stage_timings["rewriter"] = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  try {
    RefinerInput input =
        build_refiner_input(result.ranker, result.rewrite, schema, skeleton);
    result.refiner_prompt = build_refiner_prompt(input);
    result.refiner_raw = refine(input, *roles.refiner, roles.refiner_model,
                                roles.temperature, roles.top_p);
  } catch (const Error& e) {
    throw StageError("refiner", e.what());
  }
  result.stage_timings["refiner"] = seconds_since(t0);

  try {
    result.gql = extract_gql(result.refiner_raw, skeleton);
  } catch (const Error& e) {
    throw StageError("extract", e.what());
  }
  return result;
}

}  // namespace nl2gql::pipeline
