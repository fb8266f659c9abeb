#include "nl2gql/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "nl2gql/gql/parser.hpp"

namespace nl2gql::dataset {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Strip "1." / "1)" / "-" / "*" list markers from a reply line.
std::string strip_list_marker(std::string line) {
  line = trim(line);
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')'))
    return trim(line.substr(i + 1));
  if (!line.empty() && (line[0] == '-' || line[0] == '*'))
    return trim(line.substr(1));
  return line;
}

double euclidean(const backends::EmbeddingVector& a, const backends::EmbeddingVector& b) {
  if (a.dim() != b.dim()) throw DimMismatch("k_center_greedy: mixed vector dims");
  double sum = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    double d = a.values[i] - b.values[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace

Gql2NlResult gql2nl(const std::string& gql, const graph::GraphSchema& schema,
                    int n_variants, backends::ChatBackend& backend,
                    const std::string& model_name) {
  if (n_variants <= 0) throw EmptyInput("gql2nl requires n_variants >= 1");
  try {
    gql::parse(gql);
  } catch (const gql::GqlSyntaxError& e) {
    throw ParseError("gql2nl input does not validate: " + e.message());
  }

  std::string prompt;
  prompt += "# Graph space\n" + schema.space_name + "\n\n# Query\n" + gql + "\n\n";
  prompt += "# Task\nWrite " + std::to_string(n_variants) +
            " distinct natural-language questions that this graph query answers, "
            "one per line, no numbering.\n";

  backends::ChatRequest request;
  request.model_name = model_name;
  request.messages = {
      {"system", "You paraphrase graph queries as natural-language questions."},
      {"user", prompt}};
  auto response = backend.chat(request);

  Gql2NlResult result;
  std::stringstream stream(response.content);
  std::string line;
  while (std::getline(stream, line)) {
    line = strip_list_marker(line);
    if (line.empty()) continue;
    if (std::find(result.variants.begin(), result.variants.end(), line) !=
        result.variants.end()) {
      result.deduplicated = true;
      continue;
    }
    result.variants.push_back(line);
  }
  if (static_cast<int>(result.variants.size()) > n_variants)
    result.variants.resize(static_cast<std::size_t>(n_variants));
  if (static_cast<int>(result.variants.size()) < n_variants)
    result.deduplicated = true;
  return result;
}

TrainRecord build_train_record(const NlGqlPair& pair, const graph::GraphSchema& schema,
                               const codegen::Skeleton& skeleton) {
  auto stmt = gql::parse(pair.gql);
  auto prof = gql::profile(stmt);

  TrainRecord record;
  record.nl = pair.nl;
  record.gql = pair.gql;
  record.rea.crud_choice = prof.crud;
  record.rea.crud_note = "statement keywords of the gold query";
  record.rea.clause_choice = prof.clauses;
  record.rea.clause_note = "clause keywords used by the gold query";
  record.rea.schema_choice = prof.schema_names;
  record.rea.schema_note = "tags and edges the gold query references";

  graph::GraphSchema subset;
  subset.space_name = schema.space_name;
  for (const auto& tag : schema.tags)
    if (std::find(prof.schema_names.begin(), prof.schema_names.end(), tag.name) !=
        prof.schema_names.end())
      subset.tags.push_back(tag);
  for (const auto& edge : schema.edges)
    if (std::find(prof.schema_names.begin(), prof.schema_names.end(), edge.name) !=
        prof.schema_names.end())
      subset.edges.push_back(edge);
  record.sch = codegen::render_code_schema(subset).text;

  std::set<std::string> keywords;
  for (const auto& kw : prof.crud)
    if (skeleton.find(kw)) keywords.insert(kw);
  for (const auto& kw : prof.clauses)
    if (skeleton.find(kw)) keywords.insert(kw);
  record.ske = codegen::render_skeleton(skeleton, keywords);
  return record;
}

std::vector<std::size_t> k_center_greedy(
    const std::vector<backends::EmbeddingVector>& vectors, std::size_t k,
    KCenterInit init) {
  if (vectors.empty()) throw EmptyInput("k_center_greedy over empty vector list");
  if (k == 0 || k > vectors.size())
    throw KTooLarge("k_center_greedy: k=" + std::to_string(k) + " with n=" +
                    std::to_string(vectors.size()));

  std::size_t start = 0;
  if (init == KCenterInit::MaxNorm) {
    double best = -1;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      double norm = 0;
      for (double v : vectors[i].values) norm += v * v;
      if (norm > best) {
        best = norm;
        start = i;
      }
    }
  }

  std::vector<std::size_t> selected{start};
  std::vector<double> min_dist(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i)
    min_dist[i] = euclidean(vectors[i], vectors[start]);

  while (selected.size() < k) {
    std::size_t best = vectors.size();
    double best_dist = -1;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (std::find(selected.begin(), selected.end(), i) != selected.end()) continue;
      if (min_dist[i] > best_dist) {
        best_dist = min_dist[i];
        best = i;
      }
    }
    selected.push_back(best);
    for (std::size_t i = 0; i < vectors.size(); ++i)
      min_dist[i] = std::min(min_dist[i], euclidean(vectors[i], vectors[best]));
  }
  return selected;
}

double coverage_radius(const std::vector<backends::EmbeddingVector>& vectors,
                       const std::vector<std::size_t>& selected) {
  double radius = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (std::find(selected.begin(), selected.end(), i) != selected.end()) continue;
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t s : selected)
      nearest = std::min(nearest, euclidean(vectors[i], vectors[s]));
    radius = std::max(radius, nearest);
  }
  return radius;
}

SplitResult split_by_schema(const std::vector<NlGqlPair>& pairs, const SplitSpec& spec) {
  if (spec.train_fraction <= 0 || spec.train_fraction >= 1)
    throw ConfigError("train_fraction must lie strictly between 0 and 1");
  for (const auto& schema_id : spec.holdout_schemas) {
    bool present = std::any_of(pairs.begin(), pairs.end(), [&](const NlGqlPair& p) {
      return p.schema_id == schema_id;
    });
    if (!present)
      throw ConfigError("holdout schema not present in pairs: " + schema_id);
  }

  SplitResult result;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (spec.holdout_schemas.count(pairs[i].schema_id)) {
      result.test.push_back(pairs[i]);
    } else {
      rest.push_back(i);
    }
  }

  std::size_t n_train = static_cast<std::size_t>(
      std::llround(spec.train_fraction * static_cast<double>(pairs.size())));
  std::size_t test_budget = pairs.size() - n_train;
  if (result.test.size() > test_budget) {
    result.infeasible = true;
    n_train = rest.size();
  } else {
    n_train = std::min(n_train, rest.size());
  }

  std::mt19937_64 rng(spec.seed);
  std::shuffle(rest.begin(), rest.end(), rng);
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (i < n_train) {
      result.train.push_back(pairs[rest[i]]);
    } else {
      result.test.push_back(pairs[rest[i]]);
    }
  }
  return result;
}

std::vector<NlGqlPair> load_pairs(const std::string& text) {
  std::vector<NlGqlPair> pairs;
  std::stringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("pair file line " + std::to_string(line_no) + ": " + e.what());
    }
    NlGqlPair pair;
    pair.nl = doc.at("nl").get<std::string>();
    pair.gql = doc.at("gql").get<std::string>();
    pair.schema_id = doc.at("schema_id").get<std::string>();
    pair.language = doc.value("language", "en");
    pair.provenance = doc.value("provenance", "manual");
    if (pair.nl.empty())
      throw ParseError("pair file line " + std::to_string(line_no) + ": empty nl");
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::string serialize_pairs(const std::vector<NlGqlPair>& pairs) {
  std::string out;
  for (const auto& pair : pairs) {
    json doc{{"nl", pair.nl},
             {"gql", pair.gql},
             {"schema_id", pair.schema_id},
             {"language", pair.language},
             {"provenance", pair.provenance}};
    out += doc.dump() + "\n";
  }
  return out;
}

std::string serialize_train_records(const std::vector<TrainRecord>& records) {
  std::string out;
  for (const auto& record : records) {
    json doc{{"nl", record.nl},
             {"gql", record.gql},
             {"sch", record.sch},
             {"ske", record.ske},
             {"rea",
              {{"crud", {{"choice", record.rea.crud_choice}, {"note", record.rea.crud_note}}},
               {"clauses",
                {{"choice", record.rea.clause_choice}, {"note", record.rea.clause_note}}},
               {"schema",
                {{"choice", record.rea.schema_choice}, {"note", record.rea.schema_note}}}}}};
    out += doc.dump() + "\n";
  }
  return out;
}

}  // namespace nl2gql::dataset
