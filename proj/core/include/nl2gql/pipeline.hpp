#pragma once

#include <map>
#include <string>
#include <vector>

#include "nl2gql/align.hpp"
#include "nl2gql/backends.hpp"
#include "nl2gql/codegen.hpp"
#include "nl2gql/errors.hpp"
#include "nl2gql/graph_store.hpp"

namespace nl2gql::pipeline {

struct RankerOutput {
  std::vector<std::string> schema_subset;   // validated tag/edge names
  std::vector<std::string> crud_keywords;   // validated skeleton CRUD keywords
  std::vector<std::string> clauses;         // validated skeleton clause keywords
  std::string raw;                          // unparsed model reply
  std::vector<std::string> warnings;        // dropped names, fail-open notes
  bool fail_open_schema = false;
  bool fail_open_crud = false;
};

struct RefinerInput {
  std::string code_schema_subset;
  std::string skeleton_subset;
  std::string rewritten_query;
  std::vector<std::string> retrieved_facts;  // may be empty
};

struct TranslationResult {
  std::string gql;
  RankerOutput ranker;
  std::vector<align::AlignmentMatch> matches;
  align::RewriteResult rewrite;
  std::string refiner_prompt;
  std::string refiner_raw;
  std::map<std::string, double> stage_timings;  // seconds per stage
};

// Role -> backend bindings plus sampling settings shared by both chat roles.
struct RoleBackends {
  backends::ChatBackend* ranker = nullptr;
  backends::EmbedBackend* rewriter_embed = nullptr;
  backends::ChatBackend* refiner = nullptr;
  std::string ranker_model = "ranker";
  std::string refiner_model = "refiner";
  double temperature = 0.2;
  double top_p = 0.7;
};

// The exact prompts sent to the models; byte-stable for fixed inputs.
std::string build_ranker_prompt(const codegen::CodeSchema& code_schema,
                                const codegen::Skeleton& skeleton,
                                const std::string& query);
std::string build_refiner_prompt(const RefinerInput& input);

// The exact chat requests rank()/refine() issue. Exposed so fixture
// authoring and tests can compute replay keys for them.
backends::ChatRequest make_ranker_request(const graph::GraphSchema& schema,
                                          const codegen::Skeleton& skeleton,
                                          const std::string& query,
                                          const std::string& model_name = "ranker",
                                          double temperature = 0.2,
                                          double top_p = 0.7);
backends::ChatRequest make_refiner_request(const RefinerInput& input,
                                           const std::string& model_name = "refiner",
                                           double temperature = 0.2,
                                           double top_p = 0.7);

// Assemble the refiner's input from validated ranker output and the
// rewriter result: schema/skeleton subsets plus rendered fact lines.
RefinerInput build_refiner_input(const RankerOutput& ranker,
                                 const align::RewriteResult& rewrite,
                                 const graph::GraphSchema& schema,
                                 const codegen::Skeleton& skeleton);

// One chat call asking for the three labeled lists; re-prompts once on a
// malformed reply, then throws ParseFailure. The output is validated.
RankerOutput rank(const graph::GraphSchema& schema, const codegen::Skeleton& skeleton,
                  const std::string& query, backends::ChatBackend& backend,
                  const std::string& model_name = "ranker", double temperature = 0.2,
                  double top_p = 0.7);

// Drops unknown names/keywords (hallucination filter); fails open to the
// full schema name set / full CRUD list when a list is wiped out.
RankerOutput validate_ranker_output(RankerOutput out, const graph::GraphSchema& schema,
                                    const codegen::Skeleton& skeleton);

// Single chat call over the assembled prompt; returns the raw reply.
std::string refine(const RefinerInput& input, backends::ChatBackend& backend,
                   const std::string& model_name = "refiner", double temperature = 0.2,
                   double top_p = 0.7);

// First fenced code block, else the first line starting with a known CRUD
// keyword; trailing semicolon stripped. Throws NoQueryFound.
std::string extract_gql(const std::string& raw, const codegen::Skeleton& skeleton);

// The full pipeline: rank -> validate -> retrieve/rewrite -> refine ->
// extract. Stage failures rethrow as StageError with the stage name.
TranslationResult translate(const std::string& query, const graph::GraphStore& store,
                            const codegen::Skeleton& skeleton,
                            const RoleBackends& roles,
                            const align::RetrieveParams& retrieve_params = {});

}  // namespace nl2gql::pipeline
