#pragma once

// Shared in-memory basketball fixture mirroring the demo bundle shape.

#include "nl2gql/graph_store.hpp"

inline nl2gql::graph::GraphSchema make_basketball_schema() {
  using namespace nl2gql;
  graph::GraphSchema s;
  s.space_name = "basketball";
  graph::TagDef player{"player", "A basketball player.", std::nullopt,
                       {{"name", Dtype::String, ""}, {"age", Dtype::Int, ""}}};
  graph::TagDef team{"team", "A basketball team.", std::nullopt,
                     {{"name", Dtype::String, ""}}};
  s.tags = {player, team};
  graph::EdgeDef follow{"follow", "", {"player"}, {"player"},
                        {{"degree", Dtype::Int, ""}}};
  graph::EdgeDef serve{"serve", "", {"player"}, {"team"},
                       {{"start_year", Dtype::Int, ""}}};
  s.edges = {follow, serve};
  return s;
}

inline nl2gql::graph::GraphStore make_basketball_store() {
  using namespace nl2gql;
  using graph::EdgeRecord;
  using graph::NodeRecord;
  std::vector<NodeRecord> nodes = {
      {"player100", "player", {{"name", std::string("Tim Duncan")}, {"age", std::int64_t{42}}}},
      {"player101", "player", {{"name", std::string("Tony Parker")}, {"age", std::int64_t{36}}}},
      {"player102", "player", {{"name", std::string("LaMarcus Aldridge")}, {"age", std::int64_t{33}}}},
      {"player103", "player", {{"name", std::string("Manu Ginobili")}, {"age", std::int64_t{41}}}},
      {"team204", "team", {{"name", std::string("Spurs")}}},
  };
  std::vector<EdgeRecord> edges = {
      {"player100", "player101", "follow", 0, {{"degree", std::int64_t{95}}}},
      {"player100", "player103", "follow", 0, {{"degree", std::int64_t{90}}}},
      {"player101", "player100", "follow", 0, {{"degree", std::int64_t{95}}}},
      {"player101", "player102", "follow", 0, {{"degree", std::int64_t{90}}}},
      {"player100", "team204", "serve", 0, {{"start_year", std::int64_t{1997}}}},
  };
  return nl2gql::graph::GraphStore(make_basketball_schema(), std::move(nodes),
                                   std::move(edges));
}
