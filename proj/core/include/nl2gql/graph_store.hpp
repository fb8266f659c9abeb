#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nl2gql/value.hpp"

namespace nl2gql::graph {

struct AttrDef {
  std::string name;
  Dtype dtype = Dtype::String;
  std::string description;
};

struct TagDef {
  std::string name;
  std::string description;
  std::optional<std::string> parent;
  std::vector<AttrDef> attrs;
};

struct EdgeDef {
  std::string name;
  std::string description;
  std::set<std::string> src_tags;
  std::set<std::string> dst_tags;
  std::vector<AttrDef> attrs;
};

struct GraphSchema {
  std::string space_name;
  std::vector<TagDef> tags;
  std::vector<EdgeDef> edges;

  const TagDef* find_tag(const std::string& name) const;
  const EdgeDef* find_edge(const std::string& name) const;
  // Attributes of a tag including inherited ones, ancestors first.
  std::vector<AttrDef> tag_attrs(const std::string& tag_name) const;
  // True if `tag_name` equals `ancestor` or inherits from it.
  bool tag_is_a(const std::string& tag_name, const std::string& ancestor) const;
};

struct NodeRecord {
  std::string vid;
  std::string tag;
  std::map<std::string, Value> attrs;
};

struct EdgeRecord {
  std::string src;
  std::string dst;
  std::string etype;
  std::int64_t rank = 0;
  std::map<std::string, Value> attrs;
};

enum class Direction { Outgoing, Reversed, Bidirect };

// One traversal arrival: destination vid plus a witnessing edge path.
struct TraversalHit {
  std::string vid;
  std::vector<EdgeRecord> path;
};

bool operator<(const TraversalHit& a, const TraversalHit& b);
bool operator==(const TraversalHit& a, const TraversalHit& b);

// Immutable after load. Indices are exact inverses of the edge list.
class GraphStore {
 public:
  GraphStore(GraphSchema schema, std::vector<NodeRecord> nodes,
             std::vector<EdgeRecord> edges);

  const GraphSchema& schema() const { return schema_; }
  const std::map<std::string, NodeRecord>& nodes() const { return nodes_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }

  const NodeRecord* find_node(const std::string& vid) const;
  const std::vector<const EdgeRecord*>& out_edges(const std::string& vid) const;
  const std::vector<const EdgeRecord*>& in_edges(const std::string& vid) const;

 private:
  GraphSchema schema_;
  std::map<std::string, NodeRecord> nodes_;
  std::vector<EdgeRecord> edges_;
  std::map<std::string, std::vector<const EdgeRecord*>> out_index_;
  std::map<std::string, std::vector<const EdgeRecord*>> in_index_;
  std::vector<const EdgeRecord*> empty_;
};

constexpr const char* kWildcardEdge = "*";

GraphSchema load_schema(const std::string& document);
std::string serialize_schema(const GraphSchema& schema);

GraphStore load_graph(const GraphSchema& schema, const std::string& document);
std::string serialize_graph(const GraphStore& store);

// Exactly-`steps`-hop reachability. One hit per reachable vid, paired with
// the smallest witnessing path; sorted by (vid, path).
std::vector<TraversalHit> neighbors(const GraphStore& store,
                                    const std::set<std::string>& from,
                                    const std::string& etype, Direction direction,
                                    int steps);

// All distinct exactly-`steps`-hop paths, in deterministic order. The
// executor's GO emits one row per path.
std::vector<TraversalHit> walk(const GraphStore& store,
                               const std::set<std::string>& from,
                               const std::string& etype, Direction direction,
                               int steps);

}  // namespace nl2gql::graph
