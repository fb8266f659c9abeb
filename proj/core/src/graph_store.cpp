#include "nl2gql/graph_store.hpp"

#include <algorithm>
#include <unordered_set>

#include <json.hpp>

#include "nl2gql/errors.hpp"

namespace nl2gql::graph {

using nlohmann::json;

const TagDef* GraphSchema::find_tag(const std::string& name) const {
  for (const auto& t : tags)
    if (t.name == name) return &t;
  return nullptr;
}

const EdgeDef* GraphSchema::find_edge(const std::string& name) const {
  for (const auto& e : edges)
    if (e.name == name) return &e;
  return nullptr;
}

std::vector<AttrDef> GraphSchema::tag_attrs(const std::string& tag_name) const {
  std::vector<const TagDef*> chain;
  const TagDef* t = find_tag(tag_name);
  while (t) {
    chain.push_back(t);
    t = t->parent ? find_tag(*t->parent) : nullptr;
  }
  std::vector<AttrDef> out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    out.insert(out.end(), (*it)->attrs.begin(), (*it)->attrs.end());
  return out;
}

bool GraphSchema::tag_is_a(const std::string& tag_name, const std::string& ancestor) const {
  const TagDef* t = find_tag(tag_name);
  while (t) {
    if (t->name == ancestor) return true;
    t = t->parent ? find_tag(*t->parent) : nullptr;
  }
  return false;
}

namespace {

void validate_schema(const GraphSchema& s) {
  std::unordered_set<std::string> names;
  for (const auto& t : s.tags) {
    if (t.name.empty()) throw SchemaError("tag with empty name");
    if (!names.insert(t.name).second)
      throw SchemaError("duplicate name: " + t.name);
    std::unordered_set<std::string> attr_names;
    for (const auto& a : t.attrs) {
      if (a.name.empty()) throw SchemaError("empty attribute name on tag " + t.name);
      if (!attr_names.insert(a.name).second)
        throw SchemaError("duplicate attribute " + a.name + " on tag " + t.name);
    }
  }
  for (const auto& e : s.edges) {
    if (e.name.empty()) throw SchemaError("edge with empty name");
    if (!names.insert(e.name).second)
      throw SchemaError("duplicate name: " + e.name);
    if (e.src_tags.empty() || e.dst_tags.empty())
      throw SchemaError("edge " + e.name + " must declare src_tags and dst_tags");
    for (const auto& ref : e.src_tags)
      if (!s.find_tag(ref)) throw SchemaError("edge " + e.name + " references unknown tag " + ref);
    for (const auto& ref : e.dst_tags)
      if (!s.find_tag(ref)) throw SchemaError("edge " + e.name + " references unknown tag " + ref);
    std::unordered_set<std::string> attr_names;
    for (const auto& a : e.attrs) {
      if (a.name.empty()) throw SchemaError("empty attribute name on edge " + e.name);
      if (!attr_names.insert(a.name).second)
        throw SchemaError("duplicate attribute " + a.name + " on edge " + e.name);
    }
  }
  for (const auto& t : s.tags) {
    if (!t.parent) continue;
    if (!s.find_tag(*t.parent))
      throw SchemaError("tag " + t.name + " references unknown parent " + *t.parent);
    // Cycle walk bounded by tag count.
    const TagDef* cur = &t;
    std::size_t hops = 0;
    while (cur->parent) {
      cur = s.find_tag(*cur->parent);
      if (++hops > s.tags.size())
        throw SchemaError("inheritance cycle through tag " + t.name);
    }
  }
}

Value value_from_json(const json& j) {
  if (j.is_null()) return nullptr;
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw ParseError("unsupported attribute value: " + j.dump());
}

json value_to_json(const Value& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

std::vector<AttrDef> attrs_from_json(const json& j) {
  std::vector<AttrDef> out;
  for (const auto& a : j) {
    AttrDef d;
    d.name = a.at("name").get<std::string>();
    d.dtype = dtype_from_name(a.at("dtype").get<std::string>());
    if (a.contains("description")) d.description = a["description"].get<std::string>();
    out.push_back(std::move(d));
  }
  return out;
}

json attrs_to_json(const std::vector<AttrDef>& attrs) {
  json out = json::array();
  for (const auto& a : attrs) {
    json j{{"name", a.name}, {"dtype", dtype_name(a.dtype)}};
    if (!a.description.empty()) j["description"] = a.description;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace

GraphSchema load_schema(const std::string& document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::exception& e) {
    throw ParseError(std::string("schema document: ") + e.what());
  }
  GraphSchema s;
  try {
    s.space_name = j.at("space").get<std::string>();
    for (const auto& tj : j.value("tags", json::array())) {
      TagDef t;
      t.name = tj.at("name").get<std::string>();
      t.description = tj.value("description", "");
      if (tj.contains("parent")) t.parent = tj["parent"].get<std::string>();
      if (tj.contains("attrs")) t.attrs = attrs_from_json(tj["attrs"]);
      s.tags.push_back(std::move(t));
    }
    for (const auto& ej : j.value("edges", json::array())) {
      EdgeDef e;
      e.name = ej.at("name").get<std::string>();
      e.description = ej.value("description", "");
      for (const auto& t : ej.at("src_tags")) e.src_tags.insert(t.get<std::string>());
      for (const auto& t : ej.at("dst_tags")) e.dst_tags.insert(t.get<std::string>());
      if (ej.contains("attrs")) e.attrs = attrs_from_json(ej["attrs"]);
      s.edges.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("schema document: ") + e.what());
  }
  validate_schema(s);
  return s;
}

std::string serialize_schema(const GraphSchema& s) {
  json j;
  j["space"] = s.space_name;
  j["tags"] = json::array();
  for (const auto& t : s.tags) {
    json tj{{"name", t.name}, {"description", t.description}};
    if (t.parent) tj["parent"] = *t.parent;
    tj["attrs"] = attrs_to_json(t.attrs);
    j["tags"].push_back(std::move(tj));
  }
  j["edges"] = json::array();
  for (const auto& e : s.edges) {
    json ej{{"name", e.name}, {"description", e.description}};
    ej["src_tags"] = e.src_tags;
    ej["dst_tags"] = e.dst_tags;
    ej["attrs"] = attrs_to_json(e.attrs);
    j["edges"].push_back(std::move(ej));
  }
  return j.dump(2) + "\n";
}

GraphStore::GraphStore(GraphSchema schema, std::vector<NodeRecord> nodes,
                       std::vector<EdgeRecord> edges)
    : schema_(std::move(schema)), edges_(std::move(edges)) {
  validate_schema(schema_);
  for (auto& n : nodes) {
    const TagDef* tag = schema_.find_tag(n.tag);
    if (!tag) throw DataError("node " + n.vid + ": unknown tag " + n.tag);
    auto declared = schema_.tag_attrs(n.tag);
    for (const auto& [key, val] : n.attrs) {
      auto it = std::find_if(declared.begin(), declared.end(),
                             [&](const AttrDef& a) { return a.name == key; });
      if (it == declared.end())
        throw DataError("node " + n.vid + ": attribute " + key + " not declared on tag " + n.tag);
      if (!value_matches_dtype(val, it->dtype))
        throw DataError("node " + n.vid + ": attribute " + key + " does not match dtype " +
                        dtype_name(it->dtype));
    }
    auto vid = n.vid;
    if (!nodes_.emplace(vid, std::move(n)).second)
      throw DataError("duplicate vid " + vid);
  }
  std::set<std::tuple<std::string, std::string, std::string, std::int64_t>> seen;
  for (const auto& e : edges_) {
    const EdgeDef* def = schema_.find_edge(e.etype);
    if (!def) throw DataError("edge " + e.src + "->" + e.dst + ": unknown type " + e.etype);
    if (!nodes_.count(e.src))
      throw DataError("edge " + e.etype + ": dangling src " + e.src);
    if (!nodes_.count(e.dst))
      throw DataError("edge " + e.etype + ": dangling dst " + e.dst);
    if (e.rank < 0) throw DataError("edge " + e.etype + ": negative rank");
    if (!seen.insert({e.src, e.dst, e.etype, e.rank}).second)
      throw DataError("duplicate edge (" + e.src + "," + e.dst + "," + e.etype + "," +
                      std::to_string(e.rank) + ")");
    for (const auto& [key, val] : e.attrs) {
      auto it = std::find_if(def->attrs.begin(), def->attrs.end(),
                             [&](const AttrDef& a) { return a.name == key; });
      if (it == def->attrs.end())
        throw DataError("edge " + e.etype + ": attribute " + key + " not declared");
      if (!value_matches_dtype(val, it->dtype))
        throw DataError("edge " + e.etype + ": attribute " + key + " does not match dtype");
    }
  }
  for (const auto& e : edges_) {
    out_index_[e.src].push_back(&e);
    in_index_[e.dst].push_back(&e);
  }
}

const NodeRecord* GraphStore::find_node(const std::string& vid) const {
  auto it = nodes_.find(vid);
  return it == nodes_.end() ? nullptr : &it->second;
}

const std::vector<const EdgeRecord*>& GraphStore::out_edges(const std::string& vid) const {
  auto it = out_index_.find(vid);
  return it == out_index_.end() ? empty_ : it->second;
}

const std::vector<const EdgeRecord*>& GraphStore::in_edges(const std::string& vid) const {
  auto it = in_index_.find(vid);
  return it == in_index_.end() ? empty_ : it->second;
}

GraphStore load_graph(const GraphSchema& schema, const std::string& document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::exception& e) {
    throw ParseError(std::string("graph document: ") + e.what());
  }
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  try {
    for (const auto& nj : j.value("nodes", json::array())) {
      NodeRecord n;
      n.vid = nj.at("vid").get<std::string>();
      n.tag = nj.at("tag").get<std::string>();
      const json node_attrs = nj.value("attrs", json::object());
      for (const auto& [key, val] : node_attrs.items())
        n.attrs[key] = value_from_json(val);
      nodes.push_back(std::move(n));
    }
    for (const auto& ej : j.value("edges", json::array())) {
      EdgeRecord e;
      e.src = ej.at("src").get<std::string>();
      e.dst = ej.at("dst").get<std::string>();
      e.etype = ej.at("etype").get<std::string>();
      e.rank = ej.value("rank", std::int64_t{0});
      const json edge_attrs = ej.value("attrs", json::object());
      for (const auto& [key, val] : edge_attrs.items())
        e.attrs[key] = value_from_json(val);
      edges.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("graph document: ") + e.what());
  }
  return GraphStore(schema, std::move(nodes), std::move(edges));
}

std::string serialize_graph(const GraphStore& store) {
  json j;
  j["nodes"] = json::array();
  for (const auto& [vid, n] : store.nodes()) {
    json attrs = json::object();
    for (const auto& [k, v] : n.attrs) attrs[k] = value_to_json(v);
    j["nodes"].push_back({{"vid", n.vid}, {"tag", n.tag}, {"attrs", std::move(attrs)}});
  }
  j["edges"] = json::array();
  for (const auto& e : store.edges()) {
    json attrs = json::object();
    for (const auto& [k, v] : e.attrs) attrs[k] = value_to_json(v);
    j["edges"].push_back({{"src", e.src},
                          {"dst", e.dst},
                          {"etype", e.etype},
                          {"rank", e.rank},
                          {"attrs", std::move(attrs)}});
  }
  return j.dump(2) + "\n";
}

namespace {

std::tuple<const std::string&, const std::string&, const std::string&, std::int64_t>
edge_key(const EdgeRecord& e) {
  return {e.src, e.dst, e.etype, e.rank};
}

bool path_less(const std::vector<EdgeRecord>& a, const std::vector<EdgeRecord>& b) {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(),
      [](const EdgeRecord& x, const EdgeRecord& y) { return edge_key(x) < edge_key(y); });
}

bool path_eq(const std::vector<EdgeRecord>& a, const std::vector<EdgeRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (edge_key(a[i]) != edge_key(b[i])) return false;
  return true;
}

}  // namespace

bool operator<(const TraversalHit& a, const TraversalHit& b) {
  if (a.vid != b.vid) return a.vid < b.vid;
  return path_less(a.path, b.path);
}

bool operator==(const TraversalHit& a, const TraversalHit& b) {
  return a.vid == b.vid && path_eq(a.path, b.path);
}

std::vector<TraversalHit> walk(const GraphStore& store, const std::set<std::string>& from,
                               const std::string& etype, Direction direction, int steps) {
  if (steps < 1) throw Error("steps must be >= 1");
  if (etype != kWildcardEdge && !store.schema().find_edge(etype))
    throw UnknownEdgeType("unknown edge type: " + etype);

  std::vector<TraversalHit> frontier;
  for (const auto& vid : from) frontier.push_back({vid, {}});

  auto expand = [&](const TraversalHit& hit) {
    std::vector<TraversalHit> next;
    auto follow = [&](const std::vector<const EdgeRecord*>& edges, bool forward) {
      for (const EdgeRecord* e : edges) {
        if (etype != kWildcardEdge && e->etype != etype) continue;
        TraversalHit h = hit;
        h.vid = forward ? e->dst : e->src;
        h.path.push_back(*e);
        next.push_back(std::move(h));
      }
    };
    if (direction == Direction::Outgoing || direction == Direction::Bidirect)
      follow(store.out_edges(hit.vid), true);
    if (direction == Direction::Reversed || direction == Direction::Bidirect)
      follow(store.in_edges(hit.vid), false);
    return next;
  };

  for (int s = 0; s < steps; ++s) {
    std::vector<TraversalHit> next;
    for (const auto& hit : frontier) {
      auto expanded = expand(hit);
      next.insert(next.end(), expanded.begin(), expanded.end());
    }
    frontier = std::move(next);
  }
  std::sort(frontier.begin(), frontier.end());
  frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
  return frontier;
}

std::vector<TraversalHit> neighbors(const GraphStore& store,
                                    const std::set<std::string>& from,
                                    const std::string& etype, Direction direction,
                                    int steps) {
  auto paths = walk(store, from, etype, direction, steps);
  // Paths are sorted by (vid, path); keep the first per vid.
  std::vector<TraversalHit> out;
  for (auto& hit : paths) {
    if (out.empty() || out.back().vid != hit.vid) out.push_back(std::move(hit));
  }
  return out;
}

}  // namespace nl2gql::graph
