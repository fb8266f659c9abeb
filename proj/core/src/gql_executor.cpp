#include "nl2gql/gql/executor.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <set>

#include "nl2gql/gql/parser.hpp"

namespace nl2gql::gql {

using graph::EdgeRecord;
using graph::GraphStore;
using graph::NodeRecord;

bool operator==(const ResultTable& a, const ResultTable& b) {
  if (a.columns != b.columns || a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].size() != b.rows[i].size()) return false;
    for (std::size_t j = 0; j < a.rows[i].size(); ++j)
      if (!value_eq(a.rows[i][j], b.rows[i][j])) return false;
  }
  return true;
}

std::string to_canonical_text(const ResultTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += '\t';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += '\t';
      out += value_to_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool value_truthy(const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  return false;  // null and non-bool never satisfy a predicate
}

struct EvalCtx {
  const GraphStore* store = nullptr;
  const NodeRecord* dst = nullptr;     // $$
  const NodeRecord* src = nullptr;     // $^
  const EdgeRecord* edge = nullptr;    // last traversed edge
  const NodeRecord* vertex = nullptr;  // FETCH / LOOKUP row vertex
  const std::map<std::string, const NodeRecord*>* node_vars = nullptr;
  const std::map<std::string, const EdgeRecord*>* edge_vars = nullptr;
  const std::vector<std::string>* columns = nullptr;  // pipe stage input
  const std::vector<Value>* row = nullptr;
};

Value node_attr(const GraphStore& store, const NodeRecord& node, const std::string& tag,
                const std::string& attr) {
  if (!tag.empty()) {
    if (!store.schema().find_tag(tag)) throw SemanticError("unknown tag: " + tag);
    const auto declared = store.schema().tag_attrs(tag);
    bool known = std::any_of(declared.begin(), declared.end(),
                             [&](const graph::AttrDef& a) { return a.name == attr; });
    if (!known) throw SemanticError("unknown attribute " + tag + "." + attr);
    if (!store.schema().tag_is_a(node.tag, tag)) return nullptr;
  }
  auto it = node.attrs.find(attr);
  if (it == node.attrs.end()) return nullptr;
  return it->second;
}

const NodeRecord* resolve_node_ref(const EvalCtx& ctx, const std::string& name) {
  if (name == "$$" || name == "$") return ctx.dst;
  if (name == "$^") return ctx.src;
  if (name == "vertex") return ctx.vertex ? ctx.vertex : ctx.dst;
  if (ctx.node_vars) {
    auto it = ctx.node_vars->find(name);
    if (it != ctx.node_vars->end()) return it->second;
  }
  return nullptr;
}

const EdgeRecord* resolve_edge_ref(const EvalCtx& ctx, const std::string& name) {
  if (name == "edge") return ctx.edge;
  if (ctx.edge_vars) {
    auto it = ctx.edge_vars->find(name);
    if (it != ctx.edge_vars->end()) return it->second;
  }
  return nullptr;
}

Value eval_expr(const Expr& e, const EvalCtx& ctx);

Value eval_numeric_bin(BinOp op, const Value& a, const Value& b) {
  auto num = [](const Value& v, bool* is_int) -> double {
    if (const auto* i = std::get_if<std::int64_t>(&v)) {
      *is_int = true;
      return static_cast<double>(*i);
    }
    if (const auto* d = std::get_if<double>(&v)) {
      *is_int = false;
      return *d;
    }
    throw SemanticError("arithmetic on non-numeric value");
  };
  if (op == BinOp::Add && std::holds_alternative<std::string>(a) &&
      std::holds_alternative<std::string>(b)) {
    return std::get<std::string>(a) + std::get<std::string>(b);
  }
  if (std::holds_alternative<std::nullptr_t>(a) || std::holds_alternative<std::nullptr_t>(b))
    return nullptr;
  bool ai = false, bi = false;
  double x = num(a, &ai), y = num(b, &bi);
  bool both_int = ai && bi;
  switch (op) {
    case BinOp::Add:
      return both_int ? Value(std::get<std::int64_t>(a) + std::get<std::int64_t>(b))
                      : Value(x + y);
    case BinOp::Sub:
      return both_int ? Value(std::get<std::int64_t>(a) - std::get<std::int64_t>(b))
                      : Value(x - y);
    case BinOp::Mul:
      return both_int ? Value(std::get<std::int64_t>(a) * std::get<std::int64_t>(b))
                      : Value(x * y);
    case BinOp::Div:
      if (y == 0) return nullptr;
      if (both_int) return Value(std::get<std::int64_t>(a) / std::get<std::int64_t>(b));
      return Value(x / y);
    case BinOp::Mod:
      if (!both_int || std::get<std::int64_t>(b) == 0) return nullptr;
      return Value(std::get<std::int64_t>(a) % std::get<std::int64_t>(b));
    default:
      throw SemanticError("not an arithmetic operator");
  }
}

Value eval_func(const Expr& e, const EvalCtx& ctx) {
  std::string name = lower(e.name);
  if (name == "count" || name == "max" || name == "min" || name == "sum")
    throw SemanticError("aggregate " + e.name + "() outside GROUP BY / aggregate yield");
  if (name == "id") {
    if (e.args.size() != 1) throw SemanticError("id() takes one argument");
    if (e.args[0]->kind == ExprKind::Var) {
      const NodeRecord* n = resolve_node_ref(ctx, e.args[0]->name);
      if (n) return n->vid;
    }
    throw SemanticError("id(): argument does not name a vertex in scope");
  }
  if (name == "src" || name == "dst") {
    if (e.args.size() != 1 || e.args[0]->kind != ExprKind::Var)
      throw SemanticError(name + "() takes an edge reference");
    const EdgeRecord* edge = resolve_edge_ref(ctx, e.args[0]->name);
    if (!edge) throw SemanticError(name + "(): no edge in scope");
    return name == "src" ? edge->src : edge->dst;
  }
  if (name == "rank") {
    if (e.args.size() != 1 || e.args[0]->kind != ExprKind::Var)
      throw SemanticError("rank() takes an edge reference");
    const EdgeRecord* edge = resolve_edge_ref(ctx, e.args[0]->name);
    if (!edge) throw SemanticError("rank(): no edge in scope");
    return edge->rank;
  }
  if (name == "type") {
    if (e.args.size() != 1 || e.args[0]->kind != ExprKind::Var)
      throw SemanticError("type() takes an edge reference");
    const EdgeRecord* edge = resolve_edge_ref(ctx, e.args[0]->name);
    if (!edge) throw SemanticError("type(): no edge in scope");
    return edge->etype;
  }
  throw SemanticError("unknown function: " + e.name);
}

Value eval_expr(const Expr& e, const EvalCtx& ctx) {
  switch (e.kind) {
    case ExprKind::Literal:
      return e.literal;
    case ExprKind::PipeCol: {
      if (!ctx.columns || !ctx.row)
        throw SemanticError("$-." + e.name + " used outside a pipe stage");
      auto it = std::find(ctx.columns->begin(), ctx.columns->end(), e.name);
      if (it == ctx.columns->end())
        throw SemanticError("column not in scope: " + e.name);
      return (*ctx.row)[static_cast<std::size_t>(it - ctx.columns->begin())];
    }
    case ExprKind::Prop: {
      if (e.scope.empty()) {
        // tag.attr: resolves against the row vertex (FETCH / LOOKUP).
        const NodeRecord* n = ctx.vertex ? ctx.vertex : ctx.dst;
        if (!n) throw SemanticError("no vertex in scope for " + e.tag + "." + e.attr);
        return node_attr(*ctx.store, *n, e.tag, e.attr);
      }
      const NodeRecord* n = resolve_node_ref(ctx, e.scope);
      if (!n) {
        if (ctx.edge_vars) {
          // v.tag.attr where v binds an edge is not part of the subset.
          auto it = ctx.edge_vars->find(e.scope);
          if (it != ctx.edge_vars->end()) {
            auto ait = it->second->attrs.find(e.attr);
            return ait == it->second->attrs.end() ? Value(nullptr) : ait->second;
          }
        }
        throw SemanticError("unknown reference: " + e.scope);
      }
      return node_attr(*ctx.store, *n, e.tag, e.attr);
    }
    case ExprKind::Var: {
      // Bare column name inside a pipe stage.
      if (ctx.columns && ctx.row) {
        auto it = std::find(ctx.columns->begin(), ctx.columns->end(), e.name);
        if (it != ctx.columns->end())
          return (*ctx.row)[static_cast<std::size_t>(it - ctx.columns->begin())];
      }
      if (const NodeRecord* n = resolve_node_ref(ctx, e.name)) return n->vid;
      if (const EdgeRecord* edge = resolve_edge_ref(ctx, e.name))
        return edge->src + "->" + edge->dst;
      throw SemanticError("unknown reference: " + e.name);
    }
    case ExprKind::Func:
      return eval_func(e, ctx);
    case ExprKind::Unary: {
      Value v = eval_expr(*e.args[0], ctx);
      if (e.un == UnOp::Not) return !value_truthy(v);
      if (const auto* i = std::get_if<std::int64_t>(&v)) return -*i;
      if (const auto* d = std::get_if<double>(&v)) return -*d;
      if (std::holds_alternative<std::nullptr_t>(v)) return nullptr;
      throw SemanticError("negation of non-numeric value");
    }
    case ExprKind::Binary: {
      switch (e.bin) {
        case BinOp::And:
          return value_truthy(eval_expr(*e.args[0], ctx)) &&
                 value_truthy(eval_expr(*e.args[1], ctx));
        case BinOp::Or:
          return value_truthy(eval_expr(*e.args[0], ctx)) ||
                 value_truthy(eval_expr(*e.args[1], ctx));
        case BinOp::Xor:
          return value_truthy(eval_expr(*e.args[0], ctx)) !=
                 value_truthy(eval_expr(*e.args[1], ctx));
        default:
          break;
      }
      Value a = eval_expr(*e.args[0], ctx);
      Value b = eval_expr(*e.args[1], ctx);
      switch (e.bin) {
        case BinOp::Eq: return value_eq(a, b);
        case BinOp::Ne: return !value_eq(a, b);
        case BinOp::Lt: return value_comparable(a, b) && value_less(a, b);
        case BinOp::Gt: return value_comparable(a, b) && value_less(b, a);
        case BinOp::Le: return value_comparable(a, b) && !value_less(b, a);
        case BinOp::Ge: return value_comparable(a, b) && !value_less(a, b);
        default: return eval_numeric_bin(e.bin, a, b);
      }
    }
    case ExprKind::Star:
      throw SemanticError("* outside count(*)");
    case ExprKind::List:
      throw SemanticError("list value outside SAMPLE");
  }
  throw SemanticError("unreachable expression kind");
}

// --- aggregates over a set of row contexts ---

Value eval_aggregate(const Expr& e, const std::vector<EvalCtx>& group) {
  if (e.kind == ExprKind::Func) {
    std::string name = lower(e.name);
    if (name == "count") {
      if (e.args.size() == 1 && e.args[0]->kind == ExprKind::Star)
        return static_cast<std::int64_t>(group.size());
      if (e.args.size() != 1) throw SemanticError("count() takes one argument");
      std::int64_t n = 0;
      for (const auto& ctx : group)
        if (!std::holds_alternative<std::nullptr_t>(eval_expr(*e.args[0], ctx))) ++n;
      return n;
    }
    if (name == "max" || name == "min" || name == "sum") {
      if (e.args.size() != 1) throw SemanticError(name + "() takes one argument");
      std::vector<Value> vals;
      for (const auto& ctx : group) {
        Value v = eval_expr(*e.args[0], ctx);
        if (!std::holds_alternative<std::nullptr_t>(v)) vals.push_back(std::move(v));
      }
      if (vals.empty()) return nullptr;
      if (name == "sum") {
        Value acc = std::int64_t{0};
        for (const auto& v : vals) acc = eval_numeric_bin(BinOp::Add, acc, v);
        return acc;
      }
      Value best = vals[0];
      for (const auto& v : vals) {
        bool better = name == "max" ? value_less(best, v) : value_less(v, best);
        if (better) best = v;
      }
      return best;
    }
  }
  if (e.kind == ExprKind::Binary) {
    Expr shallow;
    shallow.kind = ExprKind::Binary;
    shallow.bin = e.bin;
    Value a = eval_aggregate(*e.args[0], group);
    Value b = eval_aggregate(*e.args[1], group);
    switch (e.bin) {
      case BinOp::Eq: return value_eq(a, b);
      case BinOp::Ne: return !value_eq(a, b);
      default: return eval_numeric_bin(e.bin, a, b);
    }
  }
  // Non-aggregate subexpression: evaluate on the group's first row.
  if (group.empty()) return nullptr;
  return eval_expr(e, group[0]);
}

std::string column_name(const YieldItem& item, std::size_t index) {
  if (item.alias) return *item.alias;
  return "col" + std::to_string(index);
}

ResultTable rows_from_items(const std::vector<YieldItem>& items, bool distinct,
                            const std::vector<EvalCtx>& contexts) {
  ResultTable table;
  for (std::size_t i = 0; i < items.size(); ++i)
    table.columns.push_back(column_name(items[i], i));

  bool aggregated = std::any_of(items.begin(), items.end(), [](const YieldItem& it) {
    return contains_aggregate(*it.expr);
  });
  if (aggregated) {
    std::vector<Value> row;
    for (const auto& item : items) row.push_back(eval_aggregate(*item.expr, contexts));
    table.rows.push_back(std::move(row));
    return table;
  }
  for (const auto& ctx : contexts) {
    std::vector<Value> row;
    for (const auto& item : items) row.push_back(eval_expr(*item.expr, ctx));
    table.rows.push_back(std::move(row));
  }
  if (distinct) {
    std::vector<std::vector<Value>> unique;
    for (auto& row : table.rows) {
      bool dup = std::any_of(unique.begin(), unique.end(), [&](const auto& u) {
        if (u.size() != row.size()) return false;
        for (std::size_t i = 0; i < u.size(); ++i)
          if (!value_eq(u[i], row[i])) return false;
        return true;
      });
      if (!dup) unique.push_back(std::move(row));
    }
    table.rows = std::move(unique);
  }
  return table;
}

// --- GO ---

struct GoPath {
  std::vector<const EdgeRecord*> edges;
  std::vector<bool> forward;  // per hop: followed src->dst?
  std::string origin;
  std::string current;
};

ResultTable exec_go(const GoStmt& go, const GraphStore& store, const ExecParams& params) {
  std::set<std::string> etypes(go.over.begin(), go.over.end());
  if (!go.over_all) {
    for (const auto& t : etypes)
      if (!store.schema().find_edge(t)) throw SemanticError("unknown edge type: " + t);
  }
  auto edge_ok = [&](const EdgeRecord& e) {
    return go.over_all || etypes.count(e.etype) > 0;
  };

  std::mt19937_64 rng(params.sample_seed);

  std::vector<GoPath> finished;
  for (int target = go.steps_min; target <= go.steps_max; ++target) {
    std::vector<GoPath> frontier;
    for (const auto& vid : go.from_vids) frontier.push_back({{}, {}, vid, vid});
    for (int hop = 0; hop < target; ++hop) {
      std::vector<GoPath> next;
      for (const auto& path : frontier) {
        if (go.direction == GoDirection::Outgoing || go.direction == GoDirection::Bidirect) {
          for (const EdgeRecord* e : store.out_edges(path.current)) {
            if (!edge_ok(*e)) continue;
            GoPath p = path;
            p.edges.push_back(e);
            p.forward.push_back(true);
            p.current = e->dst;
            next.push_back(std::move(p));
          }
        }
        if (go.direction == GoDirection::Reversely || go.direction == GoDirection::Bidirect) {
          for (const EdgeRecord* e : store.in_edges(path.current)) {
            if (!edge_ok(*e)) continue;
            GoPath p = path;
            p.edges.push_back(e);
            p.forward.push_back(false);
            p.current = e->src;
            next.push_back(std::move(p));
          }
        }
      }
      if (go.sample && hop < static_cast<int>(go.sample->size())) {
        std::int64_t keep = (*go.sample)[static_cast<std::size_t>(hop)];
        if (keep < static_cast<std::int64_t>(next.size())) {
          std::vector<GoPath> sampled;
          std::sample(next.begin(), next.end(), std::back_inserter(sampled),
                      static_cast<std::size_t>(std::max<std::int64_t>(keep, 0)), rng);
          next = std::move(sampled);
        }
      }
      frontier = std::move(next);
    }
    finished.insert(finished.end(), std::make_move_iterator(frontier.begin()),
                    std::make_move_iterator(frontier.end()));
  }

  // Deterministic order: by (arrival vid, edge path).
  std::stable_sort(finished.begin(), finished.end(), [](const GoPath& a, const GoPath& b) {
    if (a.current != b.current) return a.current < b.current;
    auto key = [](const EdgeRecord* e) {
      return std::tie(e->src, e->dst, e->etype, e->rank);
    };
    return std::lexicographical_compare(
        a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(),
        [&](const EdgeRecord* x, const EdgeRecord* y) { return key(x) < key(y); });
  });
  // A BIDIRECT walk over a self-loop reaches the same (vertex, edge
  // sequence) twice — once per direction. Keep one witness, matching walk().
  finished.erase(std::unique(finished.begin(), finished.end(),
                             [](const GoPath& a, const GoPath& b) {
                               return a.current == b.current && a.edges == b.edges;
                             }),
                 finished.end());

  std::vector<EvalCtx> contexts;
  for (const auto& path : finished) {
    EvalCtx ctx;
    ctx.store = &store;
    ctx.dst = store.find_node(path.current);
    ctx.src = store.find_node(path.origin);
    ctx.edge = path.edges.empty() ? nullptr : path.edges.back();
    if (go.where && !value_truthy(eval_expr(*go.where, ctx))) continue;
    contexts.push_back(ctx);
  }
  return rows_from_items(go.yield_items, go.yield_distinct, contexts);
}

// --- FETCH / LOOKUP ---

ResultTable exec_fetch(const FetchStmt& fetch, const GraphStore& store) {
  if (!store.schema().find_tag(fetch.tag))
    throw SemanticError("unknown tag: " + fetch.tag);
  std::vector<EvalCtx> contexts;
  for (const auto& vid : fetch.vids) {
    const NodeRecord* n = store.find_node(vid);
    if (!n) continue;  // unknown vids contribute no rows
    if (!store.schema().tag_is_a(n->tag, fetch.tag)) continue;
    EvalCtx ctx;
    ctx.store = &store;
    ctx.vertex = n;
    contexts.push_back(ctx);
  }
  return rows_from_items(fetch.yield_items, false, contexts);
}

ResultTable exec_lookup(const LookupStmt& lookup, const GraphStore& store) {
  if (!store.schema().find_tag(lookup.tag))
    throw SemanticError("unknown tag: " + lookup.tag);
  std::vector<EvalCtx> contexts;
  for (const auto& [vid, node] : store.nodes()) {
    if (!store.schema().tag_is_a(node.tag, lookup.tag)) continue;
    EvalCtx ctx;
    ctx.store = &store;
    ctx.vertex = &node;
    if (lookup.where && !value_truthy(eval_expr(*lookup.where, ctx))) continue;
    contexts.push_back(ctx);
  }
  return rows_from_items(lookup.yield_items, false, contexts);
}

// --- MATCH ---

bool node_matches(const GraphStore& store, const NodeRecord& node, const NodePattern& pat) {
  if (pat.tag) {
    if (!store.schema().find_tag(*pat.tag)) throw SemanticError("unknown tag: " + *pat.tag);
    if (!store.schema().tag_is_a(node.tag, *pat.tag)) return false;
  }
  for (const auto& [key, want] : pat.props) {
    auto it = node.attrs.find(key);
    if (it == node.attrs.end() || !value_eq(it->second, want)) return false;
  }
  return true;
}

bool edge_matches(const GraphStore& store, const EdgeRecord& edge, const EdgePattern& pat) {
  if (pat.etype) {
    if (!store.schema().find_edge(*pat.etype))
      throw SemanticError("unknown edge type: " + *pat.etype);
    if (edge.etype != *pat.etype) return false;
  }
  for (const auto& [key, want] : pat.props) {
    auto it = edge.attrs.find(key);
    if (it == edge.attrs.end() || !value_eq(it->second, want)) return false;
  }
  return true;
}

ResultTable exec_match(const MatchStmt& match, const GraphStore& store) {
  struct Binding {
    std::map<std::string, const NodeRecord*> nodes;
    std::map<std::string, const EdgeRecord*> edges;
    std::vector<const NodeRecord*> chain;
  };

  std::vector<Binding> bindings;
  for (const auto& [vid, node] : store.nodes()) {
    if (!node_matches(store, node, match.nodes[0])) continue;
    Binding b;
    if (match.nodes[0].var) b.nodes[*match.nodes[0].var] = &node;
    b.chain.push_back(&node);
    bindings.push_back(std::move(b));
  }

  for (std::size_t hop = 0; hop < match.edges.size(); ++hop) {
    const auto& epat = match.edges[hop];
    const auto& npat = match.nodes[hop + 1];
    std::vector<Binding> next;
    for (const auto& b : bindings) {
      const NodeRecord* cur = b.chain.back();
      auto try_edge = [&](const EdgeRecord* e, const NodeRecord* other) {
        if (!edge_matches(store, *e, epat)) return;
        if (!node_matches(store, *other, npat)) return;
        Binding nb = b;
        if (epat.var) nb.edges[*epat.var] = e;
        if (npat.var) nb.nodes[*npat.var] = other;
        nb.chain.push_back(other);
        next.push_back(std::move(nb));
      };
      if (epat.dir == EdgeDir::Out || epat.dir == EdgeDir::Undirected) {
        for (const EdgeRecord* e : store.out_edges(cur->vid))
          try_edge(e, store.find_node(e->dst));
      }
      if (epat.dir == EdgeDir::In || epat.dir == EdgeDir::Undirected) {
        for (const EdgeRecord* e : store.in_edges(cur->vid))
          try_edge(e, store.find_node(e->src));
      }
    }
    bindings = std::move(next);
  }

  std::vector<EvalCtx> contexts;
  std::vector<const Binding*> kept;
  for (const auto& b : bindings) {
    EvalCtx ctx;
    ctx.store = &store;
    ctx.node_vars = &b.nodes;
    ctx.edge_vars = &b.edges;
    if (match.where && !value_truthy(eval_expr(*match.where, ctx))) continue;
    kept.push_back(&b);
  }
  for (const Binding* b : kept) {
    EvalCtx ctx;
    ctx.store = &store;
    ctx.node_vars = &b->nodes;
    ctx.edge_vars = &b->edges;
    contexts.push_back(ctx);
  }
  return rows_from_items(match.return_items, match.return_distinct, contexts);
}

// --- pipe stages ---

ResultTable apply_stage(const PipeStage& stage, ResultTable input,
                        const GraphStore& store) {
  struct Visitor {
    ResultTable input;
    const GraphStore* store;

    EvalCtx row_ctx(const std::vector<Value>& row) const {
      EvalCtx ctx;
      ctx.store = store;
      ctx.columns = &input.columns;
      ctx.row = &row;
      return ctx;
    }

    ResultTable operator()(const OrderByStage& s) {
      struct Keyed {
        std::vector<Value> keys;
        std::size_t index;
      };
      std::vector<Keyed> keyed;
      for (std::size_t i = 0; i < input.rows.size(); ++i) {
        Keyed k{{}, i};
        for (const auto& key : s.keys)
          k.keys.push_back(eval_expr(*key.expr, row_ctx(input.rows[i])));
        keyed.push_back(std::move(k));
      }
      std::stable_sort(keyed.begin(), keyed.end(), [&](const Keyed& a, const Keyed& b) {
        for (std::size_t i = 0; i < s.keys.size(); ++i) {
          if (value_less(a.keys[i], b.keys[i])) return s.keys[i].ascending;
          if (value_less(b.keys[i], a.keys[i])) return !s.keys[i].ascending;
        }
        return false;
      });
      ResultTable out;
      out.columns = input.columns;
      for (const auto& k : keyed) out.rows.push_back(std::move(input.rows[k.index]));
      return out;
    }

    ResultTable operator()(const LimitStage& s) {
      ResultTable out;
      out.columns = input.columns;
      for (std::int64_t i = s.offset;
           i < static_cast<std::int64_t>(input.rows.size()) && i < s.offset + s.count; ++i)
        out.rows.push_back(std::move(input.rows[static_cast<std::size_t>(i)]));
      return out;
    }

    ResultTable operator()(const SkipStage& s) {
      ResultTable out;
      out.columns = input.columns;
      for (std::size_t i = static_cast<std::size_t>(
               std::min<std::int64_t>(s.count, static_cast<std::int64_t>(input.rows.size())));
           i < input.rows.size(); ++i)
        out.rows.push_back(std::move(input.rows[i]));
      return out;
    }

    ResultTable operator()(const WhereStage& s) {
      ResultTable out;
      out.columns = input.columns;
      for (auto& row : input.rows)
        if (value_truthy(eval_expr(*s.predicate, row_ctx(row))))
          out.rows.push_back(std::move(row));
      return out;
    }

    ResultTable operator()(const YieldStage& s) {
      std::vector<EvalCtx> contexts;
      for (const auto& row : input.rows) contexts.push_back(row_ctx(row));
      return rows_from_items(s.items, s.distinct, contexts);
    }

    ResultTable operator()(const GroupByStage& s) {
      struct Group {
        std::vector<Value> key;
        std::vector<EvalCtx> members;
      };
      std::vector<Group> groups;
      for (const auto& row : input.rows) {
        std::vector<Value> key;
        for (const auto& k : s.keys) key.push_back(eval_expr(*k, row_ctx(row)));
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
          for (std::size_t i = 0; i < key.size(); ++i)
            if (!value_eq(g.key[i], key[i])) return false;
          return true;
        });
        if (it == groups.end()) {
          groups.push_back({std::move(key), {}});
          it = groups.end() - 1;
        }
        it->members.push_back(row_ctx(row));
      }
      // Deterministic group order: by key values.
      std::stable_sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
        for (std::size_t i = 0; i < a.key.size() && i < b.key.size(); ++i) {
          if (value_less(a.key[i], b.key[i])) return true;
          if (value_less(b.key[i], a.key[i])) return false;
        }
        return false;
      });
      ResultTable out;
      for (std::size_t i = 0; i < s.items.size(); ++i)
        out.columns.push_back(column_name(s.items[i], i));
      for (const auto& g : groups) {
        std::vector<Value> row;
        for (const auto& item : s.items) {
          if (contains_aggregate(*item.expr)) {
            row.push_back(eval_aggregate(*item.expr, g.members));
          } else {
            row.push_back(g.members.empty() ? Value(nullptr)
                                            : eval_expr(*item.expr, g.members[0]));
          }
        }
        out.rows.push_back(std::move(row));
      }
      return out;
    }
  };
  Visitor visitor{std::move(input), &store};
  return std::visit(visitor, stage);
}

}  // namespace

ResultTable execute(const GqlStatement& stmt, const GraphStore& store,
                    const ExecParams& params) {
  if (const auto* unsup = std::get_if<UnsupportedStmt>(&stmt.head))
    throw UnsupportedFeature(unsup->keyword);

  ResultTable table;
  if (const auto* go = std::get_if<GoStmt>(&stmt.head)) {
    table = exec_go(*go, store, params);
  } else if (const auto* fetch = std::get_if<FetchStmt>(&stmt.head)) {
    table = exec_fetch(*fetch, store);
  } else if (const auto* lookup = std::get_if<LookupStmt>(&stmt.head)) {
    table = exec_lookup(*lookup, store);
  } else if (const auto* match = std::get_if<MatchStmt>(&stmt.head)) {
    table = exec_match(*match, store);
  }
  for (const auto& stage : stmt.stages) table = apply_stage(stage, std::move(table), store);
  return table;
}

ResultTable execute_query(const std::string& text, const graph::GraphStore& store,
                          const ExecParams& params) {
  return execute(parse(text), store, params);
}

}  // namespace nl2gql::gql
