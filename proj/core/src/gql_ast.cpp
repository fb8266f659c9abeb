#include <sstream>

#include "nl2gql/gql/ast.hpp"

namespace nl2gql::gql {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string render_literal(const Value& v) {
  if (std::holds_alternative<std::string>(v)) return quote(std::get<std::string>(v));
  if (std::holds_alternative<std::nullptr_t>(v)) return "NULL";
  return value_to_text(v);
}

const char* bin_op_text(BinOp op) {
  switch (op) {
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "AND";
    case BinOp::Or: return "OR";
    case BinOp::Xor: return "XOR";
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
  }
  return "?";
}

std::string render_items(const std::vector<YieldItem>& items, bool distinct) {
  std::string out = distinct ? "DISTINCT " : "";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += render_expr(*items[i].expr);
    if (items[i].alias) out += " AS " + *items[i].alias;
  }
  return out;
}

std::string render_props(const std::map<std::string, Value>& props) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : props) {
    if (!first) out += ", ";
    first = false;
    out += k + ": " + render_literal(v);
  }
  return out + "}";
}

std::string render_stage(const PipeStage& stage) {
  struct Visitor {
    std::string operator()(const OrderByStage& s) const {
      std::string out = "ORDER BY ";
      for (std::size_t i = 0; i < s.keys.size(); ++i) {
        if (i) out += ", ";
        out += render_expr(*s.keys[i].expr);
        out += s.keys[i].ascending ? " ASC" : " DESC";
      }
      return out;
    }
    std::string operator()(const LimitStage& s) const {
      if (s.offset > 0)
        return "LIMIT " + std::to_string(s.offset) + ", " + std::to_string(s.count);
      return "LIMIT " + std::to_string(s.count);
    }
    std::string operator()(const SkipStage& s) const {
      return "SKIP " + std::to_string(s.count);
    }
    std::string operator()(const GroupByStage& s) const {
      std::string out = "GROUP BY ";
      for (std::size_t i = 0; i < s.keys.size(); ++i) {
        if (i) out += ", ";
        out += render_expr(*s.keys[i]);
      }
      out += " YIELD " + render_items(s.items, false);
      return out;
    }
    std::string operator()(const YieldStage& s) const {
      return "YIELD " + render_items(s.items, s.distinct);
    }
    std::string operator()(const WhereStage& s) const {
      return "WHERE " + render_expr(*s.predicate);
    }
  };
  return std::visit(Visitor{}, stage);
}

}  // namespace

std::string render_expr(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Literal:
      return render_literal(e.literal);
    case ExprKind::PipeCol:
      return "$-." + e.name;
    case ExprKind::Prop:
      if (e.scope.empty()) return e.tag + "." + e.attr;
      if (e.tag.empty()) return "properties(" + e.scope + ")." + e.attr;
      return e.scope + "." + e.tag + "." + e.attr;
    case ExprKind::Var:
      return e.name;
    case ExprKind::Func: {
      std::string out = e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += render_expr(*e.args[i]);
      }
      return out + ")";
    }
    case ExprKind::Unary:
      if (e.un == UnOp::Not) return "NOT (" + render_expr(*e.args[0]) + ")";
      return "-(" + render_expr(*e.args[0]) + ")";
    case ExprKind::Binary:
      return "(" + render_expr(*e.args[0]) + " " + bin_op_text(e.bin) + " " +
             render_expr(*e.args[1]) + ")";
    case ExprKind::Star:
      return "*";
    case ExprKind::List: {
      std::string out = "[";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += render_expr(*e.args[i]);
      }
      return out + "]";
    }
  }
  return "?";
}

namespace {

void push_unique(std::vector<std::string>& out, const std::string& s) {
  if (s.empty()) return;
  for (const auto& existing : out)
    if (existing == s) return;
  out.push_back(s);
}

void collect_expr_names(const Expr& e, QueryProfile& p) {
  if (e.kind == ExprKind::Prop && !e.tag.empty()) push_unique(p.schema_names, e.tag);
  for (const auto& arg : e.args) collect_expr_names(*arg, p);
}

void collect_items(const std::vector<YieldItem>& items, QueryProfile& p) {
  for (const auto& item : items) collect_expr_names(*item.expr, p);
}

}  // namespace

QueryProfile profile(const GqlStatement& stmt) {
  QueryProfile p;
  struct Visitor {
    QueryProfile& p;
    void operator()(const GoStmt& s) const {
      p.crud.push_back("GO");
      for (const auto& vid : s.from_vids) push_unique(p.vids, vid);
      for (const auto& e : s.over) push_unique(p.schema_names, e);
      if (s.where) {
        push_unique(p.clauses, "WHERE");
        collect_expr_names(*s.where, p);
      }
      if (s.sample) push_unique(p.clauses, "SAMPLE");
      collect_items(s.yield_items, p);
    }
    void operator()(const FetchStmt& s) const {
      p.crud.push_back("FETCH");
      push_unique(p.schema_names, s.tag);
      for (const auto& vid : s.vids) push_unique(p.vids, vid);
      collect_items(s.yield_items, p);
    }
    void operator()(const LookupStmt& s) const {
      p.crud.push_back("LOOKUP");
      push_unique(p.schema_names, s.tag);
      if (s.where) {
        push_unique(p.clauses, "WHERE");
        collect_expr_names(*s.where, p);
      }
      collect_items(s.yield_items, p);
    }
    void operator()(const MatchStmt& s) const {
      p.crud.push_back("MATCH");
      for (const auto& n : s.nodes)
        if (n.tag) push_unique(p.schema_names, *n.tag);
      for (const auto& e : s.edges)
        if (e.etype) push_unique(p.schema_names, *e.etype);
      if (s.where) {
        push_unique(p.clauses, "WHERE");
        collect_expr_names(*s.where, p);
      }
      collect_items(s.return_items, p);
    }
    void operator()(const UnsupportedStmt& s) const { p.crud.push_back(s.keyword); }
  };
  std::visit(Visitor{p}, stmt.head);
  for (const auto& stage : stmt.stages) {
    struct StageVisitor {
      QueryProfile& p;
      void operator()(const OrderByStage& s) const {
        push_unique(p.clauses, "ORDER BY");
        for (const auto& k : s.keys) collect_expr_names(*k.expr, p);
      }
      void operator()(const LimitStage&) const { push_unique(p.clauses, "LIMIT"); }
      void operator()(const SkipStage&) const { push_unique(p.clauses, "SKIP"); }
      void operator()(const GroupByStage& s) const {
        push_unique(p.clauses, "GROUP BY");
        for (const auto& k : s.keys) collect_expr_names(*k, p);
        collect_items(s.items, p);
      }
      void operator()(const YieldStage& s) const { collect_items(s.items, p); }
      void operator()(const WhereStage& s) const {
        push_unique(p.clauses, "WHERE");
        collect_expr_names(*s.predicate, p);
      }
    };
    std::visit(StageVisitor{p}, stage);
  }
  return p;
}

std::string render(const GqlStatement& stmt) {
  struct Visitor {
    std::string operator()(const GoStmt& s) const {
      std::string out = "GO";
      if (s.steps_min != 1 || s.steps_max != 1) {
        out += " " + std::to_string(s.steps_min);
        if (s.steps_max != s.steps_min) out += " TO " + std::to_string(s.steps_max);
        out += " STEPS";
      }
      out += " FROM ";
      for (std::size_t i = 0; i < s.from_vids.size(); ++i) {
        if (i) out += ", ";
        out += quote(s.from_vids[i]);
      }
      out += " OVER ";
      if (s.over_all) {
        out += "*";
      } else {
        for (std::size_t i = 0; i < s.over.size(); ++i) {
          if (i) out += ", ";
          out += s.over[i];
        }
      }
      if (s.direction == GoDirection::Reversely) out += " REVERSELY";
      if (s.direction == GoDirection::Bidirect) out += " BIDIRECT";
      if (s.where) out += " WHERE " + render_expr(*s.where);
      out += " YIELD " + render_items(s.yield_items, s.yield_distinct);
      if (s.sample) {
        out += " SAMPLE [";
        for (std::size_t i = 0; i < s.sample->size(); ++i) {
          if (i) out += ", ";
          out += std::to_string((*s.sample)[i]);
        }
        out += "]";
      }
      return out;
    }
    std::string operator()(const FetchStmt& s) const {
      std::string out = "FETCH PROP ON " + s.tag + " ";
      for (std::size_t i = 0; i < s.vids.size(); ++i) {
        if (i) out += ", ";
        out += quote(s.vids[i]);
      }
      out += " YIELD " + render_items(s.yield_items, false);
      return out;
    }
    std::string operator()(const LookupStmt& s) const {
      std::string out = "LOOKUP ON " + s.tag;
      if (s.where) out += " WHERE " + render_expr(*s.where);
      out += " YIELD " + render_items(s.yield_items, false);
      return out;
    }
    std::string operator()(const MatchStmt& s) const {
      std::string out = "MATCH ";
      if (s.path_var) out += *s.path_var + "=";
      for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        const auto& n = s.nodes[i];
        out += "(";
        if (n.var) out += *n.var;
        if (n.tag) out += ":" + *n.tag;
        if (!n.props.empty()) out += render_props(n.props);
        out += ")";
        if (i < s.edges.size()) {
          const auto& e = s.edges[i];
          bool has_body = e.var || e.etype || !e.props.empty();
          std::string body;
          if (has_body) {
            body = "[";
            if (e.var) body += *e.var;
            if (e.etype) body += ":" + *e.etype;
            if (!e.props.empty()) body += e.props.empty() ? "" : render_props(e.props);
            body += "]";
          }
          switch (e.dir) {
            case EdgeDir::Out: out += has_body ? "-" + body + "->" : "-->"; break;
            case EdgeDir::In: out += has_body ? "<-" + body + "-" : "<--"; break;
            case EdgeDir::Undirected: out += has_body ? "-" + body + "-" : "--"; break;
          }
        }
      }
      if (s.where) out += " WHERE " + render_expr(*s.where);
      out += " RETURN " + render_items(s.return_items, s.return_distinct);
      return out;
    }
    std::string operator()(const UnsupportedStmt&) const { return ""; }
  };
  if (is_unsupported(stmt)) return stmt.raw;
  std::string out = std::visit(Visitor{}, stmt.head);
  for (const auto& stage : stmt.stages) out += " | " + render_stage(stage);
  return out;
}

}  // namespace nl2gql::gql
