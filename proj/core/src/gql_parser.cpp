#include <algorithm>
#include <cctype>
#include <set>

#include "nl2gql/gql/parser.hpp"

namespace nl2gql::gql {

namespace {

bool is_aggregate_name(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return lower == "count" || lower == "max" || lower == "min" || lower == "sum";
}

class Parser {
 public:
  explicit Parser(const std::string& text) : raw_(text), toks_(tokenize(text)) {}

  GqlStatement parse_statement() {
    GqlStatement stmt;
    stmt.raw = raw_;
    const Token& t = peek();
    if (t.kind == TokenKind::End) throw err("a statement keyword");
    if (t.kind != TokenKind::Keyword) throw err("a statement keyword");

    if (t.text == "GO") {
      stmt.head = parse_go();
    } else if (t.text == "FETCH") {
      stmt.head = parse_fetch();
    } else if (t.text == "LOOKUP") {
      stmt.head = parse_lookup();
    } else if (t.text == "MATCH") {
      stmt.head = parse_match();
    } else if (t.text == "OPTIONAL") {
      next();
      expect_keyword("MATCH");
      stmt.head = unsupported("OPTIONAL MATCH");
    } else if (t.text == "CREATE") {
      next();
      std::string sub = "CREATE";
      if (peek().kind == TokenKind::Keyword &&
          (peek().text == "SPACE" || peek().text == "TAG" || peek().text == "EDGE")) {
        sub += " " + next().text;
      }
      stmt.head = unsupported(sub);
    } else if (t.text == "GET") {
      next();
      if (peek().kind == TokenKind::Keyword && peek().text == "SUBGRAPH") next();
      stmt.head = unsupported("GET SUBGRAPH");
    } else if (t.text == "FIND") {
      next();
      stmt.head = unsupported("FIND PATH");
    } else if (t.text == "INSERT" || t.text == "UPDATE" || t.text == "UPSERT" ||
               t.text == "DELETE" || t.text == "DROP" || t.text == "ALTER" ||
               t.text == "SHOW" || t.text == "WITH" || t.text == "UNWIND") {
      next();
      stmt.head = unsupported(t.text);
    } else {
      throw err("a statement keyword");
    }

    if (std::holds_alternative<UnsupportedStmt>(stmt.head)) return stmt;

    // Trailing clauses and pipe stages.
    for (;;) {
      if (peek().kind == TokenKind::Pipe) {
        next();
        stmt.stages.push_back(parse_stage());
      } else if (peek_is_keyword("ORDER") || peek_is_keyword("SKIP") ||
                 peek_is_keyword("LIMIT")) {
        stmt.stages.push_back(parse_stage());
      } else {
        break;
      }
    }
    accept_symbol(";");
    if (peek().kind != TokenKind::End) throw err("end of statement");
    return stmt;
  }

 private:
  std::string raw_;
  std::vector<Token> toks_;
  std::size_t p_ = 0;
  std::set<std::string> declared_;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(p_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& next() { return toks_[std::min(p_++, toks_.size() - 1)]; }

  GqlSyntaxError err(const std::string& expected) const {
    const Token& t = peek();
    return GqlSyntaxError{t.pos, expected, t.text};
  }

  bool peek_is_keyword(const std::string& kw, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Keyword && peek(ahead).text == kw;
  }
  bool peek_is_symbol(const std::string& s, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Symbol && peek(ahead).text == s;
  }

  bool accept_keyword(const std::string& kw) {
    if (peek_is_keyword(kw)) {
      next();
      return true;
    }
    return false;
  }
  void expect_keyword(const std::string& kw) {
    if (!accept_keyword(kw)) throw err(kw);
  }
  bool accept_symbol(const std::string& s) {
    if (peek_is_symbol(s)) {
      next();
      return true;
    }
    return false;
  }
  void expect_symbol(const std::string& s) {
    if (!accept_symbol(s)) throw err("'" + s + "'");
  }

  std::string expect_identifier(const std::string& what) {
    if (peek().kind != TokenKind::Identifier) throw err(what);
    return next().text;
  }

  UnsupportedStmt unsupported(const std::string& keyword) {
    // Lenient: the rest only has to tokenize.
    while (peek().kind != TokenKind::End) next();
    return UnsupportedStmt{keyword};
  }

  std::int64_t expect_int(const std::string& what) {
    if (peek().kind != TokenKind::NumberLit || peek().text.find('.') != std::string::npos)
      throw err(what);
    return std::stoll(next().text);
  }

  // --- literals and expressions ---

  Value parse_literal_value() {
    const Token& t = peek();
    if (t.kind == TokenKind::StringLit) return Value(next().text);
    if (t.kind == TokenKind::NumberLit) {
      std::string num = next().text;
      if (num.find('.') != std::string::npos) return Value(std::stod(num));
      return Value(static_cast<std::int64_t>(std::stoll(num)));
    }
    if (t.kind == TokenKind::Keyword) {
      if (t.text == "TRUE") {
        next();
        return Value(true);
      }
      if (t.text == "FALSE") {
        next();
        return Value(false);
      }
      if (t.text == "NULL") {
        next();
        return Value(nullptr);
      }
    }
    if (peek_is_symbol("-")) {
      next();
      Value v = parse_literal_value();
      if (auto* i = std::get_if<std::int64_t>(&v)) return Value(-*i);
      if (auto* d = std::get_if<double>(&v)) return Value(-*d);
      throw err("a number");
    }
    throw err("a literal");
  }

  ExprPtr make(ExprKind k) {
    auto e = std::make_unique<Expr>();
    e->kind = k;
    return e;
  }

  ExprPtr parse_expr(bool allow_bare) { return parse_or(allow_bare); }

  ExprPtr parse_or(bool ab) {
    auto lhs = parse_xor(ab);
    while (accept_keyword("OR")) {
      auto e = make(ExprKind::Binary);
      e->bin = BinOp::Or;
      e->args.push_back(std::move(lhs));
      e->args.push_back(parse_xor(ab));
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_xor(bool ab) {
    auto lhs = parse_and(ab);
    while (accept_keyword("XOR")) {
      auto e = make(ExprKind::Binary);
      e->bin = BinOp::Xor;
      e->args.push_back(std::move(lhs));
      e->args.push_back(parse_and(ab));
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_and(bool ab) {
    auto lhs = parse_not(ab);
    while (accept_keyword("AND")) {
      auto e = make(ExprKind::Binary);
      e->bin = BinOp::And;
      e->args.push_back(std::move(lhs));
      e->args.push_back(parse_not(ab));
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_not(bool ab) {
    if (accept_keyword("NOT")) {
      auto e = make(ExprKind::Unary);
      e->un = UnOp::Not;
      e->args.push_back(parse_not(ab));
      return e;
    }
    return parse_comparison(ab);
  }

  ExprPtr parse_comparison(bool ab) {
    auto lhs = parse_additive(ab);
    static const std::pair<const char*, BinOp> ops[] = {
        {"==", BinOp::Eq}, {"!=", BinOp::Ne}, {">=", BinOp::Ge},
        {"<=", BinOp::Le}, {">", BinOp::Gt},  {"<", BinOp::Lt}};
    for (const auto& [sym, op] : ops) {
      if (peek_is_symbol(sym)) {
        next();
        auto e = make(ExprKind::Binary);
        e->bin = op;
        e->args.push_back(std::move(lhs));
        e->args.push_back(parse_additive(ab));
        return e;
      }
    }
    return lhs;
  }

  ExprPtr parse_additive(bool ab) {
    auto lhs = parse_multiplicative(ab);
    for (;;) {
      BinOp op;
      if (peek_is_symbol("+")) op = BinOp::Add;
      else if (peek_is_symbol("-")) op = BinOp::Sub;
      else break;
      next();
      auto e = make(ExprKind::Binary);
      e->bin = op;
      e->args.push_back(std::move(lhs));
      e->args.push_back(parse_multiplicative(ab));
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_multiplicative(bool ab) {
    auto lhs = parse_unary(ab);
    for (;;) {
      BinOp op;
      if (peek_is_symbol("*")) op = BinOp::Mul;
      else if (peek_is_symbol("/")) op = BinOp::Div;
      else if (peek_is_symbol("%")) op = BinOp::Mod;
      else break;
      next();
      auto e = make(ExprKind::Binary);
      e->bin = op;
      e->args.push_back(std::move(lhs));
      e->args.push_back(parse_unary(ab));
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_unary(bool ab) {
    if (peek_is_symbol("-")) {
      next();
      auto e = make(ExprKind::Unary);
      e->un = UnOp::Neg;
      e->args.push_back(parse_unary(ab));
      return e;
    }
    return parse_primary(ab);
  }

  ExprPtr parse_primary(bool ab) {
    const Token& t = peek();

    if (t.kind == TokenKind::StringLit || t.kind == TokenKind::NumberLit ||
        (t.kind == TokenKind::Keyword &&
         (t.text == "TRUE" || t.text == "FALSE" || t.text == "NULL"))) {
      auto e = make(ExprKind::Literal);
      e->literal = parse_literal_value();
      return e;
    }

    if (peek_is_symbol("(")) {
      next();
      auto e = parse_expr(ab);
      expect_symbol(")");
      return e;
    }

    if (peek_is_symbol("[")) {
      next();
      auto e = make(ExprKind::List);
      if (!peek_is_symbol("]")) {
        e->args.push_back(parse_expr(ab));
        while (accept_symbol(",")) e->args.push_back(parse_expr(ab));
      }
      expect_symbol("]");
      return e;
    }

    if (t.kind == TokenKind::Variable) {
      std::string var = next().text;
      if (var == "$-") {
        expect_symbol(".");
        auto e = make(ExprKind::PipeCol);
        if (peek().kind != TokenKind::Identifier && peek().kind != TokenKind::Keyword)
          throw err("a column name");
        e->name = next().text;
        return e;
      }
      // $$ / $^ : either $$.tag.attr or bare (inside function args).
      if (accept_symbol(".")) {
        auto e = make(ExprKind::Prop);
        e->scope = var;
        e->tag = expect_identifier("a tag name");
        expect_symbol(".");
        e->attr = expect_identifier("an attribute name");
        return e;
      }
      auto e = make(ExprKind::Var);
      e->name = var;
      return e;
    }

    if (t.kind == TokenKind::Keyword && (t.text == "VERTEX" || t.text == "EDGE" ||
                                         t.text == "VERTICES" || t.text == "EDGES" ||
                                         t.text == "PATH")) {
      // Special references used as function arguments: id(vertex), dst(edge).
      auto e = make(ExprKind::Var);
      std::string name = next().text;
      std::transform(name.begin(), name.end(), name.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      e->name = name;
      return e;
    }

    if (t.kind == TokenKind::Identifier) {
      std::string name = next().text;
      if (accept_symbol("(")) {
        auto e = make(ExprKind::Func);
        e->name = name;
        if (!peek_is_symbol(")")) {
          if (peek_is_symbol("*")) {
            next();
            e->args.push_back(make(ExprKind::Star));
          } else {
            e->args.push_back(parse_expr(true));
          }
          while (accept_symbol(",")) e->args.push_back(parse_expr(true));
        }
        expect_symbol(")");
        // properties($$).attr collapses into a tagless property reference.
        if (e->name == "properties" && accept_symbol(".")) {
          if (e->args.size() != 1 || e->args[0]->kind != ExprKind::Var)
            throw err("properties(<ref>).attr");
          auto prop = make(ExprKind::Prop);
          prop->scope = e->args[0]->name;
          prop->attr = expect_identifier("an attribute name");
          return prop;
        }
        return e;
      }
      if (accept_symbol(".")) {
        std::string second = expect_identifier("a property name");
        if (accept_symbol(".")) {
          auto e = make(ExprKind::Prop);
          e->scope = name;
          e->tag = second;
          e->attr = expect_identifier("an attribute name");
          return e;
        }
        auto e = make(ExprKind::Prop);
        e->tag = name;
        e->attr = second;
        return e;
      }
      if (ab || declared_.count(name)) {
        auto e = make(ExprKind::Var);
        e->name = name;
        return e;
      }
      throw GqlSyntaxError{t.pos, "a qualified property reference (tag.attr) or function call",
                           name};
    }

    throw err("an expression");
  }

  // --- yield items ---

  std::vector<YieldItem> parse_yield_items(bool allow_bare, bool* distinct) {
    if (distinct) *distinct = accept_keyword("DISTINCT");
    std::vector<YieldItem> items;
    for (;;) {
      YieldItem item;
      item.expr = parse_expr(allow_bare);
      if (accept_keyword("AS")) {
        if (peek().kind != TokenKind::Identifier && peek().kind != TokenKind::Keyword)
          throw err("an alias");
        item.alias = next().text;
        declared_.insert(*item.alias);
      }
      items.push_back(std::move(item));
      if (!accept_symbol(",")) break;
    }
    return items;
  }

  std::vector<std::string> parse_vid_list() {
    std::vector<std::string> vids;
    for (;;) {
      if (peek().kind != TokenKind::StringLit) throw err("a quoted vertex id");
      vids.push_back(next().text);
      if (!accept_symbol(",")) break;
    }
    return vids;
  }

  // --- statements ---

  GoStmt parse_go() {
    expect_keyword("GO");
    GoStmt go;
    if (peek().kind == TokenKind::NumberLit) {
      go.steps_min = go.steps_max = static_cast<int>(expect_int("a step count"));
      if (accept_keyword("TO"))
        go.steps_max = static_cast<int>(expect_int("a step count"));
      if (!accept_keyword("STEPS")) expect_keyword("STEP");
      if (go.steps_min < 1 || go.steps_max < go.steps_min) throw err("a valid step range");
    }
    expect_keyword("FROM");
    go.from_vids = parse_vid_list();
    expect_keyword("OVER");
    if (accept_symbol("*")) {
      go.over_all = true;
    } else {
      for (;;) {
        go.over.push_back(expect_identifier("an edge type"));
        if (!accept_symbol(",")) break;
      }
    }
    if (accept_keyword("REVERSELY")) go.direction = GoDirection::Reversely;
    else if (accept_keyword("BIDIRECT")) go.direction = GoDirection::Bidirect;
    if (accept_keyword("WHERE")) go.where = parse_expr(false);
    if (accept_keyword("YIELD")) {
      go.yield_items = parse_yield_items(false, &go.yield_distinct);
    } else {
      // Implicit output column, mirroring the store's default.
      YieldItem item;
      item.expr = make(ExprKind::Func);
      item.expr->name = "dst";
      auto arg = make(ExprKind::Var);
      arg->name = "edge";
      item.expr->args.push_back(std::move(arg));
      item.alias = "dst";
      go.yield_items.push_back(std::move(item));
    }
    if (accept_keyword("SAMPLE")) {
      expect_symbol("[");
      std::vector<std::int64_t> counts;
      if (!peek_is_symbol("]")) {
        counts.push_back(expect_int("a sample count"));
        while (accept_symbol(",")) counts.push_back(expect_int("a sample count"));
      }
      expect_symbol("]");
      go.sample = std::move(counts);
    }
    return go;
  }

  FetchStmt parse_fetch() {
    expect_keyword("FETCH");
    expect_keyword("PROP");
    expect_keyword("ON");
    FetchStmt fetch;
    fetch.tag = expect_identifier("a tag name");
    fetch.vids = parse_vid_list();
    if (accept_keyword("YIELD")) {
      fetch.yield_items = parse_yield_items(false, nullptr);
    } else {
      YieldItem item;
      item.expr = make(ExprKind::Func);
      item.expr->name = "id";
      auto arg = make(ExprKind::Var);
      arg->name = "vertex";
      item.expr->args.push_back(std::move(arg));
      item.alias = "vid";
      fetch.yield_items.push_back(std::move(item));
    }
    return fetch;
  }

  LookupStmt parse_lookup() {
    expect_keyword("LOOKUP");
    expect_keyword("ON");
    LookupStmt lookup;
    lookup.tag = expect_identifier("a tag name");
    if (accept_keyword("WHERE")) lookup.where = parse_expr(false);
    if (accept_keyword("YIELD")) {
      lookup.yield_items = parse_yield_items(false, nullptr);
    } else {
      YieldItem item;
      item.expr = make(ExprKind::Func);
      item.expr->name = "id";
      auto arg = make(ExprKind::Var);
      arg->name = "vertex";
      item.expr->args.push_back(std::move(arg));
      item.alias = "VertexID";
      lookup.yield_items.push_back(std::move(item));
    }
    return lookup;
  }

  std::map<std::string, Value> parse_prop_map() {
    std::map<std::string, Value> props;
    expect_symbol("{");
    if (!peek_is_symbol("}")) {
      for (;;) {
        if (peek().kind != TokenKind::Identifier && peek().kind != TokenKind::Keyword)
          throw err("a property name");
        std::string key = next().text;
        expect_symbol(":");
        props[key] = parse_literal_value();
        if (!accept_symbol(",")) break;
      }
    }
    expect_symbol("}");
    return props;
  }

  NodePattern parse_node_pattern() {
    NodePattern node;
    expect_symbol("(");
    if (peek().kind == TokenKind::Identifier) {
      node.var = next().text;
      declared_.insert(*node.var);
    }
    if (accept_symbol(":")) node.tag = expect_identifier("a tag name");
    if (peek_is_symbol("{")) node.props = parse_prop_map();
    expect_symbol(")");
    return node;
  }

  // Returns false when no further edge pattern follows.
  bool parse_edge_pattern(EdgePattern* out) {
    if (peek_is_symbol("-->")) {
      next();
      out->dir = EdgeDir::Out;
      return true;
    }
    if (peek_is_symbol("<--")) {
      next();
      out->dir = EdgeDir::In;
      return true;
    }
    if (peek_is_symbol("--")) {
      next();
      out->dir = EdgeDir::Undirected;
      return true;
    }
    if (peek_is_symbol("<-")) {
      next();
      if (peek_is_symbol("[")) {
        parse_edge_body(out);
        expect_symbol("-");
      }
      out->dir = EdgeDir::In;
      return true;
    }
    if (peek_is_symbol("-")) {
      next();
      if (peek_is_symbol("[")) {
        parse_edge_body(out);
        if (accept_symbol("->")) out->dir = EdgeDir::Out;
        else if (accept_symbol("-")) out->dir = EdgeDir::Undirected;
        else throw err("'->' or '-'");
        return true;
      }
      out->dir = EdgeDir::Undirected;
      return true;
    }
    return false;
  }

  void parse_edge_body(EdgePattern* out) {
    expect_symbol("[");
    if (peek().kind == TokenKind::Identifier && !peek_is_symbol(":", 1) &&
        !peek_is_symbol("]", 1) && !peek_is_symbol("{", 1)) {
      throw err("an edge pattern");
    }
    if (peek().kind == TokenKind::Identifier) {
      out->var = next().text;
      declared_.insert(*out->var);
    }
    if (accept_symbol(":")) out->etype = expect_identifier("an edge type");
    if (peek_is_symbol("{")) out->props = parse_prop_map();
    expect_symbol("]");
  }

  StatementHead parse_match() {
    expect_keyword("MATCH");
    MatchStmt match;
    if (peek().kind == TokenKind::Identifier && peek_is_symbol("=", 1)) {
      match.path_var = next().text;
      next();  // '='
      declared_.insert(*match.path_var);
    }
    match.nodes.push_back(parse_node_pattern());
    for (;;) {
      EdgePattern edge;
      if (!parse_edge_pattern(&edge)) break;
      match.edges.push_back(std::move(edge));
      match.nodes.push_back(parse_node_pattern());
      if (match.edges.size() > 2) {
        // Beyond the supported pattern depth: recognized, not executable.
        return unsupported("MATCH");
      }
    }
    if (accept_keyword("WHERE")) match.where = parse_expr(false);
    if (peek_is_keyword("WITH")) return unsupported("WITH");
    if (peek_is_keyword("UNWIND")) return unsupported("UNWIND");
    expect_keyword("RETURN");
    match.return_items = parse_yield_items(false, &match.return_distinct);
    return match;
  }

  // --- pipe stages ---

  PipeStage parse_stage() {
    if (accept_keyword("ORDER")) {
      expect_keyword("BY");
      OrderByStage stage;
      for (;;) {
        OrderKey key;
        key.expr = parse_expr(true);
        if (accept_keyword("DESC")) key.ascending = false;
        else accept_keyword("ASC");
        stage.keys.push_back(std::move(key));
        if (!accept_symbol(",")) break;
      }
      return stage;
    }
    if (accept_keyword("LIMIT")) {
      LimitStage stage;
      std::int64_t first = expect_int("a row count");
      if (accept_symbol(",")) {
        stage.offset = first;
        stage.count = expect_int("a row count");
      } else {
        stage.count = first;
      }
      if (stage.count < 0 || stage.offset < 0) throw err("a nonnegative row count");
      return stage;
    }
    if (accept_keyword("SKIP")) {
      SkipStage stage;
      stage.count = expect_int("a row count");
      if (stage.count < 0) throw err("a nonnegative row count");
      return stage;
    }
    if (accept_keyword("GROUP")) {
      expect_keyword("BY");
      GroupByStage stage;
      stage.keys.push_back(parse_expr(true));
      while (accept_symbol(",")) stage.keys.push_back(parse_expr(true));
      expect_keyword("YIELD");
      stage.items = parse_yield_items(true, nullptr);
      if (stage.items.empty()) throw err("aggregate yield items");
      return stage;
    }
    if (accept_keyword("YIELD") || accept_keyword("RETURN")) {
      YieldStage stage;
      stage.items = parse_yield_items(true, &stage.distinct);
      return stage;
    }
    if (accept_keyword("WHERE")) {
      WhereStage stage;
      stage.predicate = parse_expr(true);
      return stage;
    }
    throw err("a pipe stage (ORDER BY, LIMIT, SKIP, GROUP BY, YIELD, WHERE)");
  }
};

}  // namespace

GqlStatement parse(const std::string& text) {
  if (text.size() > 64 * 1024) throw GqlSyntaxError{{1, 1}, "input under 64 KiB", "longer input"};
  bool blank = true;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) {
      blank = false;
      break;
    }
  if (blank) throw GqlSyntaxError{{1, 1}, "a statement", ""};
  Parser parser(text);
  return parser.parse_statement();
}

ValidationResult validate(const std::string& text) {
  try {
    parse(text);
    return ValidationOk{};
  } catch (const GqlSyntaxError& e) {
    return e;
  }
}

bool is_unsupported(const GqlStatement& stmt) {
  return std::holds_alternative<UnsupportedStmt>(stmt.head);
}

bool contains_aggregate(const Expr& e) {
  if (e.kind == ExprKind::Func && is_aggregate_name(e.name)) return true;
  for (const auto& a : e.args)
    if (contains_aggregate(*a)) return true;
  return false;
}

ExprPtr clone(const Expr& e) {
  auto out = std::make_unique<Expr>();
  out->kind = e.kind;
  out->literal = e.literal;
  out->scope = e.scope;
  out->tag = e.tag;
  out->attr = e.attr;
  out->name = e.name;
  out->bin = e.bin;
  out->un = e.un;
  for (const auto& a : e.args) out->args.push_back(clone(*a));
  return out;
}

}  // namespace nl2gql::gql
