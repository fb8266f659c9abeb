#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nl2gql/value.hpp"

namespace nl2gql::gql {

struct Position {
  int line = 1;
  int col = 1;
};

enum class TokenKind {
  Keyword,
  Identifier,
  StringLit,
  NumberLit,
  Symbol,
  Pipe,
  Variable,  // $$, $^, $-
  Comment,
  End
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // keywords canonicalized uppercase
  Position pos;
};

// Raised on malformed query text; the signal counted by syntax accuracy.
struct GqlSyntaxError {
  Position pos;
  std::string expected;
  std::string found;
  std::string message() const;
};

// --- Expressions ---

enum class ExprKind { Literal, PipeCol, Prop, Var, Func, Unary, Binary, Star, List };
enum class BinOp { Eq, Ne, Lt, Le, Gt, Ge, And, Or, Xor, Add, Sub, Mul, Div, Mod };
enum class UnOp { Not, Neg };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  ExprKind kind = ExprKind::Literal;
  Value literal = nullptr;     // Literal
  std::string scope;           // Prop: "$$", "$^", a variable name, or "" (tag.attr)
  std::string tag;             // Prop
  std::string attr;            // Prop
  std::string name;            // PipeCol column / Var name / Func name
  BinOp bin = BinOp::Eq;
  UnOp un = UnOp::Not;
  std::vector<ExprPtr> args;   // Func args, Unary[1], Binary[2], List elements
};

ExprPtr clone(const Expr& e);
std::string render_expr(const Expr& e);
bool contains_aggregate(const Expr& e);

struct YieldItem {
  ExprPtr expr;
  std::optional<std::string> alias;
  bool distinct = false;  // set on the item list head when YIELD/RETURN DISTINCT
};

// --- Statements ---

enum class GoDirection { Outgoing, Reversely, Bidirect };

struct GoStmt {
  int steps_min = 1;
  int steps_max = 1;
  std::vector<std::string> from_vids;
  std::vector<std::string> over;  // empty when over_all
  bool over_all = false;
  GoDirection direction = GoDirection::Outgoing;
  ExprPtr where;
  std::vector<YieldItem> yield_items;
  bool yield_distinct = false;
  std::optional<std::vector<std::int64_t>> sample;
};

struct FetchStmt {
  std::string tag;
  std::vector<std::string> vids;
  std::vector<YieldItem> yield_items;
};

struct LookupStmt {
  std::string tag;
  ExprPtr where;
  std::vector<YieldItem> yield_items;
};

struct NodePattern {
  std::optional<std::string> var;
  std::optional<std::string> tag;
  std::map<std::string, Value> props;
};

enum class EdgeDir { Out, In, Undirected };

struct EdgePattern {
  std::optional<std::string> var;
  std::optional<std::string> etype;
  std::map<std::string, Value> props;
  EdgeDir dir = EdgeDir::Out;
};

struct MatchStmt {
  std::optional<std::string> path_var;
  std::vector<NodePattern> nodes;  // edges.size() + 1, at most 2 hops
  std::vector<EdgePattern> edges;
  ExprPtr where;
  std::vector<YieldItem> return_items;
  bool return_distinct = false;
};

// Recognized but not executable (INSERT, CREATE ..., WITH, UNWIND, ...).
struct UnsupportedStmt {
  std::string keyword;
};

// --- Pipe stages ---

struct OrderKey {
  ExprPtr expr;
  bool ascending = true;
};

struct OrderByStage {
  std::vector<OrderKey> keys;
};

struct LimitStage {
  std::int64_t offset = 0;
  std::int64_t count = 0;
};

struct SkipStage {
  std::int64_t count = 0;
};

struct GroupByStage {
  std::vector<ExprPtr> keys;
  std::vector<YieldItem> items;
};

struct YieldStage {
  std::vector<YieldItem> items;
  bool distinct = false;
};

struct WhereStage {
  ExprPtr predicate;
};

using PipeStage =
    std::variant<OrderByStage, LimitStage, SkipStage, GroupByStage, YieldStage, WhereStage>;

using StatementHead =
    std::variant<GoStmt, FetchStmt, LookupStmt, MatchStmt, UnsupportedStmt>;

struct GqlStatement {
  StatementHead head;
  std::vector<PipeStage> stages;
  std::string raw;  // original text, preserved for unsupported forms
};

bool is_unsupported(const GqlStatement& stmt);

// Surface inventory of one statement: its CRUD keyword, the clause
// keywords it uses, the schema names (tags/edges) it references, and the
// vertex ids it mentions. Names are deduplicated, first occurrence kept.
struct QueryProfile {
  std::vector<std::string> crud;
  std::vector<std::string> clauses;
  std::vector<std::string> schema_names;
  std::vector<std::string> vids;
};

QueryProfile profile(const GqlStatement& stmt);

// Canonical text for supported statement forms; reparses to an equal AST.
std::string render(const GqlStatement& stmt);

}  // namespace nl2gql::gql
