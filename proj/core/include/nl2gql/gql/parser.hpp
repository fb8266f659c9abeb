#pragma once

#include <string>
#include <variant>
#include <vector>

#include "nl2gql/gql/ast.hpp"

namespace nl2gql::gql {

// Tokenizes the full input. Throws GqlSyntaxError on unterminated strings
// or bytes outside the token alphabet.
std::vector<Token> tokenize(const std::string& text);

// Full AST for supported forms; UnsupportedStmt for recognized-but-not-
// executable keywords. Throws GqlSyntaxError otherwise. Total: never loops
// or crashes on arbitrary input.
GqlStatement parse(const std::string& text);

struct ValidationOk {};
using ValidationResult = std::variant<ValidationOk, GqlSyntaxError>;

// Ok iff parse succeeds (unsupported forms still count as valid syntax).
ValidationResult validate(const std::string& text);

}  // namespace nl2gql::gql
