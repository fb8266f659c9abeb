#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <cstring>

#include "nl2gql/gql/parser.hpp"

namespace nl2gql::gql {

std::string GqlSyntaxError::message() const {
  return "syntax error at " + std::to_string(pos.line) + ":" + std::to_string(pos.col) +
         ": expected " + expected + ", found " + (found.empty() ? "end of input" : found);
}

namespace {

const char* kKeywords[] = {
    "GO",      "FROM",    "OVER",     "REVERSELY", "BIDIRECT", "YIELD",    "WHERE",
    "AS",      "STEPS",   "STEP",     "TO",        "FETCH",    "PROP",     "ON",
    "LOOKUP",  "MATCH",   "RETURN",   "ORDER",     "BY",       "ASC",      "DESC",
    "SKIP",    "LIMIT",   "SAMPLE",   "GROUP",     "AND",      "OR",       "NOT",
    "XOR",     "DISTINCT", "INSERT",  "UPDATE",    "UPSERT",   "DELETE",   "CREATE",
    "GET",     "SUBGRAPH", "FIND",    "WITH",      "UNWIND",   "VERTEX",   "EDGE",
    "TAG",     "SPACE",   "PATH",     "SHORTEST",  "SET",      "VALUES",   "OPTIONAL",
    "SHOW",    "DROP",    "ALTER",    "TRUE",      "FALSE",    "NULL",     "VERTICES",
    "EDGES",   "IS",      "IN",
};

bool is_keyword(const std::string& upper) {
  return std::find_if(std::begin(kKeywords), std::end(kKeywords),
                      [&](const char* k) { return upper == k; }) != std::end(kKeywords);
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool ident_cont(char c) {
  return ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  Position pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.col = 1;
      } else {
        ++pos.col;
      }
    }
  };

  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Position start = pos;

    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      std::size_t end = text.find('\n', i);
      std::size_t len = (end == std::string::npos ? text.size() : end) - i;
      advance(len);
      continue;  // comments are skipped, not emitted
    }

    if (c == '"' || c == '\'') {
      char quote = c;
      std::string lit;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < text.size()) {
        if (text[j] == '\\' && j + 1 < text.size()) {
          char esc = text[j + 1];
          switch (esc) {
            case 'n': lit += '\n'; break;
            case 't': lit += '\t'; break;
            default: lit += esc;
          }
          j += 2;
          continue;
        }
        if (text[j] == quote) {
          closed = true;
          break;
        }
        lit += text[j];
        ++j;
      }
      if (!closed) throw GqlSyntaxError{start, "closing quote", "end of input"};
      advance(j + 1 - i);
      out.push_back({TokenKind::StringLit, lit, start});
      continue;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < text.size() &&
         std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i;
      bool has_dot = false;
      while (j < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[j])) ||
              (text[j] == '.' && !has_dot && j + 1 < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[j + 1]))))) {
        if (text[j] == '.') has_dot = true;
        ++j;
      }
      std::string num = text.substr(i, j - i);
      advance(j - i);
      out.push_back({TokenKind::NumberLit, num, start});
      continue;
    }

    if (c == '$') {
      if (i + 1 < text.size() &&
          (text[i + 1] == '$' || text[i + 1] == '^' || text[i + 1] == '-')) {
        std::string var = text.substr(i, 2);
        advance(2);
        out.push_back({TokenKind::Variable, var, start});
        continue;
      }
      // Bare $ refers to the destination vertex, like $$.
      advance(1);
      out.push_back({TokenKind::Variable, "$", start});
      continue;
    }

    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_cont(text[j])) ++j;
      std::string word = text.substr(i, j - i);
      std::string upper = word;
      std::transform(upper.begin(), upper.end(), upper.begin(),
                     [](unsigned char ch) { return std::toupper(ch); });
      advance(j - i);
      if (is_keyword(upper)) {
        out.push_back({TokenKind::Keyword, upper, start});
      } else {
        out.push_back({TokenKind::Identifier, word, start});
      }
      continue;
    }

    if (c == '|') {
      advance(1);
      out.push_back({TokenKind::Pipe, "|", start});
      continue;
    }

    // Multi-char symbols, longest first.
    static const char* kSymbols[] = {"<--", "-->", "<-", "->", "--", "==", "!=",
                                     ">=",  "<=",  "=~", "(",  ")",  "[",  "]",
                                     "{",   "}",   ",",  ".",  ":",  ";",  ">",
                                     "<",   "=",   "+",  "-",  "*",  "/",  "%",
                                     "!",   "?",   "@",  "&"};
    bool matched = false;
    for (const char* sym : kSymbols) {
      std::size_t len = std::strlen(sym);
      if (text.compare(i, len, sym) == 0) {
        advance(len);
        out.push_back({TokenKind::Symbol, sym, start});
        matched = true;
        break;
      }
    }
    if (matched) continue;

    throw GqlSyntaxError{start, "a token", std::string(1, c)};
  }
  out.push_back({TokenKind::End, "", pos});
  return out;
}

}  // namespace nl2gql::gql
