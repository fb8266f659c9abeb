#include "nl2gql/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "nl2gql/errors.hpp"

namespace nl2gql {

std::string dtype_name(Dtype t) {
  switch (t) {
    case Dtype::String: return "string";
    case Dtype::Int: return "int";
    case Dtype::Float: return "float";
    case Dtype::Bool: return "bool";
    case Dtype::Timestamp: return "timestamp";
  }
  return "?";
}

Dtype dtype_from_name(const std::string& name) {
  if (name == "string") return Dtype::String;
  if (name == "int") return Dtype::Int;
  if (name == "float") return Dtype::Float;
  if (name == "bool") return Dtype::Bool;
  if (name == "timestamp") return Dtype::Timestamp;
  throw ParseError("unknown dtype: " + name);
}

bool value_matches_dtype(const Value& v, Dtype t) {
  switch (t) {
    case Dtype::String: return std::holds_alternative<std::string>(v);
    case Dtype::Int:
    case Dtype::Timestamp: return std::holds_alternative<std::int64_t>(v);
    case Dtype::Float:
      return std::holds_alternative<double>(v) || std::holds_alternative<std::int64_t>(v);
    case Dtype::Bool: return std::holds_alternative<bool>(v);
  }
  return false;
}

std::string value_to_text(const Value& v) {
  struct Visitor {
    std::string operator()(std::nullptr_t) const { return "__NULL__"; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const {
      if (d == static_cast<std::int64_t>(d) && std::abs(d) < 1e15) {
        return std::to_string(static_cast<std::int64_t>(d)) + ".0";
      }
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", d);
      // Trim to the shortest representation that round-trips.
      for (int prec = 1; prec < 17; ++prec) {
        char probe[64];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, d);
        double back = 0;
        std::sscanf(probe, "%lf", &back);
        if (back == d) return probe;
      }
      return buf;
    }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, v);
}

namespace {
int type_rank(const Value& v) {
  if (std::holds_alternative<std::nullptr_t>(v)) return 0;
  if (std::holds_alternative<bool>(v)) return 1;
  if (std::holds_alternative<std::int64_t>(v)) return 2;
  if (std::holds_alternative<double>(v)) return 2;
  return 3;
}

double as_number(const Value& v) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}
}  // namespace

bool value_less(const Value& a, const Value& b) {
  int ra = type_rank(a), rb = type_rank(b);
  if (ra != rb) return ra < rb;
  switch (ra) {
    case 0: return false;
    case 1: return !std::get<bool>(a) && std::get<bool>(b);
    case 2: return as_number(a) < as_number(b);
    default: return std::get<std::string>(a) < std::get<std::string>(b);
  }
}

bool value_eq(const Value& a, const Value& b) {
  int ra = type_rank(a), rb = type_rank(b);
  if (ra != rb) return false;
  switch (ra) {
    case 0: return true;
    case 1: return std::get<bool>(a) == std::get<bool>(b);
    case 2: return as_number(a) == as_number(b);
    default: return std::get<std::string>(a) == std::get<std::string>(b);
  }
}

bool value_comparable(const Value& a, const Value& b) {
  int ra = type_rank(a), rb = type_rank(b);
  return ra != 0 && ra == rb;
}

}  // namespace nl2gql
