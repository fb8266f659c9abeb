#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace nl2gql {

// Attribute / result cell value. Timestamps are epoch seconds in Int.
using Value = std::variant<std::nullptr_t, bool, std::int64_t, double, std::string>;

enum class Dtype { String, Int, Float, Bool, Timestamp };

std::string dtype_name(Dtype t);
Dtype dtype_from_name(const std::string& name);

bool value_matches_dtype(const Value& v, Dtype t);

// Canonical rendering used by result tables and prompts.
// Null renders as "__NULL__", bools as true/false, floats with shortest
// round-trip representation.
std::string value_to_text(const Value& v);

// Total order used for deterministic sorting: null < bool < numbers < string.
// Int and double compare numerically against each other.
bool value_less(const Value& a, const Value& b);
bool value_eq(const Value& a, const Value& b);

// True when ordered comparison between the two values is meaningful:
// both numeric, or same kind and neither null.
bool value_comparable(const Value& a, const Value& b);

}  // namespace nl2gql
