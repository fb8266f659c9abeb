#include <doctest.h>

#include "nl2gql/errors.hpp"
#include "nl2gql/value.hpp"

using namespace nl2gql;

TEST_CASE("dtype names round-trip") {
  for (Dtype t : {Dtype::String, Dtype::Int, Dtype::Float, Dtype::Bool,
                  Dtype::Timestamp}) {
    CHECK(dtype_from_name(dtype_name(t)) == t);
  }
  CHECK_THROWS_AS(dtype_from_name("decimal"), ParseError);
}

TEST_CASE("value_matches_dtype") {
  CHECK(value_matches_dtype(Value{std::string("x")}, Dtype::String));
  CHECK(value_matches_dtype(Value{std::int64_t{3}}, Dtype::Int));
  CHECK(value_matches_dtype(Value{std::int64_t{3}}, Dtype::Timestamp));
  // Ints are acceptable where floats are declared, not vice versa.
  CHECK(value_matches_dtype(Value{std::int64_t{3}}, Dtype::Float));
  CHECK_FALSE(value_matches_dtype(Value{3.5}, Dtype::Int));
  CHECK(value_matches_dtype(Value{true}, Dtype::Bool));
  CHECK_FALSE(value_matches_dtype(Value{nullptr}, Dtype::String));
}

TEST_CASE("value_to_text canonical forms") {
  CHECK(value_to_text(Value{nullptr}) == "__NULL__");
  CHECK(value_to_text(Value{true}) == "true");
  CHECK(value_to_text(Value{false}) == "false");
  CHECK(value_to_text(Value{std::int64_t{42}}) == "42");
  CHECK(value_to_text(Value{std::int64_t{-7}}) == "-7");
  // Whole-valued doubles keep a trailing .0 so their type stays visible.
  CHECK(value_to_text(Value{2.0}) == "2.0");
  CHECK(value_to_text(Value{3.5}) == "3.5");
  CHECK(value_to_text(Value{0.1}) == "0.1");
  CHECK(value_to_text(Value{std::string("Tim Duncan")}) == "Tim Duncan");
}

TEST_CASE("value_less total order: null < bool < numeric < string") {
  Value null_v{nullptr}, bool_v{false}, int_v{std::int64_t{1}}, dbl_v{0.5},
      str_v{std::string("a")};
  CHECK(value_less(null_v, bool_v));
  CHECK(value_less(bool_v, int_v));
  CHECK(value_less(dbl_v, str_v));
  CHECK_FALSE(value_less(null_v, null_v));
  // Int and double compare numerically against each other.
  CHECK(value_less(dbl_v, int_v));
  CHECK(value_less(Value{std::int64_t{1}}, Value{1.5}));
  CHECK_FALSE(value_less(Value{1.0}, Value{std::int64_t{1}}));
}

TEST_CASE("value_eq across numeric kinds") {
  CHECK(value_eq(Value{std::int64_t{2}}, Value{2.0}));
  CHECK_FALSE(value_eq(Value{std::int64_t{2}}, Value{std::string("2")}));
  CHECK(value_eq(Value{nullptr}, Value{nullptr}));
  CHECK_FALSE(value_eq(Value{nullptr}, Value{false}));
}

TEST_CASE("value_comparable") {
  CHECK(value_comparable(Value{std::int64_t{1}}, Value{2.0}));
  CHECK(value_comparable(Value{std::string("a")}, Value{std::string("b")}));
  CHECK(value_comparable(Value{true}, Value{false}));
  CHECK_FALSE(value_comparable(Value{nullptr}, Value{nullptr}));
  CHECK_FALSE(value_comparable(Value{std::int64_t{1}}, Value{std::string("1")}));
  CHECK_FALSE(value_comparable(Value{true}, Value{std::int64_t{1}}));
}
