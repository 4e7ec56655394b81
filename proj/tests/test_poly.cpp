#include <doctest.h>

#include "clab/poly.hpp"

using namespace clab;
using namespace clab::poly;

TEST_CASE("parse and print") {
  ZPoly f = parse_poly("x^3 - x - 1");
  CHECK(f == ZPoly{-1, -1, 0, 1});
  CHECK(poly_to_string(f) == "x^3 - x - 1");
  CHECK(parse_poly("x^2-2") == ZPoly{-2, 0, 1});
  CHECK_THROWS(parse_poly(""));
  CHECK_THROWS(parse_poly("x^"));
}

TEST_CASE("sturm root counts") {
  CHECK(sturm(parse_poly("x^2-2")).count_real_roots() == 2);
  CHECK(sturm(parse_poly("x^3-2")).count_real_roots() == 1);
  CHECK(sturm(parse_poly("x^3-3x-1")).count_real_roots() == 3);
  CHECK(sturm(parse_poly("x^2+1")).count_real_roots() == 0);
  CHECK(sturm(parse_poly("x^2-2")).count_roots(1, 2) == 1);
}

TEST_CASE("resultant equals the product over roots") {
  // (sqrt2)(-sqrt2) = -2
  CHECK(resultant(parse_poly("x^2-2"), ZPoly{0, 1}) == -2);
  // the plastic number has norm 1
  CHECK(resultant(parse_poly("x^3-x-1"), ZPoly{0, 1}) == 1);
  // (1 - sqrt2)(1 + sqrt2) = -1
  CHECK(resultant(parse_poly("x^2-2"), ZPoly{1, 1}) == mpz_class(-1));
  // norm of 3 + 2 sqrt2
  CHECK(resultant(parse_poly("x^2-2"), ZPoly{3, 2}) == 1);
}

TEST_CASE("taylor shift and reversal") {
  ZPoly f = parse_poly("x^2-2");
  ZPoly g = taylor_shift(f, 1);  // (x+1)^2 - 2
  CHECK(g == ZPoly{-1, 2, 1});
  CHECK(reverse(g) == ZPoly{1, 2, -1});
}

TEST_CASE("squarefree detection") {
  CHECK(is_squarefree(parse_poly("x^2-2")));
  ZPoly sq = mul(parse_poly("x-1"), parse_poly("x-1"));
  CHECK(!is_squarefree(sq));
  CHECK(squarefree_part(sq) == ZPoly{-1, 1});
}

TEST_CASE("rational polynomial division") {
  QPoly a = to_q(parse_poly("x^3-x-1"));
  QPoly b = to_q(parse_poly("x-2"));
  QPoly q, r;
  qdivmod(a, b, q, r);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == 5);  // f(2)
}
