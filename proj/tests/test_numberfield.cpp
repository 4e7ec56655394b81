#include <doctest.h>

#include <cmath>
#include <algorithm>

#include "clab/cf.hpp"
#include "clab/numberfield.hpp"

using namespace clab;

namespace {

ZPoly P(const char* s) { return poly::parse_poly(s); }

bool contains_element(const std::vector<OrderElement>& v, std::vector<mpz_class> c) {
  return std::any_of(v.begin(), v.end(), [&](const OrderElement& e) { return e.c == c; });
}

}  // namespace

TEST_CASE("signatures by sturm count") {
  CHECK(signature(P("x^2-2")) == std::pair<int, int>{2, 0});
  CHECK(signature(P("x^3-2")) == std::pair<int, int>{1, 1});
  CHECK(signature(P("x^3-x-1")) == std::pair<int, int>{1, 1});
  CHECK(signature(P("x^3-3x-1")) == std::pair<int, int>{3, 0});
  CHECK_THROWS(signature(poly::mul(P("x-1"), P("x-1"))));  // not squarefree
}

TEST_CASE("unit rank and the claimed appendix floor") {
  auto r2 = unit_rank(make_order(P("x^2-2")));
  CHECK(r2.rank == 1);
  CHECK(r2.meets_claimed_floor);  // floor((2+1)/2) = 1
  auto r3 = unit_rank(make_order(P("x^3-2")));
  CHECK(r3.rank == 1);
  // the claimed lower bound floor((k+1)/2) = 2 fails here: rank r+s-1 = 1
  CHECK(r3.claimed_floor == 2);
  CHECK(!r3.meets_claimed_floor);
  auto rt = unit_rank(make_order(P("x^3-3x-1")));
  CHECK(rt.rank == 2);  // totally real cubic: k - 1
  CHECK(rt.meets_claimed_floor);
}

TEST_CASE("pell fundamental units") {
  auto p2 = pell_unit(2);
  CHECK(p2.fundamental.c == std::vector<mpz_class>{1, 1});
  CHECK(p2.fundamental.norm == -1);
  CHECK(p2.norm_plus_one.c == std::vector<mpz_class>{3, 2});
  CHECK(p2.norm_plus_one.norm == 1);

  auto p3 = pell_unit(3);
  CHECK(p3.fundamental.c == std::vector<mpz_class>{2, 1});
  CHECK(p3.fundamental.norm == 1);

  auto p5 = pell_unit(5);  // order Z[sqrt5], not the maximal order
  CHECK(p5.norm_plus_one.c == std::vector<mpz_class>{9, 4});

  CHECK_THROWS(pell_unit(4));
  CHECK_THROWS(pell_unit(1));
}

TEST_CASE("bounded unit search") {
  auto ord = make_order(P("x^2-2"));
  auto res = unit_search(ord, 5);
  CHECK(contains_element(res.units, {1, 1}));
  CHECK(contains_element(res.units, {-1, -1}));
  CHECK(contains_element(res.units, {1, -1}));
  CHECK(contains_element(res.units, {3, 2}));
  CHECK(contains_element(res.positive_units, {3, 2}));
  CHECK(contains_element(res.positive_units, {3, -2}));  // embedding 3 - 2 sqrt2 > 0
  // the exhaustive scan agrees with the quotient-period unit
  auto pell = pell_unit(2);
  CHECK(contains_element(res.units, pell.fundamental.c));

  auto plastic = unit_search(make_order(P("x^3-x-1")), 10);
  CHECK(contains_element(plastic.positive_units, {0, 1, 0}));  // theta itself, norm 1

  auto tiny = unit_search(ord, 1);
  CHECK(contains_element(tiny.units, {1, 0}));
  CHECK(contains_element(tiny.units, {-1, 0}));
}

TEST_CASE("multiplication matrices in the power basis") {
  auto ord = make_order(P("x^2-2"));
  auto pell = pell_unit(2);
  IMat M = mult_matrix(ord, pell.norm_plus_one);
  CHECK(imat_equal(M, {{3, 4}, {2, 3}}));
  CHECK(imat_det(M) == 1);

  OrderElement one = make_element(ord, {1, 0});
  CHECK(imat_equal(mult_matrix(ord, one), imat_identity(2)));

  auto plastic = make_order(P("x^3-x-1"));
  OrderElement theta = make_element(plastic, {0, 1, 0});
  IMat Mt = mult_matrix(plastic, theta);
  // companion-style: theta * (1, t, t^2) = (t, t^2, 1 + t)
  CHECK(imat_equal(Mt, {{0, 0, 1}, {1, 0, 1}, {0, 1, 0}}));
  CHECK(imat_det(Mt) == 1);

  OrderElement notunit = make_element(ord, {2, 0});
  CHECK_THROWS(mult_matrix(ord, notunit));
}

TEST_CASE("morphism property and commuting family") {
  for (const char* fs : {"x^2-2", "x^3-x-1"}) {
    auto ord = make_order(P(fs));
    auto units = unit_search(ord, 10).positive_units;
    REQUIRE(!units.empty());
    std::vector<IMat> mats;
    for (const auto& u : units) mats.push_back(mult_matrix(ord, u));
    for (size_t i = 0; i < units.size(); ++i) {
      for (size_t j = 0; j < units.size(); ++j) {
        OrderElement prod = element_mul(ord, units[i], units[j]);
        CHECK(imat_equal(mult_matrix(ord, prod), imat_mul(mats[i], mats[j])));
        CHECK(imat_equal(imat_mul(mats[i], mats[j]), imat_mul(mats[j], mats[i])));
      }
    }
  }
}

TEST_CASE("gv membership certificates") {
  // transpose of the multiplication matrix fixes the power-basis direction
  std::vector<RealSource> v2 = {RealSource(RealInput::rational(1)),
                                RealSource(RealInput::sqrt_of(2))};
  auto cert = gv_check({{3, 2}, {4, 3}}, v2);
  CHECK(cert.member);
  CHECK(cert.lambda.mid().to_double() == doctest::Approx(3 + 2 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(cert.ev_is_number_field);

  // as printed with v = (1, sqrt2) the matrix moves the direction
  auto swapped = gv_check({{3, 4}, {2, 3}}, v2);
  CHECK(!swapped.member);
  CHECK(swapped.failing_clause == "v is not an eigenvector of A");
  // ... but it fixes the reversed basis vector (sqrt2, 1)
  std::vector<RealSource> v2r = {RealSource(RealInput::sqrt_of(2)),
                                 RealSource(RealInput::rational(1))};
  CHECK(gv_check({{3, 4}, {2, 3}}, v2r).member);

  auto ident = gv_check(imat_identity(2), v2);
  CHECK(ident.member);
  CHECK(ident.lambda.mid().to_double() == doctest::Approx(1.0));

  // golden suspension matrix with its eigendirection
  ZPoly m = P("x^2+x-1");  // (sqrt5 - 1)/2
  std::vector<RealSource> vg = {RealSource(RealInput::rational(1)),
                                RealSource(RealInput::algebraic(m, 0, 1))};
  auto golden = gv_check({{2, 1}, {1, 1}}, vg);
  CHECK(golden.member);
  CHECK(golden.lambda.mid().to_double() == doctest::Approx((3 + std::sqrt(5.0)) / 2));

  std::vector<RealSource> axis = {RealSource(RealInput::rational(1)),
                                  RealSource(RealInput::rational(0))};
  auto off = gv_check({{2, 1}, {1, 1}}, axis);
  CHECK(!off.member);

  auto detfail = gv_check({{2, 0}, {0, 1}}, v2);
  CHECK(!detfail.member);
  CHECK(detfail.failing_clause == "det != 1");

  auto jordan = gv_check({{1, 1}, {0, 1}}, v2);
  CHECK(!jordan.member);
  CHECK(jordan.failing_clause == "minimal polynomial is not squarefree");
}

TEST_CASE("appendix matrices") {
  auto rep = appendix_matrices_check();
  CHECK(rep.commute);
  CHECK(!rep.p_inv_a_p_integral);
  CHECK(rep.p_inv_b_p_integral);
  CHECK(rep.b_is_polynomial_in_a);  // B = -3 - 6A - 2A^2
  REQUIRE(rep.b_poly_coeffs.size() == 3);
  CHECK(rep.b_poly_coeffs[0] == -3);
  CHECK(rep.b_poly_coeffs[1] == -6);
  CHECK(rep.b_poly_coeffs[2] == -2);
  CHECK(rep.common_eigenvector);
  CHECK(rep.eigen_residual < 1e-9);
  CHECK(rep.all_clauses_expected);
}

TEST_CASE("basis directions") {
  auto d2 = basis_direction(make_order(P("x^2-2")));
  REQUIRE(d2.size() == 1);
  CHECK(d2[0].eval(96).mid().to_double() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  auto d3 = basis_direction(make_order(P("x^3-2")));
  REQUIRE(d3.size() == 2);
  CHECK(d3[0].eval(96).mid().to_double() == doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));
  CHECK(d3[1].eval(96).mid().to_double() == doctest::Approx(std::cbrt(4.0)).epsilon(1e-12));

  auto dp = basis_direction(make_order(P("x^3-x-1")));
  REQUIRE(dp.size() == 2);
  CHECK(dp[0].eval(96).mid().to_double() == doctest::Approx(1.3247179572).epsilon(1e-8));

  // Schmidt: integer bases of real fields are badly approximable
  for (const auto* fs : {"x^2-2", "x^3-2", "x^3-x-1"}) {
    auto dirs_in = basis_direction(make_order(P(fs)));
    std::vector<RealSource> dirs;
    for (const auto& d : dirs_in) dirs.push_back(RealSource(d));
    auto cert = badapprox_scan(dirs, 10000, 2);
    CHECK(cert.min_quality > 0);
    CHECK(!cert.exact_hit);
  }
}

TEST_CASE("mult matrices pass gv_check against the power-basis direction") {
  auto ord = make_order(P("x^3-x-1"));
  auto dirs_in = basis_direction(ord);
  std::vector<RealSource> v = {RealSource(RealInput::rational(1))};
  for (const auto& d : dirs_in) v.push_back(RealSource(d));
  for (const auto& u : unit_search(ord, 6).positive_units) {
    auto cert = gv_check(imat_transpose(mult_matrix(ord, u)), v);
    CHECK(cert.member);
    CHECK(cert.lambda.sign_certain() > 0);
  }
}

TEST_CASE("suspension models") {
  auto golden = suspension_model({{2, 1}, {1, 1}}, 1);
  CHECK(golden.k == 2);
  CHECK(!golden.isometric);
  REQUIRE(golden.direction.size() == 1);
  // (sqrt5 - 1)/2
  CHECK(golden.direction[0].eval(96).mid().to_double() ==
        doctest::Approx((std::sqrt(5.0) - 1) / 2).epsilon(1e-12));
  CHECK(golden.eigenvalue.mid().to_double() == doctest::Approx((3 + std::sqrt(5.0)) / 2));

  // the coupled two-block matrix: eigenvector lives in the first block
  IMat blocks = {{2, 1, 0, 1}, {1, 1, 0, 0}, {0, 0, 2, 1}, {0, 0, 1, 1}};
  auto big = suspension_model(blocks, 1);
  REQUIRE(big.direction.size() == 3);
  CHECK(big.direction[0].eval(96).mid().to_double() ==
        doctest::Approx((std::sqrt(5.0) - 1) / 2).epsilon(1e-12));
  CHECK(big.direction[1].eval(96).mid().to_double() == doctest::Approx(0.0));
  CHECK(big.direction[2].eval(96).mid().to_double() == doctest::Approx(0.0));

  CHECK_THROWS(suspension_model(imat_identity(2), 0));  // rational eigenvalue
  CHECK_THROWS(suspension_model({{2, 1}, {1, 1}}, 5));  // index out of range
}

TEST_CASE("rank bound across the shipped fields") {
  for (const char* fs : {"x^2-2", "x^2-3", "x^2-5", "x^3-x-1", "x^3-2", "x^3-3x-1"}) {
    auto ord = make_order(P(fs));
    auto rep = unit_rank(ord);
    CHECK(ord.r >= 1);
    CHECK(rep.rank == ord.r + ord.s - 1);
    CHECK(rep.rank <= ord.k - 1);
  }
}

TEST_CASE("make_order validates") {
  CHECK_THROWS(make_order(P("x^2-4")));     // reducible
  CHECK_THROWS(make_order(P("x^2+1")));     // no real root
  CHECK_THROWS(make_order(P("2x^2-2")));    // not monic
  CHECK_THROWS(make_order(P("x-3")));       // degree too small
}
