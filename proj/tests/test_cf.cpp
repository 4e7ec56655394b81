#include <doctest.h>

#include <random>

#include "clab/cf.hpp"

using namespace clab;

namespace {

// independent Euclid oracle for rational expansions
std::vector<mpz_class> euclid_cf(mpz_class num, mpz_class den) {
  std::vector<mpz_class> out;
  while (den != 0) {
    mpz_class a, r;
    mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    out.push_back(a);
    num = den;
    den = r;
  }
  return out;
}

std::string digits_of(const RealInput& x, int frac_digits) {
  Interval v = x.eval(static_cast<Prec>(frac_digits * 3.33) + 64);
  char fmt[16];
  std::snprintf(fmt, sizeof fmt, "%%.%dRf", frac_digits);
  char* s = nullptr;
  mpfr_asprintf(&s, fmt, v.mid().get());
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

}  // namespace

TEST_CASE("classic expansions") {
  auto phi = cf_expand(RealInput::phi(), 10);
  CHECK(phi.a == std::vector<mpz_class>(10, 1));
  auto s2 = cf_expand(RealInput::sqrt_of(2), 6);
  CHECK(s2.a == std::vector<mpz_class>{1, 2, 2, 2, 2, 2});
  auto r = cf_expand(RealInput::rational(mpq_class(355, 113)), 10);
  CHECK(r.a == std::vector<mpz_class>{3, 7, 16});
  CHECK(r.finite);
  CHECK(r.exact);
}

TEST_CASE("convergent table") {
  ContinuedFraction cf;
  for (int i = 0; i < 5; ++i) cf.push(1);
  auto conv = convergents(cf);
  REQUIRE(conv.size() == 5);
  CHECK(conv[0] == std::pair<mpz_class, mpz_class>{1, 1});
  CHECK(conv[1] == std::pair<mpz_class, mpz_class>{2, 1});
  CHECK(conv[2] == std::pair<mpz_class, mpz_class>{3, 2});
  CHECK(conv[3] == std::pair<mpz_class, mpz_class>{5, 3});
  CHECK(conv[4] == std::pair<mpz_class, mpz_class>{8, 5});

  ContinuedFraction single;
  single.push(7);
  auto one = convergents(single);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == std::pair<mpz_class, mpz_class>{7, 1});
}

TEST_CASE("random rationals match the Euclid oracle, convergents coprime") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<long> d(1, 100000);
  for (int t = 0; t < 200; ++t) {
    mpz_class num = d(rng), den = d(rng);
    auto cf = cf_expand(RealInput::rational(mpq_class(num, den)), 64);
    mpq_class x(num, den);
    x.canonicalize();
    auto want = euclid_cf(x.get_num(), x.get_den());
    CHECK(cf.a == want);
    CHECK(cf.finite);
    for (size_t i = 0; i < cf.size(); ++i) {
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), cf.p[i].get_mpz_t(), cf.q[i].get_mpz_t());
      CHECK(g == 1);
      if (i >= 2) CHECK(cf.p[i] == cf.a[i] * cf.p[i - 1] + cf.p[i - 2]);
    }
    // exact reconstruction from the last convergent
    mpq_class back(cf.p.back(), cf.q.back());
    back.canonicalize();
    CHECK(back == x);
  }
}

TEST_CASE("exact inputs satisfy |alpha - p/q| < 1/(q q')") {
  for (const auto& x : {RealInput::phi(), RealInput::sqrt_of(2), RealInput::sqrt_of(3),
                        RealInput::algebraic(poly::parse_poly("x^3-2"), 1, 2)}) {
    auto cf = cf_expand(x, 20);
    Interval v = x.eval(256);
    for (size_t n = 0; n + 1 < cf.size(); ++n) {
      Interval approx = Interval::of_mpq(mpq_class(cf.p[n], cf.q[n]), 256);
      Interval err = (v - approx).abs();
      Interval bound = Interval::of_mpq(mpq_class(1, cf.q[n] * cf.q[n + 1]), 256);
      CHECK(err.hi() < bound.lo());
    }
  }
}

TEST_CASE("algebraic expansion of cbrt(2)") {
  auto cf = cf_expand(RealInput::algebraic(poly::parse_poly("x^3-2"), 1, 2), 8);
  CHECK(cf.a == std::vector<mpz_class>{1, 3, 1, 5, 1, 1, 4, 1});
}

TEST_CASE("algebraic input whose root is an integer terminates") {
  // x^2 - 4 has the integer root 2 inside (1, 3)
  auto cf = cf_expand(RealInput::algebraic(poly::parse_poly("x^2-4"), 1, 3), 10);
  CHECK(cf.a == std::vector<mpz_class>{2});
  CHECK(cf.finite);
}

TEST_CASE("decimal expansions agree with exact ones for all emitted terms") {
  struct Case {
    RealInput exact;
    const char* name;
  };
  const Case cases[] = {{RealInput::phi(), "phi"},
                        {RealInput::sqrt_of(2), "sqrt2"},
                        {RealInput::sqrt_of(3), "sqrt3"}};
  for (const auto& c : cases) {
    CAPTURE(c.name);
    std::string text = digits_of(c.exact, 200);
    // 1200 quotients exceed the information in 200 digits even for phi
    auto dec = cf_expand(RealInput::decimal(text), 1200);
    auto ref = cf_expand(c.exact, 1200);
    REQUIRE(dec.size() > 50);
    for (size_t i = 0; i < dec.size(); ++i) CHECK(dec.a[i] == ref.a[i]);
    CHECK(dec.truncated);
  }
}

TEST_CASE("decimal truncation flags") {
  auto cf = cf_expand(RealInput::decimal("3.14"), 30);
  CHECK(cf.truncated);
  CHECK(cf.size() < 30);
  for (const auto& a : cf.a) CHECK(a >= 1);
}

TEST_CASE("mu estimates") {
  auto phi = mu_estimate(cf_expand(RealInput::phi(), 60), 20);
  CHECK(phi.mu_hat == doctest::Approx(2.0).epsilon(0.005));
  CHECK(phi.alt_form == doctest::Approx(2.0));
  CHECK(phi.forms_agree);

  auto s2 = mu_estimate(cf_expand(RealInput::sqrt_of(2), 60), 20);
  CHECK(s2.mu_hat == doctest::Approx(2.0).epsilon(0.005));

  CHECK_THROWS(mu_estimate(cf_expand(RealInput::phi(), 5), 20));
}

TEST_CASE("bounded quotients converge to two as depth grows") {
  double last = 10;
  for (int terms : {30, 60, 90}) {
    auto est = mu_estimate(cf_expand(RealInput::sqrt_of(3), terms), terms / 3);
    CHECK(est.ratio_max >= 2.0 - 1e-9);
    CHECK(est.ratio_max <= last + 1e-12);  // window max is non-increasing in depth
    last = est.ratio_max;
  }
}

TEST_CASE("prescribed irrationality exponents") {
  auto flat = construct_alpha_with_mu(2.0, 12);
  for (size_t i = 2; i < flat.size(); ++i) CHECK(flat.a[i] == 1);

  auto four = mu_estimate(construct_alpha_with_mu(4.0, 12), 4);
  CHECK(four.mu_hat == doctest::Approx(4.0).epsilon(0.05));
  auto three = mu_estimate(construct_alpha_with_mu(3.0, 14), 4);
  CHECK(three.mu_hat == doctest::Approx(3.0).epsilon(0.05));

  auto liou = mu_estimate(construct_liouville(8), 3);
  CHECK(liou.mu_hat > 6.0);  // exponent grows with depth

  CHECK_THROWS(construct_alpha_with_mu(1.5, 10));
  CHECK_THROWS(construct_alpha_with_mu(3.0, 2));
}

TEST_CASE("badapprox scan: sqrt2 floor and rational hit") {
  auto cert = badapprox_scan({RealSource(RealInput::sqrt_of(2))}, 100000, 2);
  CHECK(cert.min_quality >= 0.2);  // liminf q |q sqrt2 - p| = 1/(2 sqrt2)
  CHECK(!cert.exact_hit);

  auto rat = badapprox_scan({RealSource(RealInput::rational(mpq_class(1, 2)))}, 10);
  CHECK(rat.exact_hit);
  CHECK(rat.min_quality == 0.0);
  CHECK(rat.argmin_q == 2);
}

TEST_CASE("badapprox monotone in the bound") {
  std::vector<RealSource> a = {RealSource(RealInput::sqrt_of(2))};
  auto c1 = badapprox_scan(a, 100);
  auto c2 = badapprox_scan(a, 10000);
  CHECK(c2.min_quality <= c1.min_quality + 1e-15);
}

TEST_CASE("badapprox rows stream in order") {
  std::vector<long> qs;
  badapprox_scan({RealSource(RealInput::sqrt_of(2))}, 50, 3,
                 [&](long q, const Interval&, const Interval&) { qs.push_back(q); });
  REQUIRE(qs.size() == 50);
  for (size_t i = 0; i < qs.size(); ++i) CHECK(qs[i] == static_cast<long>(i + 1));
}

TEST_CASE("workers do not change the certificate") {
  std::vector<RealSource> a = {RealSource(RealInput::sqrt_of(2)),
                               RealSource(RealInput::sqrt_of(3))};
  auto c1 = badapprox_scan(a, 5000, 1);
  auto c4 = badapprox_scan(a, 5000, 4);
  CHECK(c1.argmin_q == c4.argmin_q);
  CHECK(c1.min_quality == doctest::Approx(c4.min_quality).epsilon(1e-12));
}
