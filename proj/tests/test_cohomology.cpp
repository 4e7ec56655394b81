#include <doctest.h>

#include <stdexcept>
#include <random>

#include "clab/cohomology.hpp"

using namespace clab;

TEST_CASE("twisted duality is index reversal") {
  CHECK(twisted_dims(lookup("hopf-s3")) == std::vector<int>{1, 0, 1});
  CHECK(twisted_dims(lookup("carriere-sol")) == std::vector<int>{0, 1, 1});
  FlowProfile circle{"circle", 1, {1}, {1, 1}, true, true, ""};
  CHECK(twisted_dims(circle) == std::vector<int>{1});
}

TEST_CASE("small-eigenvalue counts over the catalog") {
  CHECK(m_p(lookup("hopf-s3")) == std::vector<int>{0, 1, 1, 0});
  CHECK(m_p(lookup("sphere-s5")) == std::vector<int>{0, 1, 1, 1, 1, 0});
  CHECK(m_p(lookup("sphere-s7")) == std::vector<int>{0, 1, 1, 1, 1, 1, 1, 0});
  CHECK(m_p(lookup("t2-dense")) == std::vector<int>{0, 0, 0});
  CHECK(m_p(lookup("t3-dense")) == std::vector<int>{0, 0, 0, 0});
  CHECK(m_p(lookup("carriere-sol")) == std::vector<int>{0, 0, 0, 0});
  CHECK(m_p(lookup("euler-surgery")) == std::vector<int>{0, 0, 0, 0, 0});
  auto m5 = m_p(lookup("sol5-blocks"));
  CHECK(m5[1] == 0);
  CHECK(m5[2] > 0);
  CHECK(m5[2] == m5[3]);  // forced by Betti symmetry
}

TEST_CASE("m_0 and m_n vanish for every valid profile") {
  for (const auto& f : catalog()) {
    auto m = m_p(f);
    CHECK(m.front() == 0);
    CHECK(m.back() == 0);
  }
}

TEST_CASE("profile invariants reject bad data") {
  FlowProfile bad = lookup("hopf-s3");
  bad.h[0] = 2;
  CHECK_THROWS(validate(bad));
  FlowProfile asym = lookup("hopf-s3");
  asym.b = {1, 1, 0, 1};
  CHECK_THROWS(validate(asym));
  FlowProfile noniso = lookup("carriere-sol");
  noniso.h = {1, 1, 2};  // h_{n-1} != 0 without kappa_zero
  CHECK_THROWS(validate(noniso));
  // inconsistent dims surface as a negative count
  FlowProfile neg{"neg", 3, {1, 0, 1}, {1, 2, 2, 1}, true, false, ""};
  CHECK_THROWS(m_p(neg));
}

TEST_CASE("gysin rank propagation") {
  auto hopf = gysin_consistency(lookup("hopf-s3"));
  CHECK(hopf.feasible);
  // the wedge-e map H^0_kappa -> H^2(M/F) has rank 1
  REQUIRE(hopf.euler_ranks.size() >= 2);
  CHECK(hopf.euler_ranks[1] == 1);

  auto t2 = gysin_consistency(lookup("t2-dense"));
  CHECK(t2.feasible);
  for (int r : t2.euler_ranks) CHECK(r == 0);

  // vanishing Euler class forbids positive counts
  FlowProfile forced = lookup("hopf-s3");
  forced.euler_zero = true;
  auto broken = gysin_consistency(forced);
  CHECK(!broken.feasible);
}

TEST_CASE("euler-zero forces all wedge-e ranks to zero") {
  for (const auto& f : catalog()) {
    if (!f.euler_zero) continue;
    auto g = gysin_consistency(f);
    CHECK(g.feasible);
    for (int r : g.euler_ranks) CHECK(r == 0);
    for (int m : m_p(f)) CHECK(m == 0);
  }
}

TEST_CASE("vanishing criteria over the catalog") {
  for (const auto& f : catalog()) {
    auto v = vanishing_criteria(f);
    CAPTURE(f.name);
    CHECK(v.euler_clause);
    CHECK(v.kappa_clause);
    CHECK(v.pass);
  }
  // kappa_zero <=> h_{n-1} != 0 across the catalog
  for (const auto& f : catalog()) CHECK(f.kappa_zero == (f.h[f.n - 1] != 0));
}

TEST_CASE("twisted route and direct route agree on random valid profiles") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> hd(0, 3);
  int built = 0;
  while (built < 50) {
    int n = 2 + (rng() % 4);
    FlowProfile f;
    f.name = "random";
    f.n = n;
    f.h.assign(n, 0);
    f.h[0] = 1;
    for (int p = 1; p < n; ++p) f.h[p] = hd(rng);
    f.kappa_zero = f.h[n - 1] != 0;
    if (f.kappa_zero) {
      for (int p = 0; p < n; ++p) f.h[p] = f.h[n - 1 - p] = std::max(f.h[p], f.h[n - 1 - p]);
      if (f.h[0] != 1) continue;
    }
    f.b.assign(n + 1, 0);
    f.b[0] = f.b[n] = 1;
    // choose Betti numbers that keep every m_p >= 0
    bool ok = true;
    for (int p = 1; p < n; ++p) {
      int cap = f.h_at(p) + f.h_at(n - p);
      int mirror_cap = f.h_at(n - p) + f.h_at(p);
      f.b[p] = std::min(cap, mirror_cap) > 0 ? 1 : 0;
    }
    for (int p = 0; p <= n / 2; ++p) f.b[n - p] = f.b[p];
    try {
      validate(f);
      auto m = m_p(f);  // internal assertion compares both routes
      for (int v : m) CHECK(v >= 0);
      ++built;
    } catch (const std::exception&) {
      ok = false;
    }
    (void)ok;
  }
}

TEST_CASE("profile files round trip and reject unknown keys") {
  const FlowProfile& f = lookup("sol5-blocks");
  std::string text = profile_to_text(f);
  FlowProfile back = parse_profile(text);
  CHECK(back.n == f.n);
  CHECK(back.h == f.h);
  CHECK(back.b == f.b);
  CHECK(back.kappa_zero == f.kappa_zero);

  CHECK_THROWS_WITH_AS(parse_profile("n = 3\nh = 1,0,1\nb = 1,0,0,1\nbogus = 1\n"),
                       doctest::Contains("line 4"), std::invalid_argument);
  CHECK_THROWS(parse_profile("n = 3\n"));
  CHECK_THROWS(lookup("missing-profile"));
}

TEST_CASE("json rendering carries the derived data") {
  std::string j = profile_to_json(lookup("hopf-s3"));
  CHECK(j.find("\"m_p\"") != std::string::npos);
  CHECK(j.find("\"gysin_feasible\": true") != std::string::npos);
}
