#include <doctest.h>

#include <cmath>
#include <random>

#include "clab/spectra.hpp"

using namespace clab;

namespace {

constexpr double kPi = 3.14159265358979323846;

QMat diag_q(std::vector<mpq_class> d) {
  QMat g(d.size(), std::vector<mpq_class>(d.size(), 0));
  for (size_t i = 0; i < d.size(); ++i) g[i][i] = d[i];
  return g;
}

QMat random_spd(std::mt19937& rng, int k) {
  std::uniform_int_distribution<int> d(-16, 16);
  QMat a(k, std::vector<mpq_class>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a[i][j] = mpq_class(d(rng), 16);
  QMat g(k, std::vector<mpq_class>(k, 0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      for (int l = 0; l < k; ++l) g[i][j] += a[l][i] * a[l][j];
      if (i == j) g[i][j] += mpq_class(1, 2);
    }
  return g;
}

}  // namespace

TEST_CASE("circle spectrum") {
  TorusSpectrum s = torus_hodge_spectrum(RationalGram(diag_q({1})), 0, 5);
  REQUIRE(s.levels.size() >= 3);
  CHECK(s.levels[0].eigenvalue == 0);
  CHECK(s.levels[0].multiplicity == 1);
  CHECK(s.levels[1].eigenvalue == doctest::Approx(4 * kPi * kPi));
  CHECK(s.levels[1].multiplicity == 2);  // +-1
  CHECK(s.levels[2].eigenvalue == doctest::Approx(16 * kPi * kPi));
}

TEST_CASE("torus harmonic forms: zero multiplicity is binom(k, p)") {
  TorusSpectrum s = torus_hodge_spectrum(RationalGram(diag_q({1, 1})), 1, 4);
  CHECK(s.levels[0].normsq == 0);
  CHECK(s.levels[0].multiplicity == 2);

  std::mt19937 rng(11);
  for (int k = 2; k <= 4; ++k) {
    QMat g = random_spd(rng, k);
    for (int p = 0; p <= k; ++p) {
      TorusSpectrum sp = torus_hodge_spectrum(RationalGram(g), p, 3);
      CHECK(sp.levels[0].multiplicity == binom(k, p));
    }
  }
}

TEST_CASE("collapsed rectangle: lowest positive eigenvalue stays at 4 pi^2") {
  for (int j : {2, 6, 10}) {
    mpq_class e2(1, 1 << j);
    e2 *= e2;
    TorusSpectrum s = torus_hodge_spectrum(RationalGram(diag_q({e2, 1})), 0, 4);
    REQUIRE(s.levels.size() >= 2);
    // dual gram diag(eps^-2, 1): shortest dual vector (0, 1)
    CHECK(s.levels[1].normsq == 1);
    CHECK(s.levels[1].eigenvalue == doctest::Approx(4 * kPi * kPi));
    CHECK(s.levels[1].multiplicity == 2);
  }
}

TEST_CASE("count_small") {
  TorusSpectrum s = torus_hodge_spectrum(RationalGram(diag_q({1, 1})), 0, 30);
  double pi2 = 4 * kPi * kPi;
  CHECK(count_small(s, pi2 * (1 + 1e-9)) == 4);  // (+-1, 0), (0, +-1)
  CHECK(count_small(s, pi2 * 0.5) == 0);
  CHECK_THROWS(count_small(s, 1e9));  // spectrum not complete that far
}

TEST_CASE("dense flows on T^2 collect no small positive eigenvalues") {
  // m_1 = 0 for the dense linear flow: as eps shrinks no positive eigenvalue
  // falls below a fixed threshold
  for (int j = 1; j <= 20; ++j) {
    mpq_class eps(1, 1 << j);
    // collapsed Gram for alpha = sqrt2 rationalized to 1e-30
    Interval s2 = RealInput::sqrt_of(2).eval(128);
    mpq_class a = s2.mid().to_mpq_exact();
    mpq_class d2 = 1 + a * a;
    mpq_class coef = (eps * eps - 1) / d2;
    QMat g(2, std::vector<mpq_class>(2));
    g[0][0] = 1 + coef;
    g[0][1] = coef * a;
    g[1][0] = coef * a;
    g[1][1] = 1 + coef * a * a;
    TorusSpectrum s = torus_hodge_spectrum(RationalGram(g), 1, 40);
    CHECK(count_small(s, 1.0) == 0);
  }
}

TEST_CASE("spectrum scale covariance") {
  std::mt19937 rng(23);
  QMat g = random_spd(rng, 3);
  QMat g2 = g;
  for (auto& row : g2)
    for (auto& e : row) e *= 4;
  TorusSpectrum a = torus_hodge_spectrum(RationalGram(g), 0, 12);
  TorusSpectrum b = torus_hodge_spectrum(RationalGram(g2), 0, 12);
  size_t n = std::min(a.levels.size(), b.levels.size());
  for (size_t i = 0; i < n; ++i) {
    CHECK(b.levels[i].normsq * 4 == a.levels[i].normsq);
    CHECK(b.levels[i].multiplicity == a.levels[i].multiplicity);
  }
}

TEST_CASE("dodziuk sandwich") {
  RationalGram g(diag_q({1, 1}));
  auto same = dodziuk_check(g, g, 0, 20);
  CHECK(same.holds);
  CHECK(same.tau_lo == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(same.tau_hi == doctest::Approx(1.0).epsilon(1e-6));

  auto rect = dodziuk_check(g, RationalGram(diag_q({mpq_class(1, 4), 1})), 0, 50);
  CHECK(rect.holds);

  std::mt19937 rng(7);
  for (int t = 0; t < 10; ++t) {
    int k = 2 + (t % 2);
    auto rep = dodziuk_check(RationalGram(random_spd(rng, k)),
                             RationalGram(random_spd(rng, k)), t % (k + 1), 30);
    CHECK(rep.holds);
  }
}

TEST_CASE("hopf closed forms match the quadrature") {
  for (double alpha : {1.0, std::sqrt(2.0), 0.7}) {
    HopfRayleigh hr = hopf_rayleigh({alpha, 1.0, 64});
    CHECK(hr.omega_l2 == doctest::Approx(hopf_omega_l2_closed(alpha)).epsilon(1e-10));
    CHECK(hr.domega_l2 == doctest::Approx(hopf_domega_l2_closed(alpha)).epsilon(1e-10));
    CHECK(hr.richardson < 1e-8);
  }
  // round Hopf fibration: R_1 = 4 exactly
  HopfRayleigh hopf = hopf_rayleigh({1.0, 1.0, 64});
  CHECK(hopf.R1 == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("full eps-metric quadrature equals the factorized form") {
  for (double eps : {1.0, 0.5, 1.0 / 256}) {
    HopfRayleigh hr = hopf_rayleigh({std::sqrt(2.0), eps, 64});
    CHECK(hr.rel_gap < 1e-6);
  }
}

TEST_CASE("hopf structural identities") {
  CHECK(hopf_ixdomega_residual(std::sqrt(2.0), 10000) < 1e-9);
  CHECK(hopf_ixdomega_residual(0.3, 10000) < 1e-9);
  CHECK(hopf_discrete_d_residual(std::sqrt(2.0), 200) < 1e-4);
  CHECK_THROWS(hopf_rayleigh({1.0, 1.0, 16}));   // N too small
  CHECK_THROWS(hopf_rayleigh({1.0, 2.0, 64}));   // eps out of range
  CHECK_THROWS(hopf_rayleigh({-1.0, 0.5, 64}));  // alpha must be positive
}

TEST_CASE("spectrum guards") {
  CHECK_THROWS(torus_hodge_spectrum(RationalGram(diag_q({1, 1})), 5, 3));
  CHECK_THROWS(torus_hodge_spectrum(RationalGram(diag_q({1, 1})), 0, 0));
  QMat bad = diag_q({1, 1});
  bad[0][1] = 5;  // not symmetric
  CHECK_THROWS(RationalGram(bad));
  QMat indef = diag_q({1, 1});
  indef[0][0] = -1;
  CHECK_THROWS(RationalGram(indef));
}
