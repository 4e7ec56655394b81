#include <doctest.h>

#include <cmath>
#include <random>

#include "clab/collapse.hpp"
#include "clab/config.hpp"
#include "clab/lattice.hpp"

using namespace clab;

namespace {

RealSource phi_source() { return RealSource(RealInput::phi()); }

QMat identity_q(int k) {
  QMat g(k, std::vector<mpq_class>(k, 0));
  for (int i = 0; i < k; ++i) g[i][i] = 1;
  return g;
}

// double-precision brute force over a box, independent of the enumeration
std::pair<std::vector<long>, double> brute_min_2d(double alpha, double eps, long box) {
  double d2 = 1 + alpha * alpha;
  double best = 1e300;
  std::vector<long> argmin;
  for (long a = -box; a <= box; ++a) {
    for (long b = -box; b <= box; ++b) {
      if (a == 0 && b == 0) continue;
      double dot = a + b * alpha;
      double v = a * a + b * b - (1 - eps * eps) * dot * dot / d2;
      if (v < best) {
        best = v;
        argmin = {a, b};
      }
    }
  }
  return {argmin, best};
}

}  // namespace

TEST_CASE("identity gram: shortest vector and covering radius") {
  RationalGram g(identity_q(2));
  auto sv = shortest_vector(g);
  CHECK(*sv.exact_len2 == 1);
  CHECK(sv.w == IVec{1, 0});  // colex tie-break among the four unit vectors
  auto cr = covering_radius(g);
  CHECK(cr.exact);
  CHECK(cr.lower.mid().to_double() == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-12));
}

TEST_CASE("axis-aligned collapse") {
  CollapsedMetric m = gram(2, {RealSource(RealInput::rational(0))}, mpq_class(1, 4));
  auto sv = shortest_vector(m.form());
  CHECK(*sv.exact_len2 == mpq_class(1, 16));
  CHECK(sv.w == IVec{1, 0});
  // rectangle circumradius sqrt(eps^2 + 1)/2
  auto cr = covering_radius(m.form());
  CHECK(cr.lower.mid().to_double() ==
        doctest::Approx(std::sqrt(1.0 + 1.0 / 16) / 2).epsilon(1e-12));
}

TEST_CASE("gram constructor validates") {
  CHECK_THROWS(gram(2, {phi_source()}, mpq_class(0)));
  CHECK_THROWS(gram(2, {phi_source()}, mpq_class(2)));
  CHECK_THROWS(gram(3, {phi_source()}, mpq_class(1, 2)));  // needs k-1 components
  CHECK_THROWS(gram(1, {}, mpq_class(1, 2)));
}

TEST_CASE("identity at eps = 1, det = eps^2") {
  CollapsedMetric m = gram(3, {RealSource(RealInput::sqrt_of(2)), RealSource(RealInput::sqrt_of(3))},
                           mpq_class(1));
  auto g = m.gram_matrix();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double want = i == j ? 1.0 : 0.0;
      CHECK(g[i][j].mid().to_double() == doctest::Approx(want).epsilon(1e-15));
    }
  CollapsedMetric c = gram(3, m.alpha, mpq_class(1, 1024));  // 2^-10
  Interval det = c.det_from_matrix();
  double want = std::ldexp(1.0, -20);
  CHECK(det.mid().to_double() == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("scaling identity against the direct rank-one formula") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> wd(-20, 20);
  std::uniform_real_distribution<double> ed(0.01, 1.0);
  CollapsedGram base({phi_source(), RealSource(RealInput::sqrt_of(2))}, mpq_class(0), 192);
  Prec prec = 192;
  Interval one = Interval::of_mpq(1, prec);
  Interval phi_v = RealInput::phi().eval(prec);
  Interval s2_v = RealInput::sqrt_of(2).eval(prec);
  Interval dn2 = one + phi_v.square() + s2_v.square();
  for (int t = 0; t < 1000; ++t) {
    IVec w = {wd(rng), wd(rng), wd(rng)};
    if (w[0] == 0 && w[1] == 0 && w[2] == 0) w[0] = 1;
    mpq_class eps_q(static_cast<long>(ed(rng) * (1 << 20)), 1 << 20);
    eps_q.canonicalize();
    if (eps_q == 0) eps_q = mpq_class(1, 1 << 20);
    CollapsedGram form({phi_source(), RealSource(RealInput::sqrt_of(2))}, eps_q * eps_q - 1, prec);
    Interval got = form.eval(w);
    // |w|^2 - (1 - eps^2) <w, d>^2 / |d|^2
    mpz_class n2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
    Interval dot = Interval::of_mpz(w[0], prec) + phi_v * Interval::of_mpz(w[1], prec) +
                   s2_v * Interval::of_mpz(w[2], prec);
    Interval want = Interval::of_mpz(n2, prec) -
                    (one - Interval::of_mpq(eps_q * eps_q, prec)) * dot.square() / dn2;
    double rel = std::fabs(got.mid().to_double() / want.mid().to_double() - 1.0);
    CHECK(rel < 1e-12);
  }
}

TEST_CASE("fibonacci collapse picks the convergent pair") {
  // alpha = phi, eps = F_6^{-2} = 1/64: the short vector lives at the
  // convergent scale; brute force confirms
  mpq_class eps(1, 64);
  CollapsedMetric m = gram(2, {phi_source()}, eps);
  auto sv = shortest_vector(m.form());
  auto [bw, bv] = brute_min_2d((1 + std::sqrt(5.0)) / 2, 1.0 / 64, 80);
  IVec want{bw[0], bw[1]};
  if (want[0] < 0 || (want[0] == 0 && want[1] < 0)) {
    want[0] = -want[0];
    want[1] = -want[1];
  }
  CHECK(sv.w == want);
  CHECK(sv.length.mid().to_double() == doctest::Approx(std::sqrt(bv)).epsilon(1e-9));
  // the minimizer is a convergent pair (q_n, p_n) of phi: consecutive Fibonacci
  mpz_class a = abs(sv.w[0]), b = abs(sv.w[1]);
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  CHECK(g == 1);
}

TEST_CASE("random small instances match brute force") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> ad(-8, 8);
  for (int t = 0; t < 30; ++t) {
    int k = 2 + (t % 2);
    QMat a(k, std::vector<mpq_class>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) a[i][j] = mpq_class(ad(rng), 8);
    QMat g(k, std::vector<mpq_class>(k, 0));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        for (int l = 0; l < k; ++l) g[i][j] += a[l][i] * a[l][j];
        if (i == j) g[i][j] += mpq_class(1, 3);
      }
    RationalGram form(g);
    auto sv = shortest_vector(form);
    // brute force over |w_i| <= 50: double prefilter, exact confirmation of
    // the near-minimal shell
    std::vector<std::vector<double>> fd(k, std::vector<double>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) fd[i][j] = g[i][j].get_d();
    double dmin = 1e300;
    std::vector<std::vector<long>> shell;
    std::vector<long> w(k, -50);
    while (true) {
      bool zero = true;
      for (long c : w) zero &= c == 0;
      if (!zero) {
        double v = 0;
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) v += fd[i][j] * w[i] * w[j];
        if (v < dmin * (1 + 1e-9)) {
          if (v < dmin) dmin = v;
          shell.push_back(w);
        }
      }
      int i = k - 1;
      while (i >= 0 && w[i] == 50) w[i--] = -50;
      if (i < 0) break;
      ++w[i];
    }
    mpq_class best = 0;
    bool first = true;
    for (const auto& cand : shell) {
      double v = 0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) v += fd[i][j] * cand[i] * cand[j];
      if (v > dmin * (1 + 1e-9)) continue;
      IVec wv(k);
      for (int i = 0; i < k; ++i) wv[i] = cand[i];
      mpq_class ev = form.eval_exact(wv);
      if (first || ev < best) {
        best = ev;
        first = false;
      }
    }
    CHECK(*sv.exact_len2 == best);
  }
}

TEST_CASE("2d covering radius matches the dense-grid farthest point") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> ad(-6, 6);
  for (int t = 0; t < 8; ++t) {
    QMat a(2, std::vector<mpq_class>(2));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) a[i][j] = mpq_class(ad(rng), 4);
    QMat g(2, std::vector<mpq_class>(2, 0));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        for (int l = 0; l < 2; ++l) g[i][j] += a[l][i] * a[l][j];
        if (i == j) g[i][j] += mpq_class(1, 2);
      }
    RationalGram form(g);
    auto cr = covering_radius(form);
    double R = cr.upper.hi().to_double();
    double gd[2][2] = {{g[0][0].get_d(), g[0][1].get_d()}, {g[1][0].get_d(), g[1][1].get_d()}};
    double worst = 0;
    const int N = 60;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        double x = i / double(N), y = j / double(N);
        double best = 1e300;
        for (int u = -3; u <= 3; ++u)
          for (int v = -3; v <= 3; ++v) {
            double dx = x - u, dy = y - v;
            double d = gd[0][0] * dx * dx + 2 * gd[0][1] * dx * dy + gd[1][1] * dy * dy;
            best = std::min(best, d);
          }
        worst = std::max(worst, std::sqrt(best));
      }
    // the grid maximum approaches the covering radius from below
    CHECK(R >= worst - 1e-9);
    CHECK(R <= worst * 1.08 + 0.05);
  }
}

TEST_CASE("k=3 identity covering bounds contain the dense-grid farthest point") {
  RationalGram g(identity_q(3));
  auto cr = covering_radius(g);
  // farthest-point oracle over the fundamental cell
  double worst = 0;
  const int N = 14;
  for (int a = 0; a <= N; ++a)
    for (int b = 0; b <= N; ++b)
      for (int c = 0; c <= N; ++c) {
        double x = a / double(N), y = b / double(N), z = c / double(N);
        double bestd = 1e300;
        for (int i = -1; i <= 1; ++i)
          for (int j = -1; j <= 1; ++j)
            for (int l = -1; l <= 1; ++l) {
              double d = (x - i) * (x - i) + (y - j) * (y - j) + (z - l) * (z - l);
              bestd = std::min(bestd, d);
            }
        worst = std::max(worst, std::sqrt(bestd));
      }
  // oracle approaches sqrt(3)/2 from below on the grid
  CHECK(cr.upper.hi().to_double() >= worst - 1e-12);
  CHECK(cr.lower.lo().to_double() <= std::sqrt(3.0) / 2 + 1e-12);
  CHECK(cr.upper.hi().to_double() >= std::sqrt(3.0) / 2 - 1e-12);
  CHECK(cr.upper.hi().to_double() / cr.lower.lo().to_double() <= std::sqrt(3.0) + 1e-9);
}

TEST_CASE("scan rows: transference, monotone injrad, exact volume, area identity") {
  ScanOptions opt;
  opt.per_octave = 2;
  auto grid = make_eps_grid(parse_eps("2^-16"), parse_eps("2^-2"), opt);
  auto rows = scan_collapse(2, {phi_source()}, grid, 2);
  REQUIRE(rows.size() >= 20);
  double prev_injrad = 1e300;
  for (const auto& r : rows) {
    double inj = r.injrad.to_double();
    double diam = r.diam_hi.to_double();
    double vol = r.vol.to_double();
    double eps = mpq_class(r.eps).get_d();
    double dmin = r.dual_min.to_double();
    CHECK(inj <= diam + 1e-15);
    CHECK(vol == doctest::Approx(eps).epsilon(1e-12));
    CHECK(dmin * diam >= 0.5 - 1e-9);
    CHECK(dmin * r.diam_lo.to_double() <= 1.0 + 1e-9);  // k/2 with k = 2
    // eps decreasing along rows; injrad must not increase
    CHECK(inj <= prev_injrad + 1e-15);
    prev_injrad = inj;
    // area identity: injrad * diam within a factor 4 of vol
    double area = inj * diam;
    CHECK(area <= 4 * vol);
    CHECK(4 * area >= vol);
  }
}

TEST_CASE("verify_th2 on golden and sqrt2 flows") {
  auto cf = cf_expand(RealInput::phi(), 40);
  auto rep = verify_th2(phi_source(), cf, parse_eps("2^-40"), parse_eps("2^-4"), 0.05, 1, 2);
  CHECK(rep.pass);
  CHECK(rep.inv_mu == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(rep.L == doctest::Approx(0.5).epsilon(0.1));

  auto cf2 = cf_expand(RealInput::sqrt_of(2), 40);
  auto rep2 = verify_th2(RealSource(RealInput::sqrt_of(2)), cf2, parse_eps("2^-40"),
                         parse_eps("2^-4"), 0.05, 1, 2);
  CHECK(rep2.pass);
}

TEST_CASE("verify_th2 at mu = 4 needs the convergent subgrid") {
  auto cf = construct_alpha_with_mu(4.0, 9);
  auto rep = verify_th2(cf.as_source(), cf, parse_eps("2^-120"), parse_eps("2^-4"), 0.08, 1, 2);
  CHECK(rep.mu_hat == doctest::Approx(4.0).epsilon(0.05));
  CHECK(rep.pass);
  CHECK(rep.L == doctest::Approx(0.25).epsilon(0.35));
}

TEST_CASE("verify_th3: badly approximable direction is bounded, liouville is not") {
  ScanOptions opt;
  opt.per_octave = 1;
  opt.workers = 2;
  std::vector<RealSource> bad = {RealSource(RealInput::sqrt_of(2))};
  auto rep = verify_th3(bad, 2, parse_eps("2^-30"), parse_eps("2^-4"), opt, 10000);
  CHECK(rep.bounded);
  CHECK(rep.c <= 6.0);

  // k = 3 along the cubic power basis; transference on every row
  std::vector<RealSource> cubic = {
      RealSource(RealInput::algebraic(poly::parse_poly("x^3-2"), 1, 2)),
      RealSource(RealInput::algebraic(poly::parse_poly("x^3-4"), 1, 2))};
  auto rep3 = verify_th3(cubic, 3, parse_eps("2^-24"), parse_eps("2^-4"), opt, 10000);
  CHECK(rep3.bounded);
  for (const auto& row : rep3.rows) {
    double dm = row.dual_min.to_double();
    CHECK(dm * row.diam_hi.to_double() >= 0.5 - 1e-9);
    CHECK(dm * row.diam_lo.to_double() <= 1.5 + 1e-9);  // k/2 at k = 3
  }

  // negative control: scan the liouville construction on its own subgrid
  auto cf = construct_liouville(6);
  auto est = mu_estimate(cf, 2);
  ScanOptions neg;
  neg.per_octave = 1;
  neg.cf_subgrid = true;
  neg.cf = cf;
  neg.mu_hat = est.mu_hat;
  neg.workers = 2;
  auto grid = make_eps_grid(parse_eps("2^-150"), parse_eps("2^-2"), neg);
  auto rows = scan_collapse(2, {cf.as_source()}, grid, 2);
  double rmin = 1e300, rmax = 0;
  for (const auto& r : rows) {
    Interval e = Interval::of_mpq(r.eps, 700);
    double ratio = (r.diam_hi / e.pow(Real(0.5, 700)).mid()).to_double();
    rmin = std::min(rmin, ratio);
    rmax = std::max(rmax, ratio);
  }
  CHECK(rmax / rmin > 100.0);  // diam / sqrt(eps) diverges along the subgrid
}

TEST_CASE("no collapse at eps = 1: identity ties resolve by colex") {
  // irrational direction forces the interval path; all unit vectors tie
  CollapsedMetric m = gram(3, {RealSource(RealInput::sqrt_of(2)), RealSource(RealInput::sqrt_of(3))},
                           mpq_class(1));
  auto sv = shortest_vector(m.form());
  CHECK(sv.w == IVec{1, 0, 0});
  CHECK(sv.length.mid().to_double() == doctest::Approx(1.0));
}

TEST_CASE("dimension caps") {
  QMat big(7, std::vector<mpq_class>(7, 0));
  for (int i = 0; i < 7; ++i) big[i][i] = 1;
  RationalGram g(big);
  CHECK_THROWS(shortest_vector(g));
  CHECK_THROWS(covering_radius(g));
}

TEST_CASE("scan rows do not depend on the worker count") {
  ScanOptions opt;
  opt.per_octave = 1;
  auto grid = make_eps_grid(parse_eps("2^-12"), parse_eps("2^-4"), opt);
  auto r1 = scan_collapse(2, {phi_source()}, grid, 1);
  auto r3 = scan_collapse(2, {phi_source()}, grid, 3);
  REQUIRE(r1.size() == r3.size());
  for (size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].eps == r3[i].eps);
    CHECK(r1[i].shortest_w == r3[i].shortest_w);
    CHECK(r1[i].injrad.to_double() == r3[i].injrad.to_double());
    CHECK(r1[i].diam_hi.to_double() == r3[i].diam_hi.to_double());
  }
}

TEST_CASE("rational direction exact path agrees with interval path") {
  std::vector<RealSource> third = {RealSource(RealInput::rational(mpq_class(1, 3)))};
  CollapsedMetric m = gram(2, third, mpq_class(1, 128));
  auto sv = shortest_vector(m.form());
  REQUIRE(sv.exact_len2.has_value());
  // (3, 1) is parallel to (1, 1/3): fully collapsed direction
  CHECK(sv.w == IVec{3, 1});
  mpq_class want = mpq_class(10) * (mpq_class(1, 128) * mpq_class(1, 128));
  CHECK(*sv.exact_len2 == want);
}
