#include "clab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include "clab/cf.hpp"
#include "clab/cohomology.hpp"
#include "clab/collapse.hpp"
#include "clab/csv.hpp"
#include "clab/harness.hpp"
#include "clab/numberfield.hpp"
#include "clab/spectra.hpp"

namespace clab {

namespace {

// AC-7 regression baseline: min over q <= 1e5 of q^{1/2} dist(q(2^{1/3},4^{1/3}), Z^2),
// attained at q = 46; certified by the interval scan and cross-checked at
// 60 decimal digits.
constexpr double kBadApproxBaseline = 0.295924619922951547;

struct Ctx {
  int workers = 1;
  std::vector<CollapseScanRow> phi_rows;
  double phi_mu = 2.0;
  double suite_seconds = 0;

  const std::vector<CollapseScanRow>& phi_scan() {
    if (phi_rows.empty()) {
      auto cf = cf_expand(RealInput::phi(), 40);
      MuEstimate est = mu_estimate(cf, 13);
      phi_mu = est.mu_hat;
      ScanOptions opt;
      opt.per_octave = 1;
      opt.cf_subgrid = true;
      opt.cf = cf;
      opt.mu_hat = est.mu_hat;
      opt.workers = workers;
      auto grid = make_eps_grid(parse_eps("2^-48"), parse_eps("2^-4"), opt);
      phi_rows = scan_collapse(2, {RealSource(RealInput::phi())}, grid, workers);
    }
    return phi_rows;
  }
};

std::string fmt(double x) { return fmt_double(x, 6); }

bool in_range(double x, double lo, double hi) { return x >= lo && x <= hi; }

// deterministic rational in [-1, 1] with denominator 32
mpq_class snapped_unit(std::mt19937& rng) {
  std::uniform_int_distribution<int> d(-32, 32);
  mpq_class r(d(rng), 32);
  r.canonicalize();
  return r;
}

QMat random_spd(std::mt19937& rng, int k) {
  QMat a(k, std::vector<mpq_class>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a[i][j] = snapped_unit(rng);
  QMat g(k, std::vector<mpq_class>(k, 0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      for (int l = 0; l < k; ++l) g[i][j] += a[l][i] * a[l][j];
      if (i == j) g[i][j] += mpq_class(1, 4);
    }
  return g;
}

double regression_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = static_cast<double>(pts.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CriterionResult ac1(Ctx&) {
  CriterionResult r{"AC-1"};
  auto cf_phi = cf_expand(RealInput::phi(), 60);
  auto est_phi = mu_estimate(cf_phi, 20);
  auto cf_s2 = cf_expand(RealInput::sqrt_of(2), 60);
  auto est_s2 = mu_estimate(cf_s2, 20);
  r.pass = in_range(est_phi.mu_hat, 1.99, 2.01) && in_range(est_s2.mu_hat, 1.99, 2.01);
  r.detail = "mu(phi)=" + fmt(est_phi.mu_hat) + " mu(sqrt2)=" + fmt(est_s2.mu_hat);
  return r;
}

CriterionResult ac2(Ctx&) {
  CriterionResult r{"AC-2"};
  auto cf4 = construct_alpha_with_mu(4.0, 12);
  auto est4 = mu_estimate(cf4, 4);
  auto cf3 = construct_alpha_with_mu(3.0, 14);
  auto est3 = mu_estimate(cf3, 4);
  r.pass = in_range(est4.mu_hat, 3.8, 4.2) && in_range(est3.mu_hat, 2.85, 3.15);
  r.detail = "mu4=" + fmt(est4.mu_hat) + " mu3=" + fmt(est3.mu_hat);
  return r;
}

CriterionResult ac3(Ctx& ctx) {
  CriterionResult r{"AC-3"};
  auto s = exponent_summary(ctx.phi_scan());
  r.pass = in_range(s.min_exp_diam, 0.45, 0.55);
  r.detail = "min exp_diam=" + fmt(s.min_exp_diam) + " over " + std::to_string(s.rows_used) +
             " tail rows";
  return r;
}

CriterionResult ac4(Ctx& ctx) {
  CriterionResult r{"AC-4"};
  auto s = exponent_summary(ctx.phi_scan());
  r.pass = in_range(s.max_exp_injrad, 0.45, 0.55);
  r.detail = "max exp_injrad=" + fmt(s.max_exp_injrad);
  return r;
}

CriterionResult ac5(Ctx&) {
  CriterionResult r{"AC-5"};
  std::mt19937 rng(20240501);
  std::uniform_int_distribution<int> mant(1, 1 << 20);
  std::uniform_int_distribution<int> expo(2, 40);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    mpq_class alpha = snapped_unit(rng) * 10 + mpq_class(1, 7);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, 20 + expo(rng));
    mpq_class eps(mant(rng), den);
    eps.canonicalize();
    if (!(eps > 0) || eps > 1) continue;
    CollapsedMetric m = gram(2, {RealSource(RealInput::rational(alpha))}, eps);
    Interval v = m.det_from_matrix().sqrt();
    Interval rel = (v - Interval::of_mpq(eps, m.prec)) / Interval::of_mpq(eps, m.prec);
    double err = std::max(std::fabs(rel.lo().to_double()), std::fabs(rel.hi().to_double()));
    worst = std::max(worst, err);
  }
  r.pass = worst <= 1e-12;
  r.detail = "worst |sqrt(det)/eps - 1| = " + fmt(worst);
  return r;
}

CriterionResult ac6(Ctx& ctx) {
  CriterionResult r{"AC-6"};
  // positive direction: integer basis of the cubic field of 2^{1/3}
  auto ord = make_order(poly::parse_poly("x^3 - 2"));
  auto dirs_in = basis_direction(ord);
  std::vector<RealSource> dirs;
  for (const auto& d : dirs_in) dirs.push_back(RealSource(d));
  ScanOptions opt;
  opt.per_octave = 1;
  opt.workers = ctx.workers;
  auto rep = verify_th3(dirs, 3, parse_eps("2^-40"), parse_eps("2^-4"), opt, 10000);
  bool positive_ok = true;
  Real third(1.0 / 3.0, 128);
  for (const auto& row : rep.rows) {
    double ratio = (row.diam_hi / Interval::of_mpq(row.eps, 192).pow(third).mid()).to_double();
    if (!in_range(ratio, 0.1, 10.0)) positive_ok = false;
  }
  // negative control: the mu = 4 construction at k = 2 on its convergent subgrid
  auto cf4 = construct_alpha_with_mu(4.0, 8);
  mpz_class floor_den;
  mpz_ui_pow_ui(floor_den.get_mpz_t(), 2, 200);
  auto subgrid = convergent_subgrid(cf4, 4.0, mpq_class(1, floor_den), mpq_class(1, 16));
  auto neg_rows = scan_collapse(2, {cf4.as_source()}, subgrid, ctx.workers);
  double rmin = 1e300, rmax = 0;
  Real half_e(0.5, 128);
  for (const auto& row : neg_rows) {
    double ratio = (row.diam_hi / Interval::of_mpq(row.eps, 900).pow(half_e).mid()).to_double();
    rmin = std::min(rmin, ratio);
    rmax = std::max(rmax, ratio);
  }
  double drift = rmin > 0 ? rmax / rmin : 0;
  r.pass = positive_ok && drift > 100.0;
  r.detail = "c=" + fmt(rep.c) + " negative-control drift=" + fmt(drift) + " (" +
             std::to_string(neg_rows.size()) + " subgrid rows)";
  return r;
}

CriterionResult ac7(Ctx& ctx) {
  CriterionResult r{"AC-7"};
  auto ord = make_order(poly::parse_poly("x^3 - 2"));
  auto dirs_in = basis_direction(ord);
  std::vector<RealSource> dirs;
  for (const auto& d : dirs_in) dirs.push_back(RealSource(d));
  auto cert = badapprox_scan(dirs, 100000, ctx.workers);
  bool floor_ok = cert.min_quality > 0.01;
  bool baseline_ok = std::fabs(cert.min_quality - kBadApproxBaseline) <=
                     1e-6 * kBadApproxBaseline;
  r.pass = floor_ok && baseline_ok;
  r.detail = "min_quality=" + fmt_double(cert.min_quality, 12) +
             " at q=" + cert.argmin_q.get_str();
  return r;
}

CriterionResult ac8(Ctx&) {
  CriterionResult r{"AC-8"};
  std::mt19937 rng(777);
  std::uniform_int_distribution<int> kpick(1, 3);
  bool ok = true;
  std::string fail;
  for (int t = 0; t < 50 && ok; ++t) {
    int k = kpick(rng);
    QMat g = random_spd(rng, k);
    RationalGram G(g);
    RationalGram dual = G.inverse();
    // brute force over the box |w_i| <= 50: double prefilter, then the
    // near-minimal shell is confirmed exactly
    std::vector<std::vector<double>> dd(k, std::vector<double>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) dd[i][j] = dual.matrix()[i][j].get_d();
    double dmin = 1e300;
    std::vector<std::vector<long>> shell;
    std::vector<long> w(k, -50);
    while (true) {
      bool zero = true;
      for (long c : w) zero &= c == 0;
      if (!zero) {
        double v = 0;
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) v += dd[i][j] * w[i] * w[j];
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
      IVec wv(k);
      for (int i = 0; i < k; ++i) wv[i] = cand[i];
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) v += dd[i][j] * cand[i] * cand[j];
      if (v > dmin * (1 + 1e-9)) continue;
      mpq_class ev = dual.eval_exact(wv);
      if (first || ev < best) {
        best = ev;
        first = false;
      }
    }
    for (int p = 0; p <= k && ok; ++p) {
      TorusSpectrum spec = torus_hodge_spectrum(G, p, 8);
      if (spec.levels[0].normsq != 0 || spec.levels[0].multiplicity != binom(k, p)) {
        ok = false;
        fail = "zero level multiplicity mismatch";
      }
      if (spec.levels.size() > 1 && spec.levels[1].normsq != best) {
        ok = false;
        fail = "first positive level differs from brute force";
      }
    }
    // lambda_{0,1} = 4 pi^2 (dual shortest)^2
    auto sv = shortest_vector(dual);
    if (*sv.exact_len2 != best) {
      ok = false;
      fail = "dual shortest disagrees with brute force";
    }
    TorusSpectrum s0 = torus_hodge_spectrum(G, 0, 3);
    Interval pi2 = Interval::pi(96).square() * Interval::of_mpq(4, 96);
    double expected = (pi2 * Interval::of_mpq(*sv.exact_len2, 96)).mid().to_double();
    if (s0.levels.size() < 2 ||
        std::fabs(s0.levels[1].eigenvalue - expected) > 1e-10 * expected) {
      ok = false;
      fail = "lambda_{0,1} mismatch with 4 pi^2 (dual shortest)^2";
    }
  }
  r.pass = ok;
  r.detail = ok ? "50 random Grams, enumeration == brute force" : fail;
  return r;
}

CriterionResult ac9(Ctx&) {
  CriterionResult r{"AC-9"};
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> kpick(2, 3);
  bool ok = true;
  double worst = 1e300;
  for (int t = 0; t < 100 && ok; ++t) {
    int k = kpick(rng);
    RationalGram G(random_spd(rng, k));
    RationalGram G2(random_spd(rng, k));
    for (int p = 0; p <= k; ++p) {
      auto rep = dodziuk_check(G, G2, p, 50);
      worst = std::min(worst, rep.worst_margin);
      if (!rep.holds) {
        ok = false;
        break;
      }
    }
  }
  r.pass = ok;
  r.detail = "100 random pairs, worst margin=" + fmt(worst);
  return r;
}

CriterionResult ac10(Ctx&) {
  CriterionResult r{"AC-10"};
  bool ok = true;
  std::string detail;
  for (double alpha : {1.0, std::sqrt(2.0)}) {
    std::vector<std::pair<double, double>> pts;
    double worst_gap = 0;
    for (int j = 1; j <= 8; ++j) {
      double eps = std::ldexp(1.0, -j);
      HopfRayleigh hr = hopf_rayleigh({alpha, eps, 128});
      pts.emplace_back(std::log(eps), std::log(hr.R_eps));
      worst_gap = std::max(worst_gap, hr.rel_gap);
    }
    double slope = regression_slope(pts);
    if (!in_range(slope, 1.98, 2.02) || worst_gap >= 1e-6) ok = false;
    detail += "slope(" + fmt(alpha) + ")=" + fmt(slope) + " gap=" + fmt(worst_gap) + " ";
  }
  r.pass = ok;
  r.detail = detail;
  return r;
}

CriterionResult ac11(Ctx&) {
  CriterionResult r{"AC-11"};
  auto expect = [](const std::string& name, const std::vector<int>& want) {
    return m_p(lookup(name)) == want;
  };
  bool ok = expect("hopf-s3", {0, 1, 1, 0}) && expect("sphere-s5", {0, 1, 1, 1, 1, 0}) &&
            expect("t2-dense", {0, 0, 0}) && expect("t3-dense", {0, 0, 0, 0}) &&
            expect("carriere-sol", {0, 0, 0, 0}) && expect("euler-surgery", {0, 0, 0, 0, 0});
  auto m5 = m_p(lookup("sol5-blocks"));
  ok = ok && m5[2] > 0;
  for (const auto& f : catalog()) {
    validate(f);
    ok = ok && vanishing_criteria(f).pass && gysin_consistency(f).feasible;
  }
  r.pass = ok;
  r.detail = ok ? "all catalog profiles verified" : "catalog mismatch";
  return r;
}

CriterionResult ac12(Ctx&) {
  CriterionResult r{"AC-12"};
  auto rep = appendix_matrices_check();
  r.pass = rep.commute && !rep.p_inv_a_p_integral && rep.p_inv_b_p_integral;
  r.detail = std::string("commute=") + (rep.commute ? "yes" : "no") +
             " P^-1AP integral=" + (rep.p_inv_a_p_integral ? "yes" : "no") +
             " P^-1BP integral=" + (rep.p_inv_b_p_integral ? "yes" : "no") +
             " eigen_residual=" + fmt(rep.eigen_residual);
  return r;
}

CriterionResult ac13(Ctx&) {
  CriterionResult r{"AC-13"};
  auto ord2 = make_order(poly::parse_poly("x^2 - 2"));
  auto pell = pell_unit(2);
  IMat M = mult_matrix(ord2, pell.norm_plus_one);
  IMat want = {{3, 4}, {2, 3}};
  bool ok = imat_equal(M, want);
  // transpose-eigenvector identity M^T (1, sqrt2) = (3 + 2 sqrt2)(1, sqrt2)
  Prec prec = 192;
  Interval s2 = RealInput::sqrt_of(2).eval(prec);
  Interval lambda = Interval::of_mpq(3, prec) + Interval::of_mpq(2, prec) * s2;
  std::vector<Interval> v = {Interval::of_mpq(1, prec), s2};
  double residual = 0;
  IMat Mt = imat_transpose(M);
  for (int i = 0; i < 2; ++i) {
    Interval acc = Interval::of_mpq(0, prec);
    for (int j = 0; j < 2; ++j) acc = acc + Interval::of_mpz(Mt[i][j], prec) * v[j];
    Interval diff = acc - lambda * v[i];
    residual = std::max(residual, Real::abs(diff.mid()).to_double() + diff.width().to_double());
  }
  ok = ok && residual < 1e-10;

  // morphism property over the searched unit pairs
  auto check_morphism = [&](const NumberFieldOrder& ord, long bound) {
    auto units = unit_search(ord, bound).positive_units;
    for (const auto& a : units) {
      for (const auto& b : units) {
        OrderElement ab = element_mul(ord, a, b);
        IMat left = mult_matrix(ord, ab);
        IMat right = imat_mul(mult_matrix(ord, a), mult_matrix(ord, b));
        if (!imat_equal(left, right)) return false;
      }
    }
    return !units.empty();
  };
  bool morph2 = check_morphism(ord2, 10);
  auto ord3 = make_order(poly::parse_poly("x^3 - x - 1"));
  bool morph3 = check_morphism(ord3, 10);
  ok = ok && morph2 && morph3;
  r.pass = ok;
  r.detail = std::string("M=[[3,4],[2,3]]: ") + (imat_equal(M, want) ? "yes" : "no") +
             " residual=" + fmt(residual) + " morphism(sqrt2)=" + (morph2 ? "ok" : "FAIL") +
             " morphism(plastic)=" + (morph3 ? "ok" : "FAIL");
  return r;
}

CriterionResult ac14(Ctx& ctx) {
  CriterionResult r{"AC-14"};
  // determinism: identical configs byte-identical modulo the timestamp line
  ExperimentConfig cfg = ExperimentConfig::from_pairs(
      "collapse", {{"alpha", "phi"}, {"eps_min", "2^-12"}, {"eps_max", "2^-4"},
                   {"per_octave", "1"}, {"workers", std::to_string(ctx.workers)}});
  auto r1 = run(cfg);
  auto r2 = run(cfg);
  bool deterministic = strip_timestamp(r1.csv) == strip_timestamp(r2.csv);
  bool budget = ctx.suite_seconds < 300.0;
  r.pass = deterministic && budget;
  r.detail = std::string("deterministic=") + (deterministic ? "yes" : "no") +
             " suite_seconds=" + fmt(ctx.suite_seconds);
  return r;
}

using Runner = std::function<CriterionResult(Ctx&)>;

const std::vector<std::pair<std::string, Runner>>& criteria() {
  static const std::vector<std::pair<std::string, Runner>> c = {
      {"AC-1", ac1},   {"AC-2", ac2},   {"AC-3", ac3},   {"AC-4", ac4},  {"AC-5", ac5},
      {"AC-6", ac6},   {"AC-7", ac7},   {"AC-8", ac8},   {"AC-9", ac9},  {"AC-10", ac10},
      {"AC-11", ac11}, {"AC-12", ac12}, {"AC-13", ac13}, {"AC-14", ac14}};
  return c;
}

// per-criterion runtime budgets from the acceptance contract
const std::map<std::string, double>& budgets() {
  static const std::map<std::string, double> b = {
      {"AC-1", 1.0}, {"AC-2", 5.0}, {"AC-3", 30.0}, {"AC-6", 60.0}, {"AC-10", 60.0}};
  return b;
}

}  // namespace

std::vector<std::string> acceptance_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, fn] : criteria()) ids.push_back(id);
  return ids;
}

std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& only, int workers) {
  Ctx ctx;
  ctx.workers = std::max(1, workers);
  std::vector<CriterionResult> out;
  for (const auto& [id, fn] : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult res;
    try {
      res = fn(ctx);
    } catch (const std::exception& e) {
      res.id = id;
      res.pass = false;
      res.detail = std::string("exception: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto b = budgets().find(id);
    if (b != budgets().end() && res.seconds > b->second) {
      res.pass = false;
      res.detail += " [over budget " + fmt_double(b->second, 3) + "s]";
    }
    ctx.suite_seconds += res.seconds;
    out.push_back(std::move(res));
  }
  return out;
}

int acceptance_report(const std::vector<CriterionResult>& results, std::ostream& out) {
  bool all = true;
  for (const auto& r : results) {
    out << std::left << std::setw(7) << r.id << (r.pass ? "PASS" : "FAIL") << "  "
        << std::setw(8) << (fmt_double(r.seconds, 3) + "s") << " " << r.detail << "\n";
    all &= r.pass;
  }
  out << (all ? "all criteria passed" : "SOME CRITERIA FAILED") << "\n";
  return all ? 0 : 1;
}

}  // namespace clab
