#include "clab/collapse.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

namespace clab {

namespace {

// bits of precision demanded by the collapse scale: 64 + 4 |log2 eps|
Prec precision_for(const mpq_class& eps) {
  double l = std::log2(mpq_class(eps).get_d());
  if (!std::isfinite(l) || l > 0) {
    // extreme eps underflows double; fall back to numerator/denominator sizes
    size_t nb = mpz_sizeinbase(eps.get_num().get_mpz_t(), 2);
    size_t db = mpz_sizeinbase(eps.get_den().get_mpz_t(), 2);
    l = static_cast<double>(nb) - static_cast<double>(db);
  }
  double bits = 64.0 + 4.0 * std::fabs(l);
  return static_cast<Prec>(bits);
}

double ln_real(const Real& x) { return Real::log(x).to_double(); }

double ln_mpq(const mpq_class& q) {
  Real r(q, 128);
  return ln_real(r);
}

double ln_mpz_bits(const mpz_class& z) {
  Real r(z, 96);
  return (Real::log(r) / Real(std::log(2.0), 96)).to_double();
}

}  // namespace

CollapsedGram CollapsedMetric::form() const {
  mpq_class coef = eps * eps - 1;
  return CollapsedGram(alpha, coef, prec);
}

CollapsedGram CollapsedMetric::dual_form() const {
  mpq_class coef = 1 / (eps * eps) - 1;
  return CollapsedGram(alpha, coef, prec);
}

std::vector<std::vector<Interval>> CollapsedMetric::gram_matrix() const {
  std::vector<Interval> d;
  d.push_back(Interval::of_mpq(1, prec));
  for (const auto& a : alpha) d.push_back(a.eval(prec));
  Interval n2 = d[0].square();
  for (size_t i = 1; i < d.size(); ++i) n2 = n2 + d[i].square();
  Interval coef = Interval::of_mpq(eps * eps - 1, prec) / n2;
  std::vector<std::vector<Interval>> g(k, std::vector<Interval>(k, Interval::of_mpq(0, prec)));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      Interval v = coef * d[i] * d[j];
      if (i == j) v = v + Interval::of_mpq(1, prec);
      g[i][j] = v;
    }
  }
  return g;
}

Interval CollapsedMetric::det_from_matrix() const {
  auto g = gram_matrix();
  // interval Gaussian elimination; k <= 6
  int n = k;
  Interval det = Interval::of_mpq(1, prec);
  for (int c = 0; c < n; ++c) {
    det = det * g[c][c];
    for (int i = c + 1; i < n; ++i) {
      Interval f = g[i][c] / g[c][c];
      for (int j = c; j < n; ++j) g[i][j] = g[i][j] - f * g[c][j];
    }
  }
  return det;
}

CollapsedMetric gram(int k, std::vector<RealSource> alpha, const mpq_class& eps) {
  if (k < 2) throw std::invalid_argument("gram: k >= 2 required");
  if (static_cast<int>(alpha.size()) != k - 1)
    throw std::invalid_argument("gram: alpha must have k-1 components");
  if (!(eps > 0) || eps > 1) throw std::invalid_argument("gram: eps must lie in (0, 1]");
  CollapsedMetric m;
  m.k = k;
  m.alpha = std::move(alpha);
  m.eps = eps;
  m.eps.canonicalize();
  m.prec = precision_for(m.eps);
  return m;
}

mpq_class dyadic_from_real(const Real& x) {
  if (x.sign() <= 0) throw std::domain_error("dyadic_from_real: positive input required");
  mpfr_t t;
  mpfr_init2(t, 53);
  mpfr_set(t, x.get(), MPFR_RNDN);
  mpz_class m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), t);
  mpfr_clear(t);
  mpq_class r;
  if (e >= 0) {
    mpz_class sc;
    mpz_ui_pow_ui(sc.get_mpz_t(), 2, static_cast<unsigned long>(e));
    r = mpq_class(m * sc);
  } else {
    mpz_class sc;
    mpz_ui_pow_ui(sc.get_mpz_t(), 2, static_cast<unsigned long>(-e));
    r = mpq_class(m, sc);
  }
  r.canonicalize();
  return r;
}

std::vector<mpq_class> convergent_subgrid(const ContinuedFraction& cf, double mu_hat,
                                          const mpq_class& floor_eps, const mpq_class& eps_max) {
  std::vector<mpq_class> out;
  for (size_t n = 1; n < cf.q.size(); ++n) {
    const mpz_class& qn = cf.q[n];
    if (qn < 2) continue;
    // eps_n = q_n^{-mu_hat}
    double lq = ln_mpz_bits(qn);
    double l2 = mu_hat * lq;  // -log2(eps_n)
    if (l2 > 4e6) break;      // precision guard
    Prec p = 64;
    Real e(p);
    mpfr_set_d(e.get(), -l2, MPFR_RNDN);
    mpfr_exp2(e.get(), e.get(), MPFR_RNDN);
    mpq_class eps_n = dyadic_from_real(e);
    if (eps_n < floor_eps || eps_n > eps_max) continue;
    out.push_back(eps_n);
  }
  return out;
}

std::vector<mpq_class> make_eps_grid(const mpq_class& eps_min, const mpq_class& eps_max,
                                     const ScanOptions& opt) {
  if (!(eps_min > 0) || eps_min > eps_max || eps_max > 1)
    throw std::invalid_argument("eps grid: need 0 < eps_min <= eps_max <= 1");
  std::set<mpq_class> grid;
  double l_max = -ln_mpq(eps_min) / std::log(2.0);  // largest -log2 eps
  double l_min = -ln_mpq(eps_max) / std::log(2.0);
  int per = std::max(1, opt.per_octave);
  long steps = static_cast<long>(std::ceil((l_max - l_min) * per + 0.5));
  for (long i = 0; i <= steps; ++i) {
    double l = l_min + static_cast<double>(i) / per;
    if (l > l_max + 1e-9) break;
    Prec p = 64;
    Real e(p);
    mpfr_set_d(e.get(), -l, MPFR_RNDN);
    mpfr_exp2(e.get(), e.get(), MPFR_RNDN);
    grid.insert(dyadic_from_real(e));
  }
  if (opt.cf_subgrid && opt.cf && opt.cf->size() >= 2) {
    mpq_class floor_eps = opt.subgrid_floor > 0 ? opt.subgrid_floor : eps_min;
    for (const auto& e : convergent_subgrid(*opt.cf, opt.mu_hat, floor_eps, eps_max))
      grid.insert(e);
  }
  // descending eps
  return {grid.rbegin(), grid.rend()};
}

std::vector<CollapseScanRow> scan_collapse(int k, const std::vector<RealSource>& alpha,
                                           const std::vector<mpq_class>& eps_grid, int workers) {
  if (eps_grid.empty()) return {};
  std::vector<CollapseScanRow> rows(eps_grid.size());
  auto work = [&](size_t i) {
    CollapsedMetric m = gram(k, alpha, eps_grid[i]);
    CollapseScanRow row;
    row.eps = eps_grid[i];
    CollapsedGram f = m.form();
    auto sv = shortest_vector(f);
    Real half(0.5, 128);
    row.shortest_w = sv.w;
    row.injrad = sv.length.mid() * half;
    auto cr = covering_radius(f);
    row.diam_lo = cr.lower.lo();
    row.diam_hi = cr.upper.hi();
    row.vol = m.det_from_matrix().sqrt().mid();
    auto dv = shortest_vector(m.dual_form());
    row.dual_min = dv.length.mid();
    double le = ln_mpq(row.eps);
    if (le < 0) {  // exponents are meaningless at eps = 1
      row.exp_injrad = ln_real(row.injrad) / le;
      row.exp_diam = ln_real(row.diam_hi) / le;
      row.exp_diam_lo = ln_real(row.diam_lo) / le;
    }
    rows[i] = std::move(row);
  };
  int W = std::max(1, workers);
  if (W == 1 || rows.size() == 1) {
    for (size_t i = 0; i < rows.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int w = 0; w < W; ++w)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < rows.size(); i = next.fetch_add(1)) work(i);
      });
    for (auto& t : pool) t.join();
  }
  return rows;
}

ExponentSummary exponent_summary(const std::vector<CollapseScanRow>& rows) {
  ExponentSummary s;
  if (rows.empty()) return s;
  double lmin = 0, lmax = -1e300;
  for (const auto& r : rows) {
    double l = ln_mpq(r.eps);
    lmin = std::min(lmin, l);
    lmax = std::max(lmax, l);
  }
  double cut = (lmin + lmax) / 2;  // geometric midpoint of the eps range
  bool first = true;
  for (const auto& r : rows) {
    if (ln_mpq(r.eps) > cut) continue;
    if (first || r.exp_diam < s.min_exp_diam) {
      s.min_exp_diam = r.exp_diam;
      s.witness_eps_diam = r.eps;
    }
    if (first || r.exp_injrad > s.max_exp_injrad) {
      s.max_exp_injrad = r.exp_injrad;
      s.witness_eps_injrad = r.eps;
    }
    first = false;
    ++s.rows_used;
  }
  return s;
}

Th2Report verify_th2(const RealSource& alpha, const ContinuedFraction& cf,
                     const mpq_class& eps_min, const mpq_class& eps_max, double tolerance,
                     int per_octave, int workers) {
  Th2Report rep;
  MuEstimate mu = mu_estimate(cf, static_cast<int>(cf.size()) / 3);
  rep.mu_hat = mu.mu_hat;
  rep.inv_mu = 1.0 / mu.mu_hat;
  rep.tolerance = tolerance;
  ScanOptions opt;
  opt.per_octave = per_octave;
  opt.cf_subgrid = true;
  opt.cf = cf;
  opt.mu_hat = mu.mu_hat;
  opt.workers = workers;
  auto grid = make_eps_grid(eps_min, eps_max, opt);
  rep.rows = scan_collapse(2, {alpha}, grid, workers);
  std::set<mpq_class> sub;
  for (const auto& e : convergent_subgrid(cf, mu.mu_hat, eps_min, eps_max)) sub.insert(e);
  for (auto& r : rep.rows) r.from_subgrid = sub.count(r.eps) > 0;
  auto s = exponent_summary(rep.rows);
  rep.L = s.min_exp_diam;
  rep.witness_eps = s.witness_eps_diam;
  rep.pass = std::fabs(rep.L - rep.inv_mu) <= tolerance;
  return rep;
}

Th3Report verify_th3(const std::vector<RealSource>& alpha, int k, const mpq_class& eps_min,
                     const mpq_class& eps_max, const ScanOptions& opt, long precheck_Q) {
  Th3Report rep;
  rep.k = k;
  auto cert = badapprox_scan(alpha, precheck_Q, opt.workers);
  rep.min_quality = cert.min_quality;
  if (cert.exact_hit || cert.min_quality <= 0)
    throw std::invalid_argument("verify_th3: direction is rationally degenerate");
  auto grid = make_eps_grid(eps_min, eps_max, opt);
  rep.rows = scan_collapse(k, alpha, grid, opt.workers);
  Real inv_k(1.0 / k, 128);
  bool first = true;
  double up_max = 0;  // max of eps^{1/k} / diam_lo
  for (const auto& r : rep.rows) {
    Interval e = Interval::of_mpq(r.eps, 192);
    Real ek = e.pow(inv_k).mid();
    double ratio_hi = (r.diam_hi / ek).to_double();
    double ratio_lo = (ek / r.diam_lo).to_double();
    if (first) {
      rep.ratio_min = rep.ratio_max = ratio_hi;
      up_max = ratio_lo;
      first = false;
    } else {
      rep.ratio_min = std::min(rep.ratio_min, ratio_hi);
      rep.ratio_max = std::max(rep.ratio_max, ratio_hi);
      up_max = std::max(up_max, ratio_lo);
    }
  }
  rep.c = std::max(rep.ratio_max, up_max);
  rep.drift = rep.ratio_min > 0 ? rep.ratio_max / rep.ratio_min : 0;
  rep.bounded = rep.drift <= rep.drift_tolerance && rep.ratio_min > 0;
  return rep;
}

}  // namespace clab
