#include "clab/cf.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace clab {

void ContinuedFraction::push(const mpz_class& quotient) {
  if (!a.empty() && quotient < 1) throw std::invalid_argument("partial quotient < 1 at index >= 1");
  // seeds (p_{-1}, q_{-1}) = (1, 0), (p_{-2}, q_{-2}) = (0, 1)
  mpz_class pm1 = p.empty() ? mpz_class(1) : p.back();
  mpz_class pm2 = p.size() < 2 ? (p.empty() ? mpz_class(0) : mpz_class(1)) : p[p.size() - 2];
  mpz_class qm1 = q.empty() ? mpz_class(0) : q.back();
  mpz_class qm2 = q.size() < 2 ? (q.empty() ? mpz_class(1) : mpz_class(0)) : q[q.size() - 2];
  p.push_back(quotient * pm1 + pm2);
  q.push_back(quotient * qm1 + qm2);
  a.push_back(quotient);
}

ConvergentPair ContinuedFraction::tail_enclosure() const {
  if (size() < 2) throw std::logic_error("tail_enclosure needs >= 2 convergents");
  size_t n = size() - 1;
  // consecutive convergents straddle the value; order them
  mpq_class last(p[n], q[n]), prev(p[n - 1], q[n - 1]);
  last.canonicalize();
  prev.canonicalize();
  if (prev < last) return ConvergentPair{p[n - 1], q[n - 1], p[n], q[n]};
  return ConvergentPair{p[n], q[n], p[n - 1], q[n - 1]};
}

namespace {

ContinuedFraction expand_rational(mpq_class x, int n_terms) {
  ContinuedFraction cf;
  mpz_class num = x.get_num(), den = x.get_den();
  while (cf.size() < static_cast<size_t>(n_terms)) {
    mpz_class a, r;
    mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    cf.push(a);
    if (r == 0) {
      cf.finite = true;
      break;
    }
    num = den;
    den = r;
  }
  cf.exact = true;
  return cf;
}

// State for the classical (P + sqrt(D))/Q quotient cycle; Q | D - P^2.
struct SurdState {
  mpz_class P, Q, D, sqrtD;
  mpz_class next_quotient() {
    mpz_class a;
    if (Q > 0) {
      mpz_class t = P + sqrtD;
      mpz_fdiv_q(a.get_mpz_t(), t.get_mpz_t(), Q.get_mpz_t());
    } else {
      // (P + sqrt D)/Q = (-P - sqrt D)/|Q|; floor((A - sqrt D)/B) = floor((A - s - 1)/B)
      mpz_class B = -Q;
      mpz_class t = -P - sqrtD - 1;
      mpz_fdiv_q(a.get_mpz_t(), t.get_mpz_t(), B.get_mpz_t());
    }
    mpz_class Pn = a * Q - P;
    mpz_class Qn = (D - Pn * Pn) / Q;
    P = Pn;
    Q = Qn;
    return a;
  }
};

SurdState surd_state(const Surd& s) {
  mpz_class P = s.a, Q = s.c, D = s.b * s.b * s.d;
  if (s.b < 0) {
    P = -P;
    Q = -Q;
  }
  mpz_class rem = D - P * P;
  if (!mpz_divisible_p(rem.get_mpz_t(), Q.get_mpz_t())) {
    mpz_class g = abs(Q);
    P *= g;
    D *= g * g;
    Q *= g;
  }
  mpz_class sq;
  mpz_sqrt(sq.get_mpz_t(), D.get_mpz_t());
  return SurdState{P, Q, D, sq};
}

ContinuedFraction expand_surd(const Surd& s, int n_terms) {
  ContinuedFraction cf;
  SurdState st = surd_state(s);
  for (int i = 0; i < n_terms; ++i) cf.push(st.next_quotient());
  cf.exact = true;
  return cf;
}

ContinuedFraction expand_algebraic(const AlgebraicReal& ar, int n_terms) {
  ContinuedFraction cf;
  ZPoly poly = ar.poly;
  mpq_class lo = ar.lo, hi = ar.hi;
  cf.exact = true;
  auto qfloor = [](const mpq_class& x) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return f;
  };
  while (cf.size() < static_cast<size_t>(n_terms)) {
    // settle floor by bisection; detect rational roots (integers straddled
    // by the bracket, or midpoint hits) so the bisection cannot stall
    std::optional<mpq_class> rational_tail;
    while (true) {
      mpz_class fl = qfloor(lo), fh = qfloor(hi);
      if (fl == fh && lo > fl) break;
      if (fl != fh && poly::eval(poly, mpq_class(fh)) == 0) {
        rational_tail = mpq_class(fh);
        break;
      }
      mpq_class mid = (lo + hi) / 2;
      int sm = poly::sign_at(poly, mid);
      if (sm == 0) {
        rational_tail = mid;
        break;
      }
      if (sm == poly::sign_at(poly, lo)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (rational_tail) {
      ContinuedFraction tail = expand_rational(*rational_tail, n_terms - (int)cf.size());
      for (const auto& t : tail.a) cf.push(t);
      cf.finite = tail.finite;
      break;
    }
    mpz_class a = qfloor(lo);
    if (poly::eval(poly, mpq_class(a)) == 0) {
      cf.push(a);
      cf.finite = true;
      break;
    }
    cf.push(a);
    if (cf.size() == static_cast<size_t>(n_terms)) break;
    // x -> 1/(x - a): shift then reverse; root moves to (1/(hi-a), 1/(lo-a))
    poly = poly::primitive_part(poly::reverse(poly::taylor_shift(poly, a)));
    mpq_class nlo = 1 / (hi - a), nhi = 1 / (lo - a);
    lo = nlo;
    hi = nhi;
  }
  return cf;
}

ContinuedFraction expand_decimal(const DecimalLiteral& d, int n_terms) {
  ContinuedFraction cf;
  mpq_class lo = d.value - d.ulp, hi = d.value + d.ulp;
  auto qfloor = [](const mpq_class& x) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return f;
  };
  while (cf.size() < static_cast<size_t>(n_terms)) {
    mpz_class fl = qfloor(lo), fh = qfloor(hi);
    if (fl != fh) {
      cf.truncated = true;
      break;
    }
    cf.push(fl);
    mpq_class l2 = lo - fl, h2 = hi - fl;
    if (l2 == 0) {  // cannot invert; uncertainty swallowed the tail
      cf.truncated = true;
      break;
    }
    mpq_class nlo = 1 / h2, nhi = 1 / l2;
    lo = nlo;
    hi = nhi;
  }
  cf.exact = true;  // emitted terms are certain even when truncated
  return cf;
}

}  // namespace

ContinuedFraction cf_expand(const RealInput& x, int n_terms) {
  if (n_terms < 1) throw std::invalid_argument("cf_expand: n_terms >= 1 required");
  const auto& rep = x.rep();
  if (const auto* r = std::get_if<Rational>(&rep)) return expand_rational(r->value, n_terms);
  if (const auto* s = std::get_if<Surd>(&rep)) return expand_surd(*s, n_terms);
  if (const auto* a = std::get_if<AlgebraicReal>(&rep)) return expand_algebraic(*a, n_terms);
  return expand_decimal(std::get<DecimalLiteral>(rep), n_terms);
}

std::vector<std::pair<mpz_class, mpz_class>> convergents(const ContinuedFraction& cf) {
  if (cf.size() < 1) throw std::invalid_argument("convergents: empty continued fraction");
  std::vector<std::pair<mpz_class, mpz_class>> out;
  out.reserve(cf.size());
  for (size_t i = 0; i < cf.size(); ++i) out.emplace_back(cf.p[i], cf.q[i]);
  return out;
}

namespace {

double ln_mpz(const mpz_class& z) {
  Real r(z, 128);
  return Real::log(r).to_double();
}

}  // namespace

MuEstimate mu_estimate(const ContinuedFraction& cf, int tail_start) {
  if (tail_start < 0) tail_start = 0;
  if (cf.size() < static_cast<size_t>(tail_start) + 2)
    throw std::invalid_argument("mu_estimate: too few convergents for the tail window");
  MuEstimate est;
  est.tail_start = tail_start;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int npts = 0;
  double alt = 0;
  double first_lnq = 0;
  for (size_t n = tail_start; n + 1 < cf.size(); ++n) {
    if (cf.q[n] < 2) continue;  // ln q_n must be positive
    double x = ln_mpz(cf.q[n]);
    double y = ln_mpz(cf.q[n + 1]);
    if (npts == 0) first_lnq = x;
    double r = 1.0 + y / x;
    est.ratios.push_back(r);
    if (est.ratios.size() == 1) {
      est.ratio_min = est.ratio_max = r;
    } else {
      est.ratio_min = std::min(est.ratio_min, r);
      est.ratio_max = std::max(est.ratio_max, r);
    }
    double a_ratio = cf.a[n + 1] >= 2 ? ln_mpz(cf.a[n + 1]) / x : 0.0;
    alt = std::max(alt, a_ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++npts;
  }
  if (npts == 0) throw std::invalid_argument("mu_estimate: no usable tail indices (q_n < 2)");
  est.alt_form = 2.0 + alt;
  if (npts == 1) {
    est.mu_hat = est.ratio_max;
  } else {
    double denom = npts * sxx - sx * sx;
    double slope = denom != 0 ? (npts * sxy - sx * sy) / denom : (sy / sx);
    est.mu_hat = 1.0 + slope;
  }
  est.forms_agree = std::abs(est.ratio_max - est.alt_form) <= 10.0 * std::log(2.0) / first_lnq;
  return est;
}

namespace {

constexpr size_t kDigitCap = 1000000;  // decimal digits allowed in q_n

mpz_class floor_pow(const mpz_class& base, double expo) {
  // floor(base^expo) for base >= 1, expo >= 0
  if (expo <= 0.0 || base <= 1) return 1;
  double r = std::round(expo);
  if (std::abs(expo - r) < 1e-12) {
    mpz_class out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(r));
    return out;
  }
  double bits_needed = expo * mpz_sizeinbase(base.get_mpz_t(), 2) + 64;
  Prec prec = static_cast<Prec>(bits_needed);
  for (int tries = 0; tries < 6; ++tries) {
    Interval b = Interval::of_mpz(base, prec);
    Interval v = b.pow(Real(expo, prec));
    mpz_class fl;
    if (v.floor_certain(fl)) return fl;
    prec *= 2;
  }
  throw std::runtime_error("floor_pow: could not certify floor");
}

ContinuedFraction construct_impl(double mu_target, int depth, bool liouville) {
  if (!liouville && mu_target < 2.0)
    throw std::invalid_argument("construct_alpha_with_mu: target must be >= 2");
  if (depth < 3) throw std::invalid_argument("construct_alpha_with_mu: depth >= 3");
  ContinuedFraction cf;
  cf.push(1);
  cf.push(1);
  while (cf.size() < static_cast<size_t>(depth) + 1) {
    const mpz_class& qn = cf.q.back();
    if (mpz_sizeinbase(qn.get_mpz_t(), 10) > kDigitCap)
      throw std::runtime_error("construct_alpha_with_mu: digit cap exceeded; lower the depth");
    double expo = liouville ? static_cast<double>(cf.size()) : mu_target - 2.0;
    mpz_class a = floor_pow(qn, expo);
    if (a < 1) a = 1;
    cf.push(a);
  }
  cf.exact = true;
  return cf;
}

}  // namespace

ContinuedFraction construct_alpha_with_mu(double mu_target, int depth) {
  return construct_impl(mu_target, depth, false);
}

ContinuedFraction construct_liouville(int depth) { return construct_impl(0, depth, true); }

namespace {

struct ScanHit {
  bool valid = false;
  Interval quality;
  Interval dist;
  long q = 0;
  std::vector<mpz_class> p;
  bool exact_zero = false;
};

Interval mul_long(const Interval& x, long q, Prec prec) {
  Real lo(prec), hi(prec);
  mpfr_mul_si(lo.get(), x.lo().get(), q, MPFR_RNDD);
  mpfr_mul_si(hi.get(), x.hi().get(), q, MPFR_RNDU);
  return Interval(lo, hi);
}

}  // namespace

BadApproxCertificate badapprox_scan(const std::vector<RealSource>& alpha, long Q, int workers,
                                    const BadApproxRow& row_sink) {
  if (alpha.empty()) throw std::invalid_argument("badapprox_scan: empty direction");
  if (Q < 1) throw std::invalid_argument("badapprox_scan: Q >= 1 required");
  const int dim = static_cast<int>(alpha.size());
  const Prec base_prec = 64 + 2 * static_cast<Prec>(std::ceil(std::log2((double)Q + 1))) + 32;

  // exact-hit detection needs the rational components
  std::vector<std::optional<mpq_class>> rats(alpha.size());
  for (size_t i = 0; i < alpha.size(); ++i) rats[i] = alpha[i].as_rational();

  const int W = std::max(1, workers);
  const long chunk = (Q + W - 1) / W;

  struct ChunkResult {
    ScanHit best;
    std::vector<std::tuple<long, Interval, Interval>> rows;
    std::optional<long> first_exact;
  };
  std::vector<ChunkResult> results(W);

  auto run_chunk = [&](int widx) {
    long q0 = 1 + widx * chunk;
    long q1 = std::min(Q, q0 + chunk - 1);
    if (q0 > Q) return;
    ChunkResult& res = results[widx];
    Prec prec = base_prec;
    std::vector<Interval> av;
    av.reserve(alpha.size());
    for (const auto& a : alpha) av.push_back(a.eval(prec));
    Real inv_dim(1.0 / dim, 64);

    for (long q = q0; q <= q1; ++q) {
      int refinements = 0;
      while (true) {
        Interval dist(Real(0.0, prec), Real(0.0, prec));
        std::vector<mpz_class> nearest(alpha.size());
        bool first = true;
        for (size_t i = 0; i < alpha.size(); ++i) {
          Interval qa = mul_long(av[i], q, prec);
          Real m = qa.mid();
          mpfr_t t;
          mpfr_init2(t, m.prec());
          mpfr_round(t, m.get());
          mpfr_get_z(nearest[i].get_mpz_t(), t, MPFR_RNDN);
          mpfr_clear(t);
          Interval di = (qa - Interval::of_mpz(nearest[i], prec)).abs();
          if (first) {
            dist = di;
            first = false;
          } else {
            // max of intervals: [max lo, max hi]
            Real lo = dist.lo() >= di.lo() ? dist.lo() : di.lo();
            Real hi = dist.hi() >= di.hi() ? dist.hi() : di.hi();
            dist = Interval(lo, hi);
          }
        }
        if (dist.contains_zero()) {
          bool all_rat = true;
          bool exact0 = true;
          for (size_t i = 0; i < alpha.size(); ++i) {
            if (!rats[i]) {
              all_rat = false;
              break;
            }
            mpq_class v = *rats[i] * q;
            v.canonicalize();
            if (v.get_den() != 1) exact0 = false;
          }
          if (all_rat && exact0) {
            Interval z(Real(0.0, prec), Real(0.0, prec));
            if (row_sink) res.rows.emplace_back(q, z, z);
            if (!res.first_exact) {
              res.first_exact = q;
              res.best.valid = true;
              res.best.q = q;
              res.best.quality = z;
              res.best.dist = z;
              res.best.p = nearest;
              res.best.exact_zero = true;
            }
            break;
          }
          if (refinements >= 4)
            throw std::runtime_error("badapprox_scan: cannot separate q*alpha from the lattice");
          prec *= 2;
          ++refinements;
          av.clear();
          for (const auto& a : alpha) av.push_back(a.eval(prec));
          continue;
        }
        Interval quality = dim == 1 ? mul_long(dist, q, prec)
                                    : dist * Interval::of_mpz(q, prec).pow(inv_dim);
        if (quality.rel_width() > 0.01 && refinements < 4) {
          prec *= 2;
          ++refinements;
          av.clear();
          for (const auto& a : alpha) av.push_back(a.eval(prec));
          continue;
        }
        if (row_sink) res.rows.emplace_back(q, dist, quality);
        if (res.best.exact_zero) break;
        if (!res.best.valid || quality.mid() < res.best.quality.mid()) {
          res.best.valid = true;
          res.best.q = q;
          res.best.quality = quality;
          res.best.dist = dist;
          res.best.p = nearest;
        }
        break;
      }
    }
  };

  if (W == 1) {
    run_chunk(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < W; ++w) pool.emplace_back(run_chunk, w);
    for (auto& t : pool) t.join();
  }

  // deterministic merge in chunk order; an exact hit wins over everything
  BadApproxCertificate cert;
  cert.dim = dim;
  cert.bound = Q;
  ScanHit best;
  std::optional<long> first_exact;
  for (int w = 0; w < W; ++w) {
    const auto& res = results[w];
    if (row_sink)
      for (const auto& [q, d, qu] : res.rows) row_sink(q, d, qu);
    if (res.first_exact && !first_exact) {
      first_exact = res.first_exact;
      best = res.best;
    }
    if (!first_exact && res.best.valid) {
      if (!best.valid || res.best.quality.mid() < best.quality.mid()) best = res.best;
    }
  }
  if (!best.valid) throw std::logic_error("badapprox_scan: empty scan");
  cert.exact_hit = best.exact_zero;
  cert.argmin_q = best.q;
  cert.witness_p = best.p;
  cert.min_quality = best.exact_zero ? 0.0 : best.quality.mid().to_double();
  cert.min_quality_lo = best.exact_zero ? 0.0 : best.quality.lo().to_double();
  cert.min_quality_hi = best.exact_zero ? 0.0 : best.quality.hi().to_double();
  return cert;
}

}  // namespace clab
