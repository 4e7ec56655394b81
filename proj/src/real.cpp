#include "clab/real.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

namespace clab {

std::string Real::str(int digits) const {
  char fmt[32];
  std::snprintf(fmt, sizeof fmt, "%%.%dRg", digits);
  char* out = nullptr;
  mpfr_asprintf(&out, fmt, v_);
  std::string s(out);
  mpfr_free_str(out);
  return s;
}

mpq_class Real::to_mpq_exact() const {
  if (mpfr_zero_p(v_)) return 0;
  if (!mpfr_number_p(v_)) throw std::domain_error("to_mpq_exact: non-finite value");
  mpz_class m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
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

Interval Interval::of_mpz(const mpz_class& z, Prec prec) {
  Real lo(prec), hi(prec);
  mpfr_set_z(lo.get(), z.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi.get(), z.get_mpz_t(), MPFR_RNDU);
  return Interval(lo, hi);
}

Interval Interval::of_mpq(const mpq_class& q, Prec prec) {
  Real lo(prec), hi(prec);
  mpfr_set_q(lo.get(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi.get(), q.get_mpq_t(), MPFR_RNDU);
  return Interval(lo, hi);
}

Interval Interval::sqrt_of_mpz(const mpz_class& z, Prec prec) {
  if (z < 0) throw std::domain_error("sqrt of negative integer");
  Real lo(prec), hi(prec);
  mpfr_t t;
  mpfr_init2(t, prec + 8);
  mpfr_set_z(t, z.get_mpz_t(), MPFR_RNDD);
  mpfr_sqrt(lo.get(), t, MPFR_RNDD);
  mpfr_set_z(t, z.get_mpz_t(), MPFR_RNDU);
  mpfr_sqrt(hi.get(), t, MPFR_RNDU);
  mpfr_clear(t);
  return Interval(lo, hi);
}

Interval Interval::pi(Prec prec) {
  Real lo(prec), hi(prec);
  mpfr_const_pi(lo.get(), MPFR_RNDD);
  mpfr_const_pi(hi.get(), MPFR_RNDU);
  return Interval(lo, hi);
}

Real Interval::mid() const {
  Real m(prec());
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m;
}

Real Interval::width() const {
  Real w(prec());
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return w;
}

double Interval::rel_width() const {
  if (contains_zero()) {
    return width().is_zero() ? 0.0 : std::numeric_limits<double>::infinity();
  }
  Real w = width();
  Real m = Real::abs(mid());
  return (w / m).to_double();
}

bool Interval::floor_certain(mpz_class& out) const {
  mpz_class fl, fh;
  mpfr_t t;
  mpfr_init2(t, std::max<Prec>(prec(), 64));
  mpfr_floor(t, lo_.get());
  mpfr_get_z(fl.get_mpz_t(), t, MPFR_RNDN);
  mpfr_floor(t, hi_.get());
  mpfr_get_z(fh.get_mpz_t(), t, MPFR_RNDN);
  mpfr_clear(t);
  if (fl == fh) {
    out = fl;
    return true;
  }
  return false;
}

Interval operator+(const Interval& a, const Interval& b) {
  Prec p = std::max(a.prec(), b.prec());
  Real lo(p), hi(p);
  mpfr_add(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_add(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  return Interval(lo, hi);
}

Interval operator-(const Interval& a, const Interval& b) {
  Prec p = std::max(a.prec(), b.prec());
  Real lo(p), hi(p);
  mpfr_sub(lo.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
  mpfr_sub(hi.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
  return Interval(lo, hi);
}

Interval operator*(const Interval& a, const Interval& b) {
  Prec p = std::max(a.prec(), b.prec());
  Real lo(p), hi(p);
  mpfr_t t;
  mpfr_init2(t, p);
  bool first = true;
  const mpfr_srcptr as[2] = {a.lo_.get(), a.hi_.get()};
  const mpfr_srcptr bs[2] = {b.lo_.get(), b.hi_.get()};
  for (auto x : as) {
    for (auto y : bs) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t, lo.get()) < 0) mpfr_set(lo.get(), t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t, hi.get()) > 0) mpfr_set(hi.get(), t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  return Interval(lo, hi);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw std::domain_error("interval division by interval containing 0");
  Prec p = std::max(a.prec(), b.prec());
  Real lo(p), hi(p);
  mpfr_t t;
  mpfr_init2(t, p);
  bool first = true;
  const mpfr_srcptr as[2] = {a.lo_.get(), a.hi_.get()};
  const mpfr_srcptr bs[2] = {b.lo_.get(), b.hi_.get()};
  for (auto x : as) {
    for (auto y : bs) {
      mpfr_div(t, x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t, lo.get()) < 0) mpfr_set(lo.get(), t, MPFR_RNDD);
      mpfr_div(t, x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t, hi.get()) > 0) mpfr_set(hi.get(), t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  return Interval(lo, hi);
}

Interval Interval::square() const {
  Prec p = prec();
  Real lo(p), hi(p);
  if (contains_zero()) {
    mpfr_set_zero(lo.get(), 1);
    mpfr_t t1, t2;
    mpfr_init2(t1, p);
    mpfr_init2(t2, p);
    mpfr_sqr(t1, lo_.get(), MPFR_RNDU);
    mpfr_sqr(t2, hi_.get(), MPFR_RNDU);
    mpfr_max(hi.get(), t1, t2, MPFR_RNDU);
    mpfr_clear(t1);
    mpfr_clear(t2);
  } else if (lo_.sign() > 0) {
    mpfr_sqr(lo.get(), lo_.get(), MPFR_RNDD);
    mpfr_sqr(hi.get(), hi_.get(), MPFR_RNDU);
  } else {
    mpfr_sqr(lo.get(), hi_.get(), MPFR_RNDD);
    mpfr_sqr(hi.get(), lo_.get(), MPFR_RNDU);
  }
  return Interval(lo, hi);
}

Interval Interval::sqrt() const {
  Prec p = prec();
  Real lo(p), hi(p);
  if (hi_.sign() < 0) throw std::domain_error("interval sqrt of negative");
  if (lo_.sign() < 0) {
    mpfr_set_zero(lo.get(), 1);  // exact-zero lower ends up here via rounding noise
  } else {
    mpfr_sqrt(lo.get(), lo_.get(), MPFR_RNDD);
  }
  mpfr_sqrt(hi.get(), hi_.get(), MPFR_RNDU);
  return Interval(lo, hi);
}

Interval Interval::log() const {
  if (lo_.sign() <= 0) throw std::domain_error("interval log of nonpositive");
  Prec p = prec();
  Real lo(p), hi(p);
  mpfr_log(lo.get(), lo_.get(), MPFR_RNDD);
  mpfr_log(hi.get(), hi_.get(), MPFR_RNDU);
  return Interval(lo, hi);
}

Interval Interval::exp() const {
  Prec p = prec();
  Real lo(p), hi(p);
  mpfr_exp(lo.get(), lo_.get(), MPFR_RNDD);
  mpfr_exp(hi.get(), hi_.get(), MPFR_RNDU);
  return Interval(lo, hi);
}

Interval Interval::abs() const {
  Prec p = prec();
  if (lo_.sign() >= 0) return *this;
  if (hi_.sign() <= 0) return -*this;
  Real lo(p), hi(p);
  mpfr_set_zero(lo.get(), 1);
  mpfr_t t1, t2;
  mpfr_init2(t1, p);
  mpfr_init2(t2, p);
  mpfr_neg(t1, lo_.get(), MPFR_RNDU);
  mpfr_set(t2, hi_.get(), MPFR_RNDU);
  mpfr_max(hi.get(), t1, t2, MPFR_RNDU);
  mpfr_clear(t1);
  mpfr_clear(t2);
  return Interval(lo, hi);
}

Interval Interval::pow(const Real& e) const {
  if (lo_.sign() <= 0) throw std::domain_error("interval pow needs positive base");
  Prec p = std::max(prec(), e.prec());
  Real lo(p), hi(p);
  if (e.sign() >= 0) {
    mpfr_pow(lo.get(), lo_.get(), e.get(), MPFR_RNDD);
    mpfr_pow(hi.get(), hi_.get(), e.get(), MPFR_RNDU);
  } else {
    mpfr_pow(lo.get(), hi_.get(), e.get(), MPFR_RNDD);
    mpfr_pow(hi.get(), lo_.get(), e.get(), MPFR_RNDU);
  }
  // mpfr_pow is correctly rounded, so directed endpoints already enclose.
  return Interval(lo, hi);
}

Interval Interval::scaled_mpq(const mpq_class& c, Prec prec) const {
  return *this * Interval::of_mpq(c, prec);
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace clab
