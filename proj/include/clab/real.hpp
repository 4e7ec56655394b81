#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace clab {

using Prec = mpfr_prec_t;

// Arbitrary-precision real with value semantics. Arithmetic rounds to
// nearest at the precision of the destination (max of the operands unless
// stated otherwise). Directed-rounding work goes through Interval below.
class Real {
 public:
  explicit Real(Prec prec = 64) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Real(double x, Prec prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
  Real(const mpz_class& z, Prec prec, mpfr_rnd_t rnd = MPFR_RNDN) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, z.get_mpz_t(), rnd);
  }
  Real(const mpq_class& q, Prec prec, mpfr_rnd_t rnd = MPFR_RNDN) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, q.get_mpq_t(), rnd);
  }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  Prec prec() const { return mpfr_get_prec(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_); }
  // Exact rational value (mpfr values are dyadic).
  mpq_class to_mpq_exact() const;

  // Decimal rendering, round-to-nearest, fixed significant digits.
  std::string str(int digits = 17) const;

  friend Real operator+(const Real& a, const Real& b) { return binop(a, b, mpfr_add); }
  friend Real operator-(const Real& a, const Real& b) { return binop(a, b, mpfr_sub); }
  friend Real operator*(const Real& a, const Real& b) { return binop(a, b, mpfr_mul); }
  friend Real operator/(const Real& a, const Real& b) { return binop(a, b, mpfr_div); }
  Real operator-() const {
    Real r(prec());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_); }

  static Real sqrt(const Real& a) {
    Real r(a.prec());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  static Real log(const Real& a) {
    Real r(a.prec());
    mpfr_log(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  static Real abs(const Real& a) {
    Real r(a.prec());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

 private:
  template <typename F>
  static Real binop(const Real& a, const Real& b, F f) {
    Real r(std::max(a.prec(), b.prec()));
    f(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  mpfr_t v_;
};

// Closed interval [lo, hi] with outward-rounded endpoints. All operations
// produce enclosures of the exact result.
class Interval {
 public:
  Interval() : lo_(64), hi_(64) {}
  Interval(const Real& lo, const Real& hi) : lo_(lo), hi_(hi) {
    if (mpfr_cmp(lo_.get(), hi_.get()) > 0) throw std::logic_error("interval: lo > hi");
  }
  static Interval point(const Real& x) { return Interval(x, x); }
  static Interval of_double(double x, Prec prec) { return point(Real(x, prec)); }
  static Interval of_mpz(const mpz_class& z, Prec prec);
  static Interval of_mpq(const mpq_class& q, Prec prec);
  static Interval sqrt_of_mpz(const mpz_class& z, Prec prec);  // requires z >= 0
  static Interval pi(Prec prec);

  const Real& lo() const { return lo_; }
  const Real& hi() const { return hi_; }
  Prec prec() const { return std::max(lo_.prec(), hi_.prec()); }

  Real mid() const;
  Real width() const;
  // width / |mid|; infinity when the interval straddles zero.
  double rel_width() const;
  double to_double() const { return mid().to_double(); }

  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  int sign_certain() const {  // +1, -1, or 0 when undecided
    if (lo_.sign() > 0) return 1;
    if (hi_.sign() < 0) return -1;
    return 0;
  }
  bool certainly_less(const Interval& o) const { return hi_ < o.lo_; }
  bool certainly_greater(const Interval& o) const { return lo_ > o.hi_; }
  bool overlaps(const Interval& o) const { return !(certainly_less(o) || o.certainly_less(*this)); }

  // True when floor is the same at both endpoints; sets out.
  bool floor_certain(mpz_class& out) const;

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);  // b must not contain 0
  Interval operator-() const { return Interval(-hi_, -lo_); }

  Interval square() const;
  Interval sqrt() const;  // requires lo >= 0 (clamps tiny negative noise to 0)
  Interval log() const;   // requires lo > 0
  Interval exp() const;
  Interval abs() const;
  // x^e for constant real exponent, requires lo > 0.
  Interval pow(const Real& e) const;

  Interval scaled_mpq(const mpq_class& c, Prec prec) const;  // c * this, exact c

 private:
  Real lo_, hi_;
};

// Deterministic 64-bit FNV-1a, used for config hashes.
std::uint64_t fnv1a64(const std::string& s);

}  // namespace clab
