#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "clab/poly.hpp"
#include "clab/real.hpp"

namespace clab {

// Exact rational number.
struct Rational {
  mpq_class value;
};

// (a + b*sqrt(d)) / c with d > 0 not a perfect square, c != 0.
struct Surd {
  mpz_class a, b, c, d;
};

// Unique real root of a monic integer polynomial inside (lo, hi).
// Construction validates: sign change across the interval and Sturm count 1.
struct AlgebraicReal {
  ZPoly poly;
  mpq_class lo, hi;
};

// Decimal literal with a declared number of exact fractional digits.
// Denotes the interval [value - ulp, value + ulp].
struct DecimalLiteral {
  mpq_class value;
  mpq_class ulp;
  int exact_digits = 0;
  std::string text;
};

class RealInput {
 public:
  using Rep = std::variant<Rational, Surd, AlgebraicReal, DecimalLiteral>;

  static RealInput rational(mpq_class q);
  static RealInput surd(mpz_class a, mpz_class b, mpz_class c, mpz_class d);
  static RealInput algebraic(ZPoly poly, mpq_class lo, mpq_class hi);
  static RealInput decimal(const std::string& text);
  static RealInput phi();    // (1 + sqrt 5)/2
  static RealInput sqrt_of(unsigned long n);

  // Shared spec grammar: phi | sqrt:N | rat:p/q | poly:<c0,c1,...>@<lo,hi> | dec:<digits>
  static RealInput parse(const std::string& spec);

  const Rep& rep() const { return rep_; }
  bool is_exact() const { return !std::holds_alternative<DecimalLiteral>(rep_); }
  bool is_rational() const { return std::holds_alternative<Rational>(rep_); }
  // Rational value when the representation is exactly rational.
  std::optional<mpq_class> as_rational() const;

  // Certified enclosure. For exact inputs the width shrinks with prec;
  // for decimals the declared uncertainty is a floor on the width.
  Interval eval(Prec prec) const;

  std::string describe() const;

 private:
  explicit RealInput(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

// A real usable as a flow-direction component: a RealInput, a value pinned
// between two consecutive convergents of a continued fraction, or a rational
// multiple of an algebraic integer (eigenvector coordinates).
struct ConvergentPair {
  mpz_class p_lo, q_lo;  // endpoint closer below
  mpz_class p_hi, q_hi;
};

struct ScaledAlgebraic {
  AlgebraicReal base;
  mpq_class scale;
};

class RealSource {
 public:
  RealSource(RealInput in) : rep_(std::move(in)) {}
  RealSource(ConvergentPair cp) : rep_(std::move(cp)) {}
  RealSource(ScaledAlgebraic sa) : rep_(std::move(sa)) {}
  Interval eval(Prec prec) const;
  bool is_rational() const;
  std::optional<mpq_class> as_rational() const;
  std::string describe() const;

 private:
  std::variant<RealInput, ConvergentPair, ScaledAlgebraic> rep_;
};

}  // namespace clab
