#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "clab/real.hpp"

namespace clab {

// Dense polynomials, coefficient of x^i at index i, no trailing zeros.
using ZPoly = std::vector<mpz_class>;
using QPoly = std::vector<mpq_class>;

namespace poly {

void normalize(ZPoly& p);
void normalize(QPoly& p);
int degree(const ZPoly& p);  // -1 for the zero polynomial
int degree(const QPoly& p);

ZPoly add(const ZPoly& a, const ZPoly& b);
ZPoly sub(const ZPoly& a, const ZPoly& b);
ZPoly mul(const ZPoly& a, const ZPoly& b);
ZPoly neg(ZPoly a);
ZPoly derivative(const ZPoly& p);

mpz_class content(const ZPoly& p);
ZPoly primitive_part(const ZPoly& p);

mpz_class eval(const ZPoly& p, const mpz_class& x);
mpq_class eval(const ZPoly& p, const mpq_class& x);
Interval eval(const ZPoly& p, const Interval& x);
int sign_at(const ZPoly& p, const mpq_class& x);

QPoly to_q(const ZPoly& p);
QPoly qmul(const QPoly& a, const QPoly& b);
QPoly qsub(const QPoly& a, const QPoly& b);
// a = q*b + r with deg r < deg b
void qdivmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r);
QPoly qgcd_monic(QPoly a, QPoly b);
mpq_class eval(const QPoly& p, const mpq_class& x);

// gcd over Z via the monic rational gcd, returned primitive.
ZPoly gcd(const ZPoly& a, const ZPoly& b);
bool is_squarefree(const ZPoly& p);
ZPoly squarefree_part(const ZPoly& p);

// p(x + a)
ZPoly taylor_shift(const ZPoly& p, const mpz_class& a);
// x^deg * p(1/x)
ZPoly reverse(const ZPoly& p);

// Sturm chain of a squarefree-or-not polynomial (chain of the squarefree part).
struct SturmChain {
  std::vector<QPoly> chain;
  int variations_at(const mpq_class& x) const;
  int variations_at_pos_inf() const;
  int variations_at_neg_inf() const;
  // number of distinct real roots in (lo, hi]
  int count_roots(const mpq_class& lo, const mpq_class& hi) const;
  int count_real_roots() const;
};
SturmChain sturm(const ZPoly& p);

// Resultant Res_x(a, b) via Sylvester matrix and fraction-free elimination.
mpz_class resultant(const ZPoly& a, const ZPoly& b);

// Monic integer polynomial from text like "x^3 - x - 1"; throws on bad input.
ZPoly parse_poly(const std::string& text);
std::string poly_to_string(const ZPoly& p);

}  // namespace poly
}  // namespace clab
