#include "clab/realinput.hpp"

#include <sstream>
#include <stdexcept>

namespace clab {

namespace {

bool is_perfect_square(const mpz_class& d) {
  return mpz_perfect_square_p(d.get_mpz_t()) != 0;
}

// Bisect (lo, hi) with exactly one root of p until width <= 2^-prec; exact
// rational endpoints throughout.
void refine_root(const ZPoly& p, mpq_class& lo, mpq_class& hi, Prec prec) {
  mpq_class width = hi - lo;
  mpq_class target(1);
  target >>= static_cast<unsigned long>(prec);
  int slo = poly::sign_at(p, lo);
  while (width > target) {
    mpq_class mid = (lo + hi) / 2;
    int sm = poly::sign_at(p, mid);
    if (sm == 0) {
      // rational root: collapse to the point
      lo = mid;
      hi = mid;
      return;
    }
    if (sm == slo) {
      lo = mid;
    } else {
      hi = mid;
    }
    width = hi - lo;
  }
}

}  // namespace

RealInput RealInput::rational(mpq_class q) {
  q.canonicalize();
  return RealInput(Rational{std::move(q)});
}

RealInput RealInput::surd(mpz_class a, mpz_class b, mpz_class c, mpz_class d) {
  if (c == 0) throw std::invalid_argument("surd: zero denominator");
  if (d <= 0 || is_perfect_square(d))
    throw std::invalid_argument("surd: d must be positive and not a square");
  return RealInput(Surd{std::move(a), std::move(b), std::move(c), std::move(d)});
}

RealInput RealInput::algebraic(ZPoly poly, mpq_class lo, mpq_class hi) {
  poly::normalize(poly);
  if (poly::degree(poly) < 1) throw std::invalid_argument("algebraic: constant polynomial");
  if (poly.back() != 1) throw std::invalid_argument("algebraic: polynomial must be monic");
  if (!(lo < hi)) throw std::invalid_argument("algebraic: empty isolating interval");
  int slo = poly::sign_at(poly, lo);
  int shi = poly::sign_at(poly, hi);
  if (slo == 0 || shi == 0 || slo == shi)
    throw std::invalid_argument("algebraic: no sign change over the isolating interval");
  if (poly::sturm(poly).count_roots(lo, hi) != 1)
    throw std::invalid_argument("algebraic: isolating interval does not contain exactly one root");
  return RealInput(AlgebraicReal{std::move(poly), std::move(lo), std::move(hi)});
}

RealInput RealInput::decimal(const std::string& text) {
  std::string t = text;
  bool neg = false;
  size_t i = 0;
  if (i < t.size() && (t[i] == '+' || t[i] == '-')) {
    neg = t[i] == '-';
    ++i;
  }
  std::string ip, fp;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ip += t[i++];
  if (i < t.size() && t[i] == '.') {
    ++i;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) fp += t[i++];
  }
  if (i != t.size() || (ip.empty() && fp.empty()))
    throw std::invalid_argument("decimal: bad literal '" + text + "'");
  int digits = static_cast<int>(ip.size() + fp.size());
  if (digits < 1) throw std::invalid_argument("decimal: needs at least one digit");
  mpz_class num(ip.empty() ? std::string("0") : ip);
  for (char c : fp) num = num * 10 + (c - '0');
  mpz_class den = 1;
  for (size_t k = 0; k < fp.size(); ++k) den *= 10;
  mpq_class v(num, den);
  v.canonicalize();
  if (neg) v = -v;
  mpq_class ulp(1, den);
  ulp.canonicalize();
  return RealInput(DecimalLiteral{v, ulp, digits, text});
}

RealInput RealInput::phi() { return surd(1, 1, 2, 5); }

RealInput RealInput::sqrt_of(unsigned long n) {
  mpz_class d(static_cast<long>(n));
  if (is_perfect_square(d)) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), d.get_mpz_t());
    return rational(mpq_class(r));
  }
  return surd(0, 1, 1, d);
}

RealInput RealInput::parse(const std::string& spec) {
  if (spec == "phi") return phi();
  auto colon = spec.find(':');
  if (colon == std::string::npos) {
    // bare decimal literal
    return decimal(spec);
  }
  std::string kind = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  if (kind == "sqrt") {
    return sqrt_of(std::stoul(rest));
  }
  if (kind == "rat") {
    auto slash = rest.find('/');
    if (slash == std::string::npos) return rational(mpq_class(mpz_class(rest)));
    mpz_class p(rest.substr(0, slash)), q(rest.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("rat: zero denominator");
    mpq_class v(p, q);
    v.canonicalize();
    return rational(v);
  }
  if (kind == "dec") {
    return decimal(rest);
  }
  if (kind == "poly") {
    // poly:<c0,c1,...,1>@<lo,hi>  -- coefficients low to high, monic
    auto at = rest.find('@');
    if (at == std::string::npos) throw std::invalid_argument("poly: missing @<lo,hi>");
    std::string coeffs = rest.substr(0, at), window = rest.substr(at + 1);
    ZPoly p;
    std::istringstream cs(coeffs);
    std::string tok;
    while (std::getline(cs, tok, ',')) p.emplace_back(tok);
    auto comma = window.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("poly: window needs lo,hi");
    auto parse_q = [](const std::string& s) {
      if (s.find('.') != std::string::npos) {
        RealInput d = RealInput::decimal(s);
        return std::get<DecimalLiteral>(d.rep()).value;
      }
      auto slash = s.find('/');
      if (slash == std::string::npos) return mpq_class(mpz_class(s));
      mpq_class v(mpz_class(s.substr(0, slash)), mpz_class(s.substr(slash + 1)));
      v.canonicalize();
      return v;
    };
    return algebraic(std::move(p), parse_q(window.substr(0, comma)),
                     parse_q(window.substr(comma + 1)));
  }
  throw std::invalid_argument("unknown real spec '" + spec + "'");
}

std::optional<mpq_class> RealInput::as_rational() const {
  if (const auto* r = std::get_if<Rational>(&rep_)) return r->value;
  if (const auto* s = std::get_if<Surd>(&rep_)) {
    if (s->b == 0) {
      mpq_class v(s->a, s->c);
      v.canonicalize();
      return v;
    }
  }
  return std::nullopt;
}

Interval RealInput::eval(Prec prec) const {
  if (const auto* r = std::get_if<Rational>(&rep_)) {
    return Interval::of_mpq(r->value, prec);
  }
  if (const auto* s = std::get_if<Surd>(&rep_)) {
    Prec wp = prec + 16;
    Interval root = Interval::sqrt_of_mpz(s->d, wp);
    Interval num = Interval::of_mpz(s->a, wp) + Interval::of_mpz(s->b, wp) * root;
    return num / Interval::of_mpz(s->c, wp);
  }
  if (const auto* a = std::get_if<AlgebraicReal>(&rep_)) {
    mpq_class lo = a->lo, hi = a->hi;
    refine_root(a->poly, lo, hi, prec);
    Real l(lo, prec, MPFR_RNDD), h(hi, prec, MPFR_RNDU);
    return Interval(l, h);
  }
  const auto& d = std::get<DecimalLiteral>(rep_);
  Prec wp = std::max<Prec>(prec, 8 + static_cast<Prec>(3.33 * d.exact_digits));
  mpq_class lo = d.value - d.ulp, hi = d.value + d.ulp;
  return Interval(Real(lo, wp, MPFR_RNDD), Real(hi, wp, MPFR_RNDU));
}

std::string RealInput::describe() const {
  std::ostringstream os;
  if (const auto* r = std::get_if<Rational>(&rep_)) {
    os << "rat:" << r->value.get_num().get_str() << "/" << r->value.get_den().get_str();
  } else if (const auto* s = std::get_if<Surd>(&rep_)) {
    os << "(" << s->a.get_str() << "+" << s->b.get_str() << "*sqrt(" << s->d.get_str() << "))/"
       << s->c.get_str();
  } else if (const auto* a = std::get_if<AlgebraicReal>(&rep_)) {
    os << "root of " << poly::poly_to_string(a->poly) << " in (" << a->lo.get_str() << ","
       << a->hi.get_str() << ")";
  } else {
    os << "dec:" << std::get<DecimalLiteral>(rep_).text;
  }
  return os.str();
}

Interval RealSource::eval(Prec prec) const {
  if (const auto* in = std::get_if<RealInput>(&rep_)) return in->eval(prec);
  if (const auto* sa = std::get_if<ScaledAlgebraic>(&rep_)) {
    RealInput base = RealInput::algebraic(sa->base.poly, sa->base.lo, sa->base.hi);
    return base.eval(prec).scaled_mpq(sa->scale, prec);
  }
  const auto& cp = std::get<ConvergentPair>(rep_);
  mpq_class lo(cp.p_lo, cp.q_lo), hi(cp.p_hi, cp.q_hi);
  lo.canonicalize();
  hi.canonicalize();
  if (lo > hi) std::swap(lo, hi);
  return Interval(Real(lo, prec, MPFR_RNDD), Real(hi, prec, MPFR_RNDU));
}

bool RealSource::is_rational() const {
  if (const auto* in = std::get_if<RealInput>(&rep_)) return in->is_rational();
  return false;
}

std::optional<mpq_class> RealSource::as_rational() const {
  if (const auto* in = std::get_if<RealInput>(&rep_)) return in->as_rational();
  return std::nullopt;
}

std::string RealSource::describe() const {
  if (const auto* in = std::get_if<RealInput>(&rep_)) return in->describe();
  if (const auto* sa = std::get_if<ScaledAlgebraic>(&rep_)) {
    std::ostringstream os;
    os << "(" << sa->scale.get_num().get_str() << "/" << sa->scale.get_den().get_str()
       << ") * root of " << poly::poly_to_string(sa->base.poly);
    return os.str();
  }
  const auto& cp = std::get<ConvergentPair>(rep_);
  return "between " + cp.p_lo.get_str() + "/" + cp.q_lo.get_str() + " and " + cp.p_hi.get_str() +
         "/" + cp.q_hi.get_str();
}

}  // namespace clab
