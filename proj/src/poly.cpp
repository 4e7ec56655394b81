#include "clab/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace clab::poly {

void normalize(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

void normalize(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const ZPoly& p) { return static_cast<int>(p.size()) - 1; }
int degree(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

ZPoly add(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  normalize(r);
  return r;
}

ZPoly sub(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  normalize(r);
  return r;
}

ZPoly mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  normalize(r);
  return r;
}

ZPoly neg(ZPoly a) {
  for (auto& c : a) c = -c;
  return a;
}

ZPoly derivative(const ZPoly& p) {
  if (p.size() <= 1) return {};
  ZPoly r(p.size() - 1);
  for (size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * static_cast<long>(i);
  normalize(r);
  return r;
}

mpz_class content(const ZPoly& p) {
  mpz_class g = 0;
  for (const auto& c : p) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

ZPoly primitive_part(const ZPoly& p) {
  mpz_class g = content(p);
  if (g == 0 || g == 1) return p;
  ZPoly r = p;
  for (auto& c : r) c /= g;
  return r;
}

mpz_class eval(const ZPoly& p, const mpz_class& x) {
  mpz_class acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

mpq_class eval(const ZPoly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Interval eval(const ZPoly& p, const Interval& x) {
  Prec pr = x.prec();
  Interval acc = Interval::of_mpz(0, pr);
  for (auto it = p.rbegin(); it != p.rend(); ++it)
    acc = acc * x + Interval::of_mpz(*it, pr);
  return acc;
}

int sign_at(const ZPoly& p, const mpq_class& x) {
  mpq_class v = eval(p, x);
  return sgn(v);
}

QPoly to_q(const ZPoly& p) {
  QPoly r(p.size());
  for (size_t i = 0; i < p.size(); ++i) r[i] = p[i];
  return r;
}

QPoly qmul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  normalize(r);
  return r;
}

QPoly qsub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  normalize(r);
  return r;
}

void qdivmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  r = a;
  q.assign(a.size(), 0);
  while (degree(r) >= degree(b)) {
    int k = degree(r) - degree(b);
    mpq_class c = r.back() / b.back();
    q[k] += c;
    for (size_t i = 0; i < b.size(); ++i) r[i + k] -= c * b[i];
    normalize(r);
    if (r.empty()) break;
  }
  normalize(q);
}

QPoly qgcd_monic(QPoly a, QPoly b) {
  normalize(a);
  normalize(b);
  while (!b.empty()) {
    QPoly q, r;
    qdivmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    mpq_class lc = a.back();
    for (auto& c : a) c /= lc;
  }
  return a;
}

mpq_class eval(const QPoly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

ZPoly gcd(const ZPoly& a, const ZPoly& b) {
  QPoly g = qgcd_monic(to_q(a), to_q(b));
  if (g.empty()) return {};
  // clear denominators, take primitive part
  mpz_class den = 1;
  for (const auto& c : g) {
    mpz_class d = c.get_den();
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
  }
  ZPoly r(g.size());
  for (size_t i = 0; i < g.size(); ++i) {
    mpq_class c = g[i] * den;
    r[i] = c.get_num();
  }
  return primitive_part(r);
}

bool is_squarefree(const ZPoly& p) {
  if (degree(p) <= 1) return true;
  return degree(gcd(p, derivative(p))) == 0;
}

ZPoly squarefree_part(const ZPoly& p) {
  if (degree(p) <= 1) return p;
  ZPoly g = gcd(p, derivative(p));
  if (degree(g) == 0) return p;
  QPoly q, r;
  qdivmod(to_q(p), to_q(g), q, r);
  if (!r.empty()) throw std::logic_error("squarefree_part: non-exact division");
  mpz_class den = 1;
  for (const auto& c : q) {
    mpz_class d = c.get_den();
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
  }
  ZPoly out(q.size());
  for (size_t i = 0; i < q.size(); ++i) out[i] = mpq_class(q[i] * den).get_num();
  return primitive_part(out);
}

ZPoly taylor_shift(const ZPoly& p, const mpz_class& a) {
  // repeated synthetic division by (x - a) gives the coefficients of p(x + a)
  ZPoly r = p;
  int n = degree(p);
  for (int i = 0; i <= n; ++i) {
    for (int j = n - 1; j >= i; --j) r[j] += a * r[j + 1];
  }
  normalize(r);
  return r;
}

ZPoly reverse(const ZPoly& p) {
  ZPoly r(p.rbegin(), p.rend());
  normalize(r);
  return r;
}

static int variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

int SturmChain::variations_at(const mpq_class& x) const {
  std::vector<int> s;
  s.reserve(chain.size());
  for (const auto& p : chain) s.push_back(sgn(eval(p, x)));
  return variations(s);
}

int SturmChain::variations_at_pos_inf() const {
  std::vector<int> s;
  for (const auto& p : chain) s.push_back(p.empty() ? 0 : sgn(p.back()));
  return variations(s);
}

int SturmChain::variations_at_neg_inf() const {
  std::vector<int> s;
  for (const auto& p : chain) {
    if (p.empty()) {
      s.push_back(0);
    } else {
      int base = sgn(p.back());
      s.push_back(degree(p) % 2 == 0 ? base : -base);
    }
  }
  return variations(s);
}

int SturmChain::count_roots(const mpq_class& lo, const mpq_class& hi) const {
  return variations_at(lo) - variations_at(hi);
}

int SturmChain::count_real_roots() const {
  return variations_at_neg_inf() - variations_at_pos_inf();
}

SturmChain sturm(const ZPoly& p) {
  SturmChain sc;
  ZPoly sf = squarefree_part(p);
  QPoly f = to_q(sf);
  QPoly g = to_q(derivative(sf));
  sc.chain.push_back(f);
  if (g.empty()) return sc;
  sc.chain.push_back(g);
  while (true) {
    QPoly q, r;
    qdivmod(sc.chain[sc.chain.size() - 2], sc.chain.back(), q, r);
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    sc.chain.push_back(r);
    if (degree(r) == 0) break;
  }
  return sc;
}

mpz_class resultant(const ZPoly& a, const ZPoly& b) {
  int m = degree(a), n = degree(b);
  if (m < 0 || n < 0) return 0;
  if (m == 0) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), a[0].get_mpz_t(), n);
    return r;
  }
  if (n == 0) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b[0].get_mpz_t(), m);
    return r;
  }
  // Sylvester matrix, size (m+n), Bareiss fraction-free elimination.
  int N = m + n;
  std::vector<std::vector<mpz_class>> s(N, std::vector<mpz_class>(N, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s[i][i + j] = a[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s[n + i][i + j] = b[n - j];

  mpz_class prev = 1;
  int sign = 1;
  for (int k = 0; k < N - 1; ++k) {
    if (s[k][k] == 0) {
      int piv = -1;
      for (int i = k + 1; i < N; ++i)
        if (s[i][k] != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return 0;
      std::swap(s[k], s[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < N; ++i) {
      for (int j = k + 1; j < N; ++j) {
        s[i][j] = (s[k][k] * s[i][j] - s[i][k] * s[k][j]) / prev;
      }
      s[i][k] = 0;
    }
    prev = s[k][k];
  }
  return sign > 0 ? s[N - 1][N - 1] : -s[N - 1][N - 1];
}

ZPoly parse_poly(const std::string& text) {
  // terms: [+-] [coef] [x [^ exp]]
  ZPoly p;
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  bool any = false;
  while (i < text.size()) {
    int sign = 1;
    if (text[i] == '+') {
      ++i;
    } else if (text[i] == '-') {
      sign = -1;
      ++i;
    } else if (any) {
      throw std::invalid_argument("polynomial parse error near '" + text.substr(i) + "'");
    }
    skip_ws();
    mpz_class coef = 1;
    bool have_coef = false;
    std::string digits;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) digits += text[i++];
    if (!digits.empty()) {
      coef = mpz_class(digits);
      have_coef = true;
    }
    skip_ws();
    long exp = 0;
    if (i < text.size() && (text[i] == 'x' || text[i] == 'X')) {
      ++i;
      exp = 1;
      skip_ws();
      if (i < text.size() && text[i] == '^') {
        ++i;
        skip_ws();
        std::string e;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) e += text[i++];
        if (e.empty()) throw std::invalid_argument("polynomial parse error: missing exponent");
        exp = std::stol(e);
      }
    } else if (!have_coef) {
      throw std::invalid_argument("polynomial parse error: empty term");
    }
    if (static_cast<size_t>(exp) + 1 > p.size()) p.resize(exp + 1, 0);
    p[exp] += sign * coef;
    skip_ws();
    any = true;
  }
  if (!any) throw std::invalid_argument("empty polynomial");
  normalize(p);
  return p;
}

std::string poly_to_string(const ZPoly& p) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(p); i >= 0; --i) {
    const mpz_class& c = p[i];
    if (c == 0) continue;
    mpz_class a = abs(c);
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (i == 0 || a != 1) os << a.get_str();
    if (i > 0) {
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

}  // namespace clab::poly
