#include "clab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clab {

namespace {

bool colex_less(const IVec& a, const IVec& b) {
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

void canonical_sign(IVec& w) {
  for (const auto& c : w) {
    if (c != 0) {
      if (c < 0)
        for (auto& x : w) x = -x;
      return;
    }
  }
}

bool is_zero(const IVec& w) {
  for (const auto& c : w) {
    if (c != 0) return false;
  }
  return true;
}

}  // namespace

mpq_class QuadForm::bilinear_exact(const IVec&, const IVec&) const {
  throw std::logic_error("no exact path for this form");
}

RationalGram::RationalGram(QMat g, Prec prec) : g_(std::move(g)), prec_(prec) {
  size_t k = g_.size();
  for (auto& row : g_) {
    if (row.size() != k) throw std::invalid_argument("gram matrix must be square");
    for (auto& e : row) e.canonicalize();
  }
  for (size_t i = 0; i < k; ++i)
    for (size_t j = i + 1; j < k; ++j)
      if (g_[i][j] != g_[j][i]) throw std::invalid_argument("gram matrix must be symmetric");
  // leading principal minors positive (Sylvester): definiteness guard
  QMat m = g_;
  for (size_t c = 0; c < k; ++c) {
    if (m[c][c] <= 0) throw std::invalid_argument("gram matrix not positive definite");
    for (size_t i = c + 1; i < k; ++i) {
      mpq_class f = m[i][c] / m[c][c];
      for (size_t j = c; j < k; ++j) m[i][j] -= f * m[c][j];
    }
  }
}

Interval RationalGram::bilinear(const IVec& u, const IVec& v) const {
  return Interval::of_mpq(bilinear_exact(u, v), prec_);
}

mpq_class RationalGram::bilinear_exact(const IVec& u, const IVec& v) const {
  mpq_class acc = 0;
  size_t k = g_.size();
  for (size_t i = 0; i < k; ++i) {
    if (u[i] == 0) continue;
    mpq_class row = 0;
    for (size_t j = 0; j < k; ++j) {
      if (v[j] != 0) row += g_[i][j] * v[j];
    }
    acc += row * u[i];
  }
  return acc;
}

mpq_class RationalGram::det_exact() const {
  QMat m = g_;
  size_t k = m.size();
  mpq_class det = 1;
  for (size_t c = 0; c < k; ++c) {
    size_t piv = c;
    while (piv < k && m[piv][c] == 0) ++piv;
    if (piv == k) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t i = c + 1; i < k; ++i) {
      mpq_class f = m[i][c] / m[c][c];
      for (size_t j = c; j < k; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

Interval RationalGram::det() const { return Interval::of_mpq(det_exact(), prec_); }

std::unique_ptr<QuadForm> RationalGram::clone_at(Prec prec) const {
  return std::make_unique<RationalGram>(g_, prec);
}

RationalGram RationalGram::inverse() const {
  size_t k = g_.size();
  QMat m = g_;
  QMat inv(k, std::vector<mpq_class>(k, 0));
  for (size_t i = 0; i < k; ++i) inv[i][i] = 1;
  for (size_t c = 0; c < k; ++c) {
    size_t piv = c;
    while (piv < k && m[piv][c] == 0) ++piv;
    if (piv == k) throw std::invalid_argument("singular gram matrix");
    std::swap(m[piv], m[c]);
    std::swap(inv[piv], inv[c]);
    mpq_class d = m[c][c];
    for (size_t j = 0; j < k; ++j) {
      m[c][j] /= d;
      inv[c][j] /= d;
    }
    for (size_t i = 0; i < k; ++i) {
      if (i == c || m[i][c] == 0) continue;
      mpq_class f = m[i][c];
      for (size_t j = 0; j < k; ++j) {
        m[i][j] -= f * m[c][j];
        inv[i][j] -= f * inv[c][j];
      }
    }
  }
  return RationalGram(inv, prec_);
}

CollapsedGram::CollapsedGram(std::vector<RealSource> alpha, mpq_class coef, Prec prec)
    : alpha_(std::move(alpha)), coef_(std::move(coef)), prec_(prec) {
  coef_.canonicalize();
  dir_.reserve(alpha_.size() + 1);
  dir_.push_back(Interval::of_mpq(1, prec_));
  exact_ = true;
  dir_exact_.push_back(1);
  for (const auto& a : alpha_) {
    dir_.push_back(a.eval(prec_));
    auto r = a.as_rational();
    if (r) {
      dir_exact_.push_back(*r);
    } else {
      exact_ = false;
    }
  }
  Interval n2 = dir_[0].square();
  for (size_t i = 1; i < dir_.size(); ++i) n2 = n2 + dir_[i].square();
  dnorm2_ = n2;
  if (exact_) {
    dnorm2_exact_ = 0;
    for (const auto& c : dir_exact_) dnorm2_exact_ += c * c;
  }
}

Interval CollapsedGram::bilinear(const IVec& u, const IVec& v) const {
  if (exact_) return Interval::of_mpq(bilinear_exact(u, v), prec_);
  Prec p = prec_;
  mpz_class dot = 0;
  size_t k = dir_.size();
  Interval ud = Interval::of_mpz(0, p), vd = Interval::of_mpz(0, p);
  for (size_t i = 0; i < k; ++i) {
    dot += u[i] * v[i];
    if (u[i] != 0) ud = ud + dir_[i] * Interval::of_mpz(u[i], p);
    if (v[i] != 0) vd = vd + dir_[i] * Interval::of_mpz(v[i], p);
  }
  Interval c = Interval::of_mpq(coef_, p);
  return Interval::of_mpz(dot, p) + c * ud * vd / dnorm2_;
}

mpq_class CollapsedGram::bilinear_exact(const IVec& u, const IVec& v) const {
  if (!exact_) throw std::logic_error("collapsed form with irrational direction has no exact path");
  mpq_class dot = 0, ud = 0, vd = 0;
  size_t k = dir_exact_.size();
  for (size_t i = 0; i < k; ++i) {
    dot += mpq_class(u[i] * v[i]);
    ud += dir_exact_[i] * u[i];
    vd += dir_exact_[i] * v[i];
  }
  return dot + coef_ * ud * vd / dnorm2_exact_;
}

Interval CollapsedGram::det() const {
  // det(I + c u u^T) = 1 + c for unit u
  mpq_class d = 1 + coef_;
  return Interval::of_mpq(d, prec_);
}

std::unique_ptr<QuadForm> CollapsedGram::clone_at(Prec prec) const {
  return std::make_unique<CollapsedGram>(alpha_, coef_, prec);
}

namespace {

struct GramMid {
  std::vector<std::vector<Real>> g;
  void compute(const QuadForm& form, const std::vector<IVec>& basis) {
    size_t k = basis.size();
    g.assign(k, {});
    for (size_t i = 0; i < k; ++i) {
      g[i].clear();
      for (size_t j = 0; j < k; ++j) g[i].push_back(form.bilinear(basis[i], basis[j]).mid());
    }
  }
};

}  // namespace

void lll_reduce(const QuadForm& form, std::vector<IVec>& basis) {
  const size_t k = basis.size();
  if (k <= 1) return;
  const Prec p = form.prec();
  GramMid gm;
  gm.compute(form, basis);

  // Gram-Schmidt data over midpoints
  std::vector<std::vector<Real>> mu(k, std::vector<Real>(k, Real(p)));
  std::vector<Real> B(k, Real(p));
  auto update_gs = [&] {
    for (size_t i = 0; i < k; ++i) {
      Real b = gm.g[i][i];
      for (size_t j = 0; j < i; ++j) {
        Real m = gm.g[i][j];
        for (size_t l = 0; l < j; ++l) m = m - mu[j][l] * mu[i][l] * B[l];
        mu[i][j] = m / B[j];
        b = b - mu[i][j] * mu[i][j] * B[j];
      }
      B[i] = b;
    }
  };
  update_gs();

  const Real delta(0.99, p);
  const Real half(0.5, p);
  size_t i = 1;
  int guard = 0;
  while (i < k) {
    if (++guard > 10000) throw std::runtime_error("lll_reduce: did not terminate");
    // size-reduce b_i against b_j, j < i
    for (size_t j = i; j-- > 0;) {
      Real m = Real::abs(mu[i][j]);
      if (m > half) {
        mpz_class r;
        mpfr_t t;
        mpfr_init2(t, p);
        mpfr_round(t, mu[i][j].get());
        mpfr_get_z(r.get_mpz_t(), t, MPFR_RNDN);
        mpfr_clear(t);
        for (size_t l = 0; l < basis[i].size(); ++l) basis[i][l] -= r * basis[j][l];
        gm.compute(form, basis);
        update_gs();
      }
    }
    // Lovasz condition
    Real lhs = B[i];
    Real rhs = (delta - mu[i][i - 1] * mu[i][i - 1]) * B[i - 1];
    if (lhs < rhs) {
      std::swap(basis[i], basis[i - 1]);
      gm.compute(form, basis);
      update_gs();
      i = i > 1 ? i - 1 : 1;
    } else {
      ++i;
    }
  }
}

namespace {

// Fincke-Pohst over the LDL^T profile of the basis Gram (midpoints + slack).
struct Enumerator {
  const QuadForm& form;
  const std::vector<IVec>& basis;
  size_t k;
  std::vector<std::vector<Real>> L;  // unit lower triangular
  std::vector<Real> D;
  Real bound;
  std::vector<Candidate> out;
  std::vector<long> coords;
  long nodes = 0;

  Enumerator(const QuadForm& f, const std::vector<IVec>& b, const Real& C)
      : form(f), basis(b), k(b.size()), bound(C) {
    Prec p = form.prec();
    GramMid gm;
    gm.compute(form, basis);
    L.assign(k, std::vector<Real>(k, Real(p)));
    D.assign(k, Real(p));
    for (size_t i = 0; i < k; ++i) {
      for (size_t j = 0; j < i; ++j) {
        Real s = gm.g[i][j];
        for (size_t l = 0; l < j; ++l) s = s - L[i][l] * L[j][l] * D[l];
        L[i][j] = s / D[j];
      }
      Real s = gm.g[i][i];
      for (size_t l = 0; l < i; ++l) s = s - L[i][l] * L[i][l] * D[l];
      if (s.sign() <= 0) throw std::runtime_error("enumeration: form not positive at working precision");
      D[i] = s;
    }
    coords.assign(k, 0);
  }

  // descend levels from k-1 to 0; Q(x) = sum_j D_j (x_j + sum_{i>j} L_ij x_i)^2
  void run() {
    std::vector<Real> center(k, Real(form.prec()));
    descend(k - 1, Real(0.0, form.prec()), center);
  }

  void descend(size_t level, Real partial, std::vector<Real>& center) {
    if (++nodes > 20000000) throw std::runtime_error("enumeration node cap exceeded");
    Prec p = form.prec();
    // c = center offset at this level from already-fixed higher coordinates
    Real c(0.0, p);
    for (size_t i = level + 1; i < k; ++i) c = c + L[i][level] * Real((double)coords[i], p);
    Real budget = bound - partial;
    if (budget.sign() < 0) return;
    Real radius = Real::sqrt(budget / D[level]);
    Real lo = -c - radius, hi = -c + radius;
    mpfr_t t;
    mpfr_init2(t, p);
    mpfr_ceil(t, lo.get());
    long xlo = mpfr_get_si(t, MPFR_RNDN);
    mpfr_floor(t, hi.get());
    long xhi = mpfr_get_si(t, MPFR_RNDN);
    mpfr_clear(t);
    for (long x = xlo; x <= xhi; ++x) {
      coords[level] = x;
      Real term = Real((double)x, p) + c;
      Real np = partial + D[level] * term * term;
      if (level == 0) {
        emit();
      } else {
        descend(level - 1, np, center);
      }
    }
    coords[level] = 0;
  }

  void emit() {
    IVec w(basis[0].size(), 0);
    for (size_t i = 0; i < k; ++i) {
      if (coords[i] == 0) continue;
      for (size_t l = 0; l < w.size(); ++l) w[l] += coords[i] * basis[i][l];
    }
    if (is_zero(w)) return;
    canonical_sign(w);
    Candidate cand;
    cand.w = std::move(w);
    if (form.exact()) {
      cand.exact_value = form.eval_exact(cand.w);
      cand.value = Interval::of_mpq(*cand.exact_value, form.prec());
    } else {
      cand.value = form.eval(cand.w);
    }
    out.push_back(std::move(cand));
  }
};

}  // namespace

std::vector<Candidate> enumerate_below(const QuadForm& form, const std::vector<IVec>& basis,
                                       const Real& bound) {
  Prec p = form.prec();
  Real slacked = bound * (Real(1.0, p) + Real(std::ldexp(1.0, -20), p));
  Enumerator en(form, basis, slacked);
  en.run();
  // dedup +-w duplicates from symmetric enumeration, keep deterministic order
  std::sort(en.out.begin(), en.out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.w.size() != b.w.size()) return a.w.size() < b.w.size();
    for (size_t i = 0; i < a.w.size(); ++i)
      if (a.w[i] != b.w[i]) return a.w[i] < b.w[i];
    return false;
  });
  en.out.erase(std::unique(en.out.begin(), en.out.end(),
                           [](const Candidate& a, const Candidate& b) { return a.w == b.w; }),
               en.out.end());
  // drop candidates certainly above the unslacked bound
  std::vector<Candidate> keep;
  Interval b0(Real(0.0, p), bound);
  for (auto& c : en.out) {
    if (form.exact()) {
      keep.push_back(std::move(c));  // caller filters exactly
    } else if (!(c.value.lo() > bound)) {
      keep.push_back(std::move(c));
    }
  }
  return keep;
}

ShortestResult shortest_vector(const QuadForm& form) {
  if (form.dim() > 6) throw std::invalid_argument("shortest_vector: dimension cap is 6");
  std::unique_ptr<QuadForm> owned;
  const QuadForm* f = &form;
  for (int attempt = 0; attempt <= 4; ++attempt) {
    std::vector<IVec> basis(f->dim(), IVec(f->dim(), 0));
    for (int i = 0; i < f->dim(); ++i) basis[i][i] = 1;
    lll_reduce(*f, basis);
    Real C = f->eval(basis[0]).hi();
    for (int i = 1; i < f->dim(); ++i) {
      Real c2 = f->eval(basis[i]).hi();
      if (c2 < C) C = c2;
    }
    auto cands = enumerate_below(*f, basis, C);
    if (cands.empty()) throw std::logic_error("shortest_vector: empty enumeration");
    if (f->exact()) {
      const Candidate* best = &cands[0];
      for (const auto& c : cands) {
        if (*c.exact_value < *best->exact_value ||
            (*c.exact_value == *best->exact_value && colex_less(c.w, best->w)))
          best = &c;
      }
      ShortestResult r;
      r.w = best->w;
      r.exact_len2 = *best->exact_value;
      r.length = Interval::of_mpq(*best->exact_value, f->prec()).sqrt();
      return r;
    }
    // interval path: pick by midpoint, then check separation. Candidates
    // whose enclosures are identical points are proven equal: tie-break.
    const Candidate* best = &cands[0];
    for (const auto& c : cands)
      if (c.value.mid() < best->value.mid()) best = &c;
    auto proven_equal = [](const Interval& a, const Interval& b) {
      return a.width().is_zero() && b.width().is_zero() && a.lo() == b.lo();
    };
    bool separated = true;
    for (const auto& c : cands) {
      if (&c == best) continue;
      if (best->value.certainly_less(c.value)) continue;
      if (proven_equal(best->value, c.value)) {
        if (colex_less(c.w, best->w)) best = &c;
        continue;
      }
      separated = false;
      break;
    }
    if (separated) {
      ShortestResult r;
      r.w = best->w;
      r.length = best->value.sqrt();
      return r;
    }
    owned = f->clone_at(f->prec() * 2);
    f = owned.get();
  }
  throw std::runtime_error("shortest_vector: could not separate minimal candidates at max precision");
}

namespace {

CoveringRadius covering_radius_2d(const QuadForm& form) {
  std::unique_ptr<QuadForm> owned;
  const QuadForm* f = &form;
  for (int attempt = 0; attempt <= 4; ++attempt) {
    std::vector<IVec> basis = {{1, 0}, {0, 1}};
    lll_reduce(*f, basis);
    Interval b12 = f->bilinear(basis[0], basis[1]);
    if (b12.sign_certain() > 0) {
      for (auto& c : basis[1]) c = -c;
      b12 = -b12;
    }
    // obtuse superbase (v1, v2, -v1-v2); covering radius = circumradius of
    // the Delaunay triangle with squared sides A1, A2, A3.
    Interval A1 = f->eval(basis[0]);
    Interval A2 = f->eval(basis[1]);
    IVec v3 = {basis[0][0] + basis[1][0], basis[0][1] + basis[1][1]};
    Interval A3 = f->eval(v3);
    Interval det = f->det();
    Interval four = Interval::of_mpq(4, f->prec());
    Interval r2 = A1 * A2 * A3 / (det * four);
    if (b12.sign_certain() == 0 && !b12.width().is_zero()) {
      // undecided superbase orientation: hull with the flipped triangle
      IVec v3b = {basis[0][0] - basis[1][0], basis[0][1] - basis[1][1]};
      Interval A3b = f->eval(v3b);
      Interval r2b = A1 * A2 * A3b / (det * four);
      Real lo = r2.lo() <= r2b.lo() ? r2.lo() : r2b.lo();
      Real hi = r2.hi() >= r2b.hi() ? r2.hi() : r2b.hi();
      r2 = Interval(lo, hi);
    }
    Interval r = r2.sqrt();
    if (r.rel_width() < 1e-12) {
      CoveringRadius cr;
      cr.lower = r;
      cr.upper = r;
      cr.exact = true;
      return cr;
    }
    owned = f->clone_at(f->prec() * 2);
    f = owned.get();
  }
  throw std::runtime_error("covering_radius: 2d refinement failed");
}

CoveringRadius covering_radius_nd(const QuadForm& form) {
  const int k = form.dim();
  std::vector<IVec> basis(k, IVec(k, 0));
  for (int i = 0; i < k; ++i) basis[i][i] = 1;
  lll_reduce(form, basis);
  // interval LDL^T of the reduced Gram: D_i are the squared GS norms
  Prec p = form.prec();
  std::vector<std::vector<Interval>> g(k, std::vector<Interval>(k, Interval::of_mpq(0, p)));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g[i][j] = form.bilinear(basis[i], basis[j]);
  std::vector<std::vector<Interval>> L(k, std::vector<Interval>(k, Interval::of_mpq(0, p)));
  std::vector<Interval> D(k, Interval::of_mpq(0, p));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < i; ++j) {
      Interval s = g[i][j];
      for (int l = 0; l < j; ++l) s = s - L[i][l] * L[j][l] * D[l];
      L[i][j] = s / D[j];
    }
    Interval s = g[i][i];
    for (int l = 0; l < i; ++l) s = s - L[i][l] * L[i][l] * D[l];
    if (s.sign_certain() <= 0) throw std::runtime_error("covering_radius: indefinite at precision");
    D[i] = s;
  }
  // mu >= max_i |b*_i|/2 (project onto the span of the first i vectors);
  // mu <= half the diagonal of the orthogonalized box.
  Interval sum = D[0];
  Interval maxd = D[0];
  for (int i = 1; i < k; ++i) {
    sum = sum + D[i];
    if (D[i].lo() > maxd.lo()) maxd = D[i];
  }
  Prec pr = p;
  Interval half = Interval::of_mpq(mpq_class(1, 2), pr);
  CoveringRadius cr;
  cr.lower = maxd.sqrt() * half;
  cr.upper = sum.sqrt() * half;
  cr.exact = false;
  return cr;
}

}  // namespace

CoveringRadius covering_radius(const QuadForm& form) {
  if (form.dim() > 6) throw std::invalid_argument("covering_radius: dimension cap is 6");
  if (form.dim() == 2) return covering_radius_2d(form);
  return covering_radius_nd(form);
}

}  // namespace clab
