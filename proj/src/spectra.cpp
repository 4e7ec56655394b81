#include "clab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace clab {

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long TorusSpectrum::total_multiplicity() const {
  long t = 0;
  for (const auto& l : levels) t += l.multiplicity;
  return t;
}

namespace {

double eigenvalue_of(const mpq_class& normsq) {
  Interval pi2 = Interval::pi(96).square() * Interval::of_mpq(4, 96);
  return (pi2 * Interval::of_mpq(normsq, 96)).mid().to_double();
}

}  // namespace

TorusSpectrum torus_hodge_spectrum(const RationalGram& G, int p, long count) {
  int k = G.dim();
  if (k > 6) throw std::invalid_argument("torus_hodge_spectrum: dimension cap is 6");
  if (p < 0 || p > k) throw std::invalid_argument("torus_hodge_spectrum: degree out of range");
  if (count < 1 || count > 1000000)
    throw std::invalid_argument("torus_hodge_spectrum: count must be in [1, 1e6]");

  TorusSpectrum spec;
  spec.k = k;
  spec.p = p;
  spec.form_multiplicity = binom(k, p);

  RationalGram dual = G.inverse();
  std::vector<IVec> basis(k, IVec(k, 0));
  for (int i = 0; i < k; ++i) basis[i][i] = 1;
  lll_reduce(dual, basis);

  mpq_class r2 = dual.eval_exact(basis[0]);
  for (int i = 1; i < k; ++i) r2 = std::min(r2, dual.eval_exact(basis[i]));

  for (int grow = 0; grow < 64; ++grow) {
    auto cands = enumerate_below(dual, basis, Real(r2, dual.prec(), MPFR_RNDU));
    std::map<mpq_class, long> level_vectors;
    for (const auto& c : cands) {
      if (*c.exact_value > r2) continue;  // slack margin, filtered exactly
      level_vectors[*c.exact_value] += 2;  // w and -w
    }
    spec.levels.clear();
    SpectralLevel zero;
    zero.normsq = 0;
    zero.vectors = 1;
    zero.multiplicity = spec.form_multiplicity;
    zero.eigenvalue = 0;
    spec.levels.push_back(zero);
    long cum = zero.multiplicity;
    bool done = cum >= count;
    for (const auto& [val, vecs] : level_vectors) {
      SpectralLevel l;
      l.normsq = val;
      l.vectors = vecs;
      l.multiplicity = vecs * spec.form_multiplicity;
      l.eigenvalue = eigenvalue_of(val);
      spec.levels.push_back(l);
      cum += l.multiplicity;
      if (cum >= count) {
        done = true;
        break;
      }
    }
    if (done) {
      spec.radius2 = r2;
      return spec;
    }
    r2 *= 2;
  }
  throw std::runtime_error("torus_hodge_spectrum: radius growth did not certify the count");
}

long count_small(const TorusSpectrum& s, double threshold) {
  if (threshold < 0) return 0;
  // normsq threshold t = threshold / (4 pi^2), compared with certainty
  Interval pi2 = Interval::pi(160).square() * Interval::of_mpq(4, 160);
  Interval t = Interval::of_double(threshold, 160) / pi2;
  Real rad(s.radius2, 160, MPFR_RNDD);
  if (t.hi() > rad) throw std::runtime_error("count_small: spectrum not complete up to the threshold");
  long n = 0;
  for (const auto& l : s.levels) {
    if (l.normsq == 0) continue;
    Interval v = Interval::of_mpq(l.normsq, 160);
    if (v.hi() <= t.lo()) {
      n += l.multiplicity;
    } else if (!(v.lo() > t.hi())) {
      throw std::runtime_error("count_small: threshold indistinguishable from an eigenvalue");
    }
  }
  return n;
}

namespace {

// Jacobi eigenvalues of a small symmetric matrix (doubles).
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  int n = static_cast<int>(a.size());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::fabs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (int i = 0; i < n; ++i) {
          double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          double api = a[p][i], aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

// expand positive levels into an indexed eigenvalue list (exact normsq)
std::vector<mpq_class> indexed_positive(const TorusSpectrum& s, int n_eigs) {
  std::vector<mpq_class> out;
  for (const auto& l : s.levels) {
    if (l.normsq == 0) continue;
    for (long i = 0; i < l.multiplicity && static_cast<int>(out.size()) < n_eigs; ++i)
      out.push_back(l.normsq);
    if (static_cast<int>(out.size()) >= n_eigs) break;
  }
  return out;
}

}  // namespace

DodziukReport dodziuk_check(const RationalGram& G, const RationalGram& G2, int p, int n_eigs) {
  int k = G.dim();
  if (G2.dim() != k) throw std::invalid_argument("dodziuk_check: dimension mismatch");
  // tau bounds from the generalized eigenvalues of (G2, G): whiten by
  // the Cholesky factor of G in doubles, then inflate outward.
  std::vector<std::vector<double>> g(k, std::vector<double>(k)), h(k, std::vector<double>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      g[i][j] = G.matrix()[i][j].get_d();
      h[i][j] = G2.matrix()[i][j].get_d();
    }
  std::vector<std::vector<double>> L(k, std::vector<double>(k, 0.0));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = g[i][j];
      for (int l = 0; l < j; ++l) s -= L[i][l] * L[j][l];
      if (i == j) {
        L[i][i] = std::sqrt(s);
      } else {
        L[i][j] = s / L[j][j];
      }
    }
  }
  // W = L^{-1} H L^{-T}
  auto solve_lower = [&](std::vector<double> b) {
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < i; ++j) b[i] -= L[i][j] * b[j];
      b[i] /= L[i][i];
    }
    return b;
  };
  std::vector<std::vector<double>> W(k, std::vector<double>(k));
  for (int c = 0; c < k; ++c) {
    std::vector<double> col(k);
    for (int i = 0; i < k; ++i) col[i] = h[i][c];
    col = solve_lower(col);
    for (int i = 0; i < k; ++i) W[i][c] = col[i];
  }
  for (int r = 0; r < k; ++r) {
    std::vector<double> row(k);
    for (int j = 0; j < k; ++j) row[j] = W[r][j];
    row = solve_lower(row);
    for (int j = 0; j < k; ++j) W[r][j] = row[j];
  }
  auto ev = jacobi_eigenvalues(W);
  DodziukReport rep;
  rep.tau_lo = ev.front() * (1 - 1e-9);
  rep.tau_hi = ev.back() * (1 + 1e-9);

  TorusSpectrum s1 = torus_hodge_spectrum(G, p, n_eigs + binom(k, p) + 1);
  TorusSpectrum s2 = torus_hodge_spectrum(G2, p, n_eigs + binom(k, p) + 1);
  auto l1 = indexed_positive(s1, n_eigs);
  auto l2 = indexed_positive(s2, n_eigs);
  int m = static_cast<int>(std::min(l1.size(), l2.size()));

  double n = k;  // manifold dimension in the exponent
  double lo_factor = (1.0 / rep.tau_lo) * std::pow(rep.tau_lo / rep.tau_hi, 1.5 * n);
  double hi_factor = (1.0 / rep.tau_hi) * std::pow(rep.tau_hi / rep.tau_lo, 1.5 * n);
  rep.holds = true;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    mpq_class ratio_q = l2[i] / l1[i];
    double ratio = ratio_q.get_d();
    double margin = std::min(ratio - lo_factor, hi_factor - ratio);
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (ratio < lo_factor || ratio > hi_factor) rep.holds = false;
  }
  rep.checked = m;
  return rep;
}

}  // namespace clab
