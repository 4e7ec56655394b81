#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "clab/cf.hpp"
#include "clab/lattice.hpp"
#include "clab/realinput.hpp"

namespace clab {

// Flat torus R^k/Z^k collapsed along the flow direction (1, alpha):
// G_eps = I + (eps^2 - 1) u u^T for the unit direction u. det G_eps = eps^2.
struct CollapsedMetric {
  int k = 2;
  std::vector<RealSource> alpha;  // k-1 components
  mpq_class eps;                  // in (0, 1], exact rational
  Prec prec = 64;                 // >= 64 + 4 |log2 eps|

  CollapsedGram form() const;       // w^T G_eps w
  CollapsedGram dual_form() const;  // w^T G_eps^{-1} w
  std::vector<std::vector<Interval>> gram_matrix() const;
  Interval det_from_matrix() const;  // determinant of the realized matrix
};

CollapsedMetric gram(int k, std::vector<RealSource> alpha, const mpq_class& eps);

struct CollapseScanRow {
  mpq_class eps;
  IVec shortest_w;
  Real injrad;    // half the shortest vector length
  Real diam_lo;   // covering radius bounds
  Real diam_hi;
  Real vol;       // sqrt(det G_eps)
  Real dual_min;  // shortest dual vector length
  double exp_injrad = 0;  // ln injrad / ln eps
  double exp_diam = 0;    // ln diam_hi / ln eps
  double exp_diam_lo = 0;
  bool from_subgrid = false;
};

struct ScanOptions {
  int per_octave = 1;
  bool cf_subgrid = false;
  std::optional<ContinuedFraction> cf;  // drives the subgrid when present
  double mu_hat = 2.0;                  // exponent for eps_n = q_n^{-mu}
  mpq_class subgrid_floor = 0;          // skip subgrid eps below this (0 = use eps_min)
  int workers = 1;
};

// Dyadic grid between eps_min and eps_max (inclusive-ish) with per_octave
// points per factor of two, optionally joined with the convergent subgrid.
std::vector<mpq_class> make_eps_grid(const mpq_class& eps_min, const mpq_class& eps_max,
                                     const ScanOptions& opt);

// The eps_n = q_n^{-mu} values from a quotient sequence, snapped to dyadic
// rationals and clipped to [floor_eps, eps_max].
std::vector<mpq_class> convergent_subgrid(const ContinuedFraction& cf, double mu_hat,
                                          const mpq_class& floor_eps, const mpq_class& eps_max);

std::vector<CollapseScanRow> scan_collapse(int k, const std::vector<RealSource>& alpha,
                                           const std::vector<mpq_class>& eps_grid,
                                           int workers = 1);

// Exponent extremes over the asymptotic tail of a scan: rows with eps at or
// below the geometric midpoint of the scanned range. The large-eps rows only
// measure the constants, not the limit exponents.
struct ExponentSummary {
  double min_exp_diam = 0;
  double max_exp_injrad = 0;
  mpq_class witness_eps_diam;
  mpq_class witness_eps_injrad;
  size_t rows_used = 0;
};

ExponentSummary exponent_summary(const std::vector<CollapseScanRow>& rows);

struct Th2Report {
  double L = 0;       // min over the grid of ln diam / ln eps
  double mu_hat = 0;
  double inv_mu = 0;
  double tolerance = 0;
  bool pass = false;
  mpq_class witness_eps;
  std::vector<CollapseScanRow> rows;
};

Th2Report verify_th2(const RealSource& alpha, const ContinuedFraction& cf,
                     const mpq_class& eps_min, const mpq_class& eps_max, double tolerance,
                     int per_octave = 1, int workers = 1);

struct Th3Report {
  int k = 0;
  double c = 0;           // bounding constant: max of both ratio families
  double ratio_min = 0;   // extremes of diam_hi / eps^{1/k}
  double ratio_max = 0;
  double drift = 0;       // ratio_max / ratio_min
  bool bounded = false;   // drift within tolerance
  double drift_tolerance = 100.0;
  double min_quality = 0;  // badapprox precheck at the report's Q
  std::vector<CollapseScanRow> rows;
};

Th3Report verify_th3(const std::vector<RealSource>& alpha, int k, const mpq_class& eps_min,
                     const mpq_class& eps_max, const ScanOptions& opt, long precheck_Q = 10000);

// Snap a positive mpfr value to an exact dyadic rational (53-bit mantissa).
mpq_class dyadic_from_real(const Real& x);

}  // namespace clab
