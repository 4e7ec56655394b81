#pragma once

#include <gmpxx.h>

#include <vector>

#include "clab/lattice.hpp"

namespace clab {

// One Laplace level of the flat torus: eigenvalue 4 pi^2 * normsq where
// normsq = w^T G^{-1} w, carried exactly. `vectors` counts the lattice
// vectors on the level (even for nonzero levels), multiplicity adds the
// binom(k, p) factor per vector.
struct SpectralLevel {
  mpq_class normsq;
  long vectors = 0;
  long multiplicity = 0;
  double eigenvalue = 0;
};

struct TorusSpectrum {
  int k = 0;
  int p = 0;
  long form_multiplicity = 1;  // binom(k, p)
  std::vector<SpectralLevel> levels;  // ascending, starts at the zero level
  mpq_class radius2;                  // complete for normsq <= radius2
  long total_multiplicity() const;
};

// The `count` smallest eigenvalues (with multiplicity) of the Hodge
// Laplacian on p-forms of (T^k, G). Enumeration radius grows until the
// requested count is certified complete.
TorusSpectrum torus_hodge_spectrum(const RationalGram& G, int p, long count);

// Positive eigenvalues <= threshold; throws if the spectrum is not complete
// far enough to decide.
long count_small(const TorusSpectrum& s, double threshold);

struct DodziukReport {
  bool holds = false;
  double tau_lo = 0, tau_hi = 0;  // certified sandwich tau' g <= g' <= tau g
  int checked = 0;
  double worst_margin = 0;  // smallest slack across all indices (>= 0 when holds)
};

// Metric-comparison inequality for the first n_eigs positive eigenvalues on
// p-forms; unconditional, so a failure indicates an implementation bug.
DodziukReport dodziuk_check(const RationalGram& G, const RationalGram& G2, int p, int n_eigs);

long binom(int n, int k);

// ---- Hopf flow on S^3 ----------------------------------------------------

// Flow (a, b) -> (e^{it} a, e^{i alpha t} b) on the round S^3, test form
// omega = X^flat / |X|^2. The collapse scales the flow direction by eps.
struct HopfFormModel {
  double alpha = 1.0;
  double eps = 1.0;
  int N = 64;  // quadrature resolution per coordinate
};

struct HopfRayleigh {
  double R_eps = 0;        // full eps-metric quadrature
  double R1 = 0;           // same quadrature at eps = 1
  double factorized = 0;   // eps^2 * R1
  double rel_gap = 0;      // |R_eps - factorized| / factorized
  double richardson = 0;   // |R1(N) - R1(N/2)| / |R1(N)|
  double omega_l2 = 0;     // ||omega||^2 at eps = 1
  double domega_l2 = 0;    // ||d omega||^2 at eps = 1
};

HopfRayleigh hopf_rayleigh(const HopfFormModel& m);

// Closed-form values of the eps = 1 norms (independent oracle for tests).
double hopf_omega_l2_closed(double alpha);
double hopf_domega_l2_closed(double alpha);

// max |i_X d omega| over `samples` latitude samples (identically zero).
double hopf_ixdomega_residual(double alpha, int samples);
// max relative gap between finite-difference d omega and the closed form.
double hopf_discrete_d_residual(double alpha, int N);

}  // namespace clab
