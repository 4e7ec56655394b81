#pragma once

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <vector>

#include "clab/realinput.hpp"

namespace clab {

// Partial quotients plus the big-integer convergent table. q_n is strictly
// increasing for n >= 1 and gcd(p_n, q_n) = 1 throughout.
struct ContinuedFraction {
  std::vector<mpz_class> a;
  std::vector<mpz_class> p, q;
  bool exact = true;       // every emitted quotient is exact
  bool finite = false;     // expansion terminated (rational value)
  bool truncated = false;  // stopped early: input precision exhausted

  void push(const mpz_class& quotient);
  size_t size() const { return a.size(); }
  // value pinned between the last two convergents (needs size >= 2)
  ConvergentPair tail_enclosure() const;
  RealSource as_source() const { return RealSource(tail_enclosure()); }
};

ContinuedFraction cf_expand(const RealInput& x, int n_terms);

std::vector<std::pair<mpz_class, mpz_class>> convergents(const ContinuedFraction& cf);

struct MuEstimate {
  double mu_hat = 0;             // 1 + regression slope of ln q_{n+1} on ln q_n
  double ratio_min = 0;          // window extremes of r_n = 1 + ln q_{n+1}/ln q_n
  double ratio_max = 0;
  double alt_form = 0;           // 2 + max ln a_{n+1}/ln q_n
  bool forms_agree = false;      // |ratio_max - alt_form| within 10 ln2/ln q_tail
  int tail_start = 0;
  std::vector<double> ratios;
};

MuEstimate mu_estimate(const ContinuedFraction& cf, int tail_start);

// Quotients a_{n+1} = max(1, floor(q_n^{mu-2})) from [1;1]. Infinite target
// (mu_target <= 0 sentinel via construct_liouville) grows the exponent with n.
ContinuedFraction construct_alpha_with_mu(double mu_target, int depth);
ContinuedFraction construct_liouville(int depth);

struct BadApproxCertificate {
  int dim = 1;            // k - 1
  long bound = 0;         // scan bound Q
  double min_quality = 0; // min over q of q^{1/dim} * dist(q a, Z^dim)
  double min_quality_lo = 0, min_quality_hi = 0;
  mpz_class argmin_q;
  std::vector<mpz_class> witness_p;
  bool exact_hit = false;  // some q a landed exactly on the integer lattice
};

using BadApproxRow = std::function<void(long q, const Interval& dist, const Interval& quality)>;

BadApproxCertificate badapprox_scan(const std::vector<RealSource>& alpha, long Q, int workers = 1,
                                    const BadApproxRow& row_sink = nullptr);

}  // namespace clab
