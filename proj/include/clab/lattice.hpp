#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <vector>

#include "clab/realinput.hpp"

namespace clab {

using IVec = std::vector<mpz_class>;
using QMat = std::vector<std::vector<mpq_class>>;

// Positive-definite quadratic form on Z^k. Evaluation returns certified
// enclosures; forms built from rational data also expose an exact path.
class QuadForm {
 public:
  virtual ~QuadForm() = default;
  virtual int dim() const = 0;
  virtual Prec prec() const = 0;
  virtual Interval bilinear(const IVec& u, const IVec& v) const = 0;
  virtual Interval eval(const IVec& w) const { return bilinear(w, w); }
  virtual bool exact() const = 0;
  virtual mpq_class bilinear_exact(const IVec& u, const IVec& v) const;
  mpq_class eval_exact(const IVec& w) const { return bilinear_exact(w, w); }
  virtual Interval det() const = 0;
  virtual std::unique_ptr<QuadForm> clone_at(Prec prec) const = 0;
};

// Exact SPD Gram matrix over the rationals.
class RationalGram : public QuadForm {
 public:
  RationalGram(QMat g, Prec prec = 128);
  int dim() const override { return static_cast<int>(g_.size()); }
  Prec prec() const override { return prec_; }
  Interval bilinear(const IVec& u, const IVec& v) const override;
  bool exact() const override { return true; }
  mpq_class bilinear_exact(const IVec& u, const IVec& v) const override;
  Interval det() const override;
  std::unique_ptr<QuadForm> clone_at(Prec prec) const override;
  const QMat& matrix() const { return g_; }
  mpq_class det_exact() const;
  RationalGram inverse() const;  // the dual form

 private:
  QMat g_;
  Prec prec_;
};

// Rank-one collapsed form Q(w) = |w|^2 + c * <w,d>^2 / |d|^2 with d = (1, alpha)
// and c = eps^2 - 1 (or 1/eps^2 - 1 for the dual). det = 1 + c exactly.
class CollapsedGram : public QuadForm {
 public:
  CollapsedGram(std::vector<RealSource> alpha, mpq_class coef, Prec prec);
  int dim() const override { return static_cast<int>(alpha_.size()) + 1; }
  Prec prec() const override { return prec_; }
  Interval bilinear(const IVec& u, const IVec& v) const override;
  bool exact() const override { return exact_; }
  mpq_class bilinear_exact(const IVec& u, const IVec& v) const override;
  Interval det() const override;
  std::unique_ptr<QuadForm> clone_at(Prec prec) const override;
  const mpq_class& coef() const { return coef_; }

 private:
  std::vector<RealSource> alpha_;
  mpq_class coef_;
  Prec prec_;
  bool exact_ = false;
  std::vector<Interval> dir_;           // (1, alpha) at prec_
  Interval dnorm2_;                     // |d|^2
  std::vector<mpq_class> dir_exact_;    // set when all components rational
  mpq_class dnorm2_exact_;
};

// Lovasz-reduce the basis of Z^k under the form (delta = 0.99). Midpoint
// arithmetic only: any unimodular output is valid, quality tunes enumeration.
void lll_reduce(const QuadForm& form, std::vector<IVec>& basis);

struct Candidate {
  IVec w;  // canonical sign: first nonzero coordinate positive
  Interval value;
  std::optional<mpq_class> exact_value;
};

// All nonzero vectors (up to sign) with Q(w) <= bound, via Fincke-Pohst over
// the given (reduced) basis. Bound comparisons are exact for exact forms.
std::vector<Candidate> enumerate_below(const QuadForm& form, const std::vector<IVec>& basis,
                                       const Real& bound);

struct ShortestResult {
  IVec w;
  Interval length;                      // sqrt of the form value
  std::optional<mpq_class> exact_len2;  // exact squared length when available
};

// Exact minimizer; precision doubles on unresolved comparisons (4 retries).
// Ties are broken to the colexicographically smallest canonical vector.
ShortestResult shortest_vector(const QuadForm& form);

struct CoveringRadius {
  Interval lower, upper;
  bool exact = false;  // k = 2: lower == upper up to rounding
};

// k = 2: exact via the obtuse-superbase circumradius. k >= 3: sandwich with
// upper/lower <= sqrt(k) from the Gram-Schmidt profile of a reduced basis.
CoveringRadius covering_radius(const QuadForm& form);

}  // namespace clab
