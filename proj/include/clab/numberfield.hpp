#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "clab/poly.hpp"
#include "clab/realinput.hpp"

namespace clab {

using IMat = std::vector<std::vector<mpz_class>>;

IMat imat_identity(int k);
IMat imat_mul(const IMat& a, const IMat& b);
IMat imat_transpose(const IMat& a);
bool imat_equal(const IMat& a, const IMat& b);
mpz_class imat_det(const IMat& a);
ZPoly charpoly(const IMat& a);  // monic, exact integer coefficients

// The order Z[theta] for the largest real root theta of a monic irreducible
// integer polynomial. Signature (r, s) with r + 2s = k.
struct NumberFieldOrder {
  ZPoly f;
  int k = 0;
  int r = 0, s = 0;
  AlgebraicReal theta;

  RealInput theta_input() const { return RealInput::algebraic(theta.poly, theta.lo, theta.hi); }
};

NumberFieldOrder make_order(const ZPoly& f);

// Element sum c_i theta^i of Z[theta]; norm = Res(f, sum c_i x^i).
struct OrderElement {
  std::vector<mpz_class> c;
  mpz_class norm;
};

OrderElement make_element(const NumberFieldOrder& ord, std::vector<mpz_class> c);
OrderElement element_mul(const NumberFieldOrder& ord, const OrderElement& a,
                         const OrderElement& b);
std::string element_to_string(const OrderElement& e);

std::pair<int, int> signature(const ZPoly& f);

struct UnitRankReport {
  int rank = 0;  // r + s - 1
  int k = 0;
  int claimed_floor = 0;  // floor((k+1)/2), the appendix's claimed lower bound
  bool meets_claimed_floor = false;
};

UnitRankReport unit_rank(const NumberFieldOrder& ord);

struct PellResult {
  OrderElement fundamental;    // from the sqrt(d) quotient period; norm may be -1
  OrderElement norm_plus_one;  // smallest power with norm +1
  int period = 0;
};

PellResult pell_unit(unsigned long d);

struct UnitSearchResult {
  std::vector<OrderElement> units;           // all |norm| = 1 in the box
  std::vector<OrderElement> positive_units;  // norm +1 and positive theta-embedding
};

UnitSearchResult unit_search(const NumberFieldOrder& ord, long coeff_bound);

// Multiplication-by-a matrix in the power basis; requires norm(a) = +1.
IMat mult_matrix(const NumberFieldOrder& ord, const OrderElement& a);

struct GvCertificate {
  bool member = false;
  std::string failing_clause;  // named clause on failure
  mpz_class det;
  Interval lambda{};           // eigenvalue enclosure when member
  double residual = 0;         // max-norm bound on |Av - lambda v|
  bool minpoly_squarefree = false;
  bool multiplicities_equal = false;
  int minpoly_degree = 0;
  bool ev_is_number_field = false;  // minpoly degree = k (simple eigenvector)
};

GvCertificate gv_check(const IMat& A, const std::vector<RealSource>& v);

struct AppendixReport {
  bool commute = false;
  bool p_inv_a_p_integral = false;  // expected false
  bool p_inv_b_p_integral = false;  // expected true
  bool b_is_polynomial_in_a = false;
  std::vector<mpq_class> b_poly_coeffs;
  bool common_eigenvector = false;
  double eigen_residual = 0;
  bool all_clauses_expected = false;
};

AppendixReport appendix_matrices_check();

// alpha = (theta, theta^2, ..., theta^{k-1}): the flow direction (1, alpha).
std::vector<RealInput> basis_direction(const NumberFieldOrder& ord);

struct SuspensionModel {
  int k = 0;
  IMat monodromy;
  std::vector<RealSource> direction;  // k-1 components after normalizing v_0 = 1
  Interval eigenvalue{};
  bool isometric = false;
  std::string note;
};

// Fiber-level collapse descriptor for the suspension of A in SL_k(Z) along
// the real irrational eigenvalue with the given index (ascending order).
SuspensionModel suspension_model(const IMat& A, int eigen_index);

// Real roots of the squarefree part, ascending, each isolated.
std::vector<AlgebraicReal> isolate_real_roots(const ZPoly& p);

bool is_irreducible(const ZPoly& f);  // supported through degree 4

}  // namespace clab
