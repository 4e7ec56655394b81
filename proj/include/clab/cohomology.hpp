#pragma once

#include <string>
#include <vector>

namespace clab {

// Cohomological profile of a riemannian flow on a closed n-manifold.
// h[p] = dim of the degree-p basic cohomology for p = 0..n-1 (the basic
// complex stops at degree n-1; degree n is 0 by convention). b[p] are the
// Betti numbers of the manifold. kappa_zero marks isometric flows.
struct FlowProfile {
  std::string name;
  int n = 0;
  std::vector<int> h;
  std::vector<int> b;
  bool kappa_zero = false;
  bool euler_zero = false;
  std::string note;

  int h_at(int p) const;  // 0 outside 0..n-1
  int b_at(int p) const;
};

// Throws with a named clause when a structural invariant fails.
void validate(const FlowProfile& f);

// H_kappa^i = H^{n-1-i}: index-reversed copy of h.
std::vector<int> twisted_dims(const FlowProfile& f);

// m_p = h_p + h_{n-p} - b_p, computed both directly and through the twisted
// dims; the two routes must agree and every entry must be >= 0.
std::vector<int> m_p(const FlowProfile& f);

struct GysinResult {
  bool feasible = false;
  // ranks of consecutive maps along the long exact sequence
  std::vector<int> ranks;
  // ranks of the wedge-e maps H^{i-1}_kappa -> H^{i+1}(M/F), i = 1..n
  std::vector<int> euler_ranks;
  std::string reason;  // set when infeasible
};

// Decide whether nonnegative ranks make the Gysin-type sequence exact with
// the profile's dimensions; when euler_zero, the wedge-e ranks are pinned to 0.
GysinResult gysin_consistency(const FlowProfile& f);

struct VanishingReport {
  bool euler_clause = false;   // some m_p > 0 implies euler_zero == false
  bool kappa_clause = false;   // m_1 > 0 iff (kappa_zero and not euler_zero)
  bool pass = false;
};

VanishingReport vanishing_criteria(const FlowProfile& f);

const std::vector<FlowProfile>& catalog();
const FlowProfile& lookup(const std::string& name);

// Line-oriented `key = value` profile files.
FlowProfile parse_profile(const std::string& text);
std::string profile_to_text(const FlowProfile& f);
std::string profile_to_json(const FlowProfile& f);

}  // namespace clab
