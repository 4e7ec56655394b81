#include "clab/cohomology.hpp"

#include <json.hpp>

#include <sstream>
#include <stdexcept>

namespace clab {

int FlowProfile::h_at(int p) const {
  if (p < 0 || p >= static_cast<int>(h.size())) return 0;
  return h[p];
}

int FlowProfile::b_at(int p) const {
  if (p < 0 || p >= static_cast<int>(b.size())) return 0;
  return b[p];
}

void validate(const FlowProfile& f) {
  if (f.n < 1) throw std::invalid_argument("profile: dimension must be >= 1");
  if (static_cast<int>(f.h.size()) != f.n)
    throw std::invalid_argument("profile: h must have n entries (degrees 0..n-1)");
  if (static_cast<int>(f.b.size()) != f.n + 1)
    throw std::invalid_argument("profile: b must have n+1 entries");
  for (int v : f.h)
    if (v < 0) throw std::invalid_argument("profile: negative basic dimension");
  for (int v : f.b)
    if (v < 0) throw std::invalid_argument("profile: negative Betti number");
  if (f.h[0] != 1) throw std::invalid_argument("profile: h_0 must be 1");
  if (f.b[0] != 1 || f.b[f.n] != 1)
    throw std::invalid_argument("profile: b_0 and b_n must be 1");
  for (int p = 0; p <= f.n; ++p)
    if (f.b[p] != f.b[f.n - p]) throw std::invalid_argument("profile: b must be symmetric");
  if (f.kappa_zero) {
    if (f.h[f.n - 1] == 0)
      throw std::invalid_argument("profile: isometric flow needs h_{n-1} != 0");
    for (int p = 0; p < f.n; ++p)
      if (f.h[p] != f.h[f.n - 1 - p])
        throw std::invalid_argument("profile: isometric flow needs h_p = h_{n-1-p}");
  } else if (f.h[f.n - 1] != 0) {
    throw std::invalid_argument("profile: non-isometric flow needs h_{n-1} = 0");
  }
}

std::vector<int> twisted_dims(const FlowProfile& f) {
  std::vector<int> t(f.n);
  for (int i = 0; i < f.n; ++i) t[i] = f.h_at(f.n - 1 - i);
  return t;
}

std::vector<int> m_p(const FlowProfile& f) {
  validate(f);
  auto t = twisted_dims(f);
  std::vector<int> m(f.n + 1);
  for (int p = 0; p <= f.n; ++p) {
    int direct = f.h_at(p) + f.h_at(f.n - p) - f.b_at(p);
    int via_twisted = f.h_at(p) + (p >= 1 ? t[p - 1] : 0) - f.b_at(p);
    if (direct != via_twisted)
      throw std::logic_error("m_p: direct and twisted routes disagree");
    if (direct < 0)
      throw std::invalid_argument("m_p: negative count; profile data inconsistent");
    m[p] = direct;
  }
  return m;
}

GysinResult gysin_consistency(const FlowProfile& f) {
  validate(f);
  auto t = twisted_dims(f);
  // chain of spaces: for i = 0..n+1: H^i(M/F), H^i(M), H^{i-1}_kappa,
  // followed by H^{i+1}(M/F) ... the map out of each twisted node is wedge-e.
  std::vector<int> dims;
  std::vector<bool> is_euler_map;  // aligned with the map leaving node j
  auto t_at = [&](int i) { return (i >= 0 && i < f.n) ? t[i] : 0; };
  for (int i = 0; i <= f.n + 1; ++i) {
    dims.push_back(i < f.n ? f.h_at(i) : 0);
    is_euler_map.push_back(false);
    dims.push_back(f.b_at(i));
    is_euler_map.push_back(false);
    dims.push_back(t_at(i - 1));
    is_euler_map.push_back(true);  // map into H^{i+1}(M/F)
  }
  GysinResult res;
  int incoming = 0;
  for (size_t j = 0; j < dims.size(); ++j) {
    int rank = dims[j] - incoming;
    if (rank < 0) {
      res.reason = "exactness forces a negative rank at node " + std::to_string(j);
      return res;
    }
    int target = j + 1 < dims.size() ? dims[j + 1] : 0;
    if (f.euler_zero && is_euler_map[j] && rank != 0) {
      res.reason = "vanishing Euler class forces every wedge-e rank to 0";
      return res;
    }
    if (rank > target) {
      res.reason = "rank exceeds the target dimension at node " + std::to_string(j);
      return res;
    }
    res.ranks.push_back(rank);
    if (is_euler_map[j]) res.euler_ranks.push_back(rank);
    incoming = rank;
  }
  if (incoming != 0) {
    res.reason = "sequence does not terminate exactly";
    res.ranks.clear();
    res.euler_ranks.clear();
    return res;
  }
  res.feasible = true;
  return res;
}

VanishingReport vanishing_criteria(const FlowProfile& f) {
  auto m = m_p(f);
  bool any_positive = false;
  for (int v : m) any_positive |= v > 0;
  VanishingReport rep;
  rep.euler_clause = !any_positive || !f.euler_zero;
  bool m1_positive = f.n >= 1 && m[1] > 0;
  rep.kappa_clause = m1_positive == (f.kappa_zero && !f.euler_zero);
  rep.pass = rep.euler_clause && rep.kappa_clause;
  return rep;
}

namespace {

std::vector<FlowProfile> build_catalog() {
  std::vector<FlowProfile> cat;
  // Hopf-type flows on odd spheres: basic cohomology R in even transverse
  // degrees, small eigenvalues in every degree other than 0 and n.
  cat.push_back({"hopf-s3", 3, {1, 0, 1}, {1, 0, 0, 1}, true, false,
                 "dense linear flow inside the torus action on S^3"});
  cat.push_back({"sphere-s5", 5, {1, 0, 1, 0, 1}, {1, 0, 0, 0, 0, 1}, true, false,
                 "dense T^3 flow on S^5"});
  cat.push_back({"sphere-s7", 7, {1, 0, 1, 0, 1, 0, 1}, {1, 0, 0, 0, 0, 0, 0, 1}, true, false,
                 "dense T^4 flow on S^7"});
  cat.push_back({"t2-dense", 2, {1, 1}, {1, 2, 1}, true, true,
                 "irrational linear flow on the flat 2-torus"});
  cat.push_back({"t3-dense", 3, {1, 2, 1}, {1, 3, 3, 1}, true, true,
                 "dense linear flow on the flat 3-torus"});
  // Suspension of [[2,1],[1,1]] on T^2: the simplest non-isometric flow;
  // basic dims from the Wang complex worksheet in docs/flow_worksheets.md.
  cat.push_back({"carriere-sol", 3, {1, 1, 0}, {1, 1, 1, 1}, false, true,
                 "sol 3-manifold suspension flow, expanding eigendirection"});
  // Suspension of the 4x4 two-block matrix with coupled golden-ratio blocks
  // on T^4; see docs/flow_worksheets.md for the companion spectral data the
  // basic dimensions encode.
  cat.push_back({"sol5-blocks", 5, {1, 1, 2, 1, 0}, {1, 1, 2, 2, 1, 1}, false, false,
                 "5-dimensional suspension with coupled expanding blocks"});
  // Handle-attachment surgery over the collapsed S^3 x S^1 limit space:
  // nonzero Euler class, yet every wedge-e map vanishes and no degree
  // collects small eigenvalues (dimension 4 admits none for non-isometric).
  cat.push_back({"euler-surgery", 4, {1, 1, 1, 0}, {1, 1, 2, 1, 1}, false, false,
                 "4-manifold surgery flow: [e] != 0 without small eigenvalues"});
  for (const auto& f : cat) validate(f);
  return cat;
}

}  // namespace

const std::vector<FlowProfile>& catalog() {
  static const std::vector<FlowProfile> cat = build_catalog();
  return cat;
}

const FlowProfile& lookup(const std::string& name) {
  for (const auto& f : catalog())
    if (f.name == name) return f;
  throw std::invalid_argument("unknown profile '" + name + "'");
}

namespace {

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace

FlowProfile parse_profile(const std::string& text) {
  FlowProfile f;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool saw_n = false, saw_h = false, saw_b = false;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("profile line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (key == "name") {
      f.name = val;
    } else if (key == "n") {
      f.n = std::stoi(val);
      saw_n = true;
    } else if (key == "h") {
      f.h = parse_int_list(val);
      saw_h = true;
    } else if (key == "b") {
      f.b = parse_int_list(val);
      saw_b = true;
    } else if (key == "kappa_zero") {
      f.kappa_zero = val == "true" || val == "1";
    } else if (key == "euler_zero") {
      f.euler_zero = val == "true" || val == "1";
    } else if (key == "note") {
      f.note = val;
    } else {
      throw std::invalid_argument("profile line " + std::to_string(lineno) + ": unknown key '" +
                                  key + "'");
    }
  }
  if (!saw_n || !saw_h || !saw_b)
    throw std::invalid_argument("profile: keys n, h, b are required");
  validate(f);
  return f;
}

std::string profile_to_text(const FlowProfile& f) {
  std::ostringstream os;
  os << "name = " << f.name << "\n";
  os << "n = " << f.n << "\n";
  os << "h = ";
  for (size_t i = 0; i < f.h.size(); ++i) os << (i ? "," : "") << f.h[i];
  os << "\nb = ";
  for (size_t i = 0; i < f.b.size(); ++i) os << (i ? "," : "") << f.b[i];
  os << "\nkappa_zero = " << (f.kappa_zero ? "true" : "false");
  os << "\neuler_zero = " << (f.euler_zero ? "true" : "false");
  if (!f.note.empty()) os << "\nnote = " << f.note;
  os << "\n";
  return os.str();
}

std::string profile_to_json(const FlowProfile& f) {
  nlohmann::json j;
  j["name"] = f.name;
  j["n"] = f.n;
  j["h"] = f.h;
  j["b"] = f.b;
  j["kappa_zero"] = f.kappa_zero;
  j["euler_zero"] = f.euler_zero;
  j["twisted"] = twisted_dims(f);
  j["m_p"] = m_p(f);
  if (!f.note.empty()) j["note"] = f.note;
  auto g = gysin_consistency(f);
  j["gysin_feasible"] = g.feasible;
  j["euler_ranks"] = g.euler_ranks;
  auto v = vanishing_criteria(f);
  j["vanishing_pass"] = v.pass;
  return j.dump(2);
}

}  // namespace clab
