#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "clab/acceptance.hpp"
#include "clab/cf.hpp"
#include "clab/cohomology.hpp"
#include "clab/collapse.hpp"
#include "clab/csv.hpp"
#include "clab/harness.hpp"
#include "clab/numberfield.hpp"
#include "clab/spectra.hpp"

namespace py = pybind11;
using namespace clab;

namespace {

ContinuedFraction expand_spec(const std::string& spec, int terms) {
  AlphaSpec a = parse_alpha(spec);
  return a.has_cf() ? *a.cf : cf_expand(*a.input, terms);
}

std::vector<RealSource> sources_of(const std::vector<std::string>& specs) {
  std::vector<RealSource> out;
  for (const auto& s : specs) out.push_back(parse_alpha(s).source());
  return out;
}

std::string join_specs(const std::vector<std::string>& specs) {
  std::string j;
  for (const auto& s : specs) j += (j.empty() ? "" : ",") + s;
  return j;
}

py::dict mu_dict(const MuEstimate& est) {
  py::dict d;
  d["mu_hat"] = est.mu_hat;
  d["ratio_min"] = est.ratio_min;
  d["ratio_max"] = est.ratio_max;
  d["alt_form"] = est.alt_form;
  d["tail_start"] = est.tail_start;
  d["forms_agree"] = est.forms_agree;
  return d;
}

py::list cf_list(const ContinuedFraction& cf) {
  py::list rows;
  for (size_t i = 0; i < cf.size(); ++i) {
    py::dict r;
    r["n"] = i;
    r["a"] = cf.a[i].get_str();
    r["p"] = cf.p[i].get_str();
    r["q"] = cf.q[i].get_str();
    rows.append(r);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "collapsed riemannian flows: diophantine exponents, flat-torus geometry and "
            "spectra, flow cohomology, number-field symmetry groups";
  m.attr("__version__") = tool_version();

  m.def(
      "cf_expand",
      [](const std::string& spec, int terms) {
        auto cf = expand_spec(spec, terms);
        py::dict d;
        d["terms"] = cf_list(cf);
        d["exact"] = cf.exact;
        d["finite"] = cf.finite;
        d["truncated"] = cf.truncated;
        return d;
      },
      py::arg("spec"), py::arg("terms") = 20,
      "Continued fraction of a real spec (phi | sqrt:N | rat:p/q | poly:...@lo,hi | "
      "dec:digits | mu:target[@depth]); big integers returned as strings.");

  m.def(
      "mu_estimate",
      [](const std::string& spec, int terms, int tail) {
        auto cf = expand_spec(spec, terms);
        if (tail < 0) tail = static_cast<int>(cf.size()) / 3;
        return mu_dict(mu_estimate(cf, tail));
      },
      py::arg("spec"), py::arg("terms") = 60, py::arg("tail") = -1);

  m.def(
      "badapprox_scan",
      [](const std::vector<std::string>& alpha, long Q, int workers) {
        auto cert = badapprox_scan(sources_of(alpha), Q, workers);
        py::dict d;
        d["min_quality"] = cert.min_quality;
        d["argmin_q"] = cert.argmin_q.get_str();
        d["exact_hit"] = cert.exact_hit;
        d["dim"] = cert.dim;
        d["Q"] = cert.bound;
        return d;
      },
      py::arg("alpha"), py::arg("Q") = 10000, py::arg("workers") = 1);

  m.def(
      "collapse_scan",
      [](const std::vector<std::string>& alpha, const std::string& eps_min,
         const std::string& eps_max, int per_octave, bool cf_subgrid, int workers) {
        std::map<std::string, std::string> kv{{"alpha", join_specs(alpha)},
                                              {"eps_min", eps_min},
                                              {"eps_max", eps_max},
                                              {"per_octave", std::to_string(per_octave)},
                                              {"workers", std::to_string(workers)}};
        if (cf_subgrid) kv["cf_subgrid"] = "true";
        auto rec = run(ExperimentConfig::from_pairs("collapse", kv));
        py::dict d;
        d["csv"] = rec.csv;
        d["jsonl"] = rec.jsonl;
        d["rows"] = rec.row_count;
        return d;
      },
      py::arg("alpha"), py::arg("eps_min") = "2^-40", py::arg("eps_max") = "2^-4",
      py::arg("per_octave") = 1, py::arg("cf_subgrid") = false, py::arg("workers") = 1);

  m.def(
      "torus_spectrum",
      [](const std::vector<std::string>& alpha, int k, int p, const std::string& eps,
         long count) {
        auto rec = run(ExperimentConfig::from_pairs("spectrum",
                                                    {{"alpha", join_specs(alpha)},
                                                     {"k", std::to_string(k)},
                                                     {"p", std::to_string(p)},
                                                     {"eps", eps},
                                                     {"count", std::to_string(count)}}));
        py::dict d;
        d["csv"] = rec.csv;
        d["levels"] = rec.row_count;
        return d;
      },
      py::arg("alpha"), py::arg("k") = 2, py::arg("p") = 0, py::arg("eps") = "1",
      py::arg("count") = 16);

  m.def(
      "hopf_rayleigh",
      [](double alpha, double eps, int N) {
        auto hr = hopf_rayleigh({alpha, eps, N});
        py::dict d;
        d["R_eps"] = hr.R_eps;
        d["R1"] = hr.R1;
        d["factorized"] = hr.factorized;
        d["rel_gap"] = hr.rel_gap;
        d["richardson"] = hr.richardson;
        return d;
      },
      py::arg("alpha") = 1.0, py::arg("eps") = 1.0, py::arg("N") = 64);

  m.def("catalog", [] {
    py::list names;
    for (const auto& f : catalog()) names.append(f.name);
    return names;
  });
  m.def(
      "profile", [](const std::string& name) { return profile_to_json(lookup(name)); },
      py::arg("name"), "JSON description including twisted dims, m_p and the Gysin witness.");
  m.def(
      "m_p", [](const std::string& name) { return m_p(lookup(name)); }, py::arg("name"));

  m.def(
      "signature",
      [](const std::string& polynomial) { return signature(poly::parse_poly(polynomial)); },
      py::arg("poly"));
  m.def(
      "pell_unit",
      [](unsigned long d) {
        auto res = pell_unit(d);
        py::dict out;
        out["fundamental"] = element_to_string(res.fundamental);
        out["fundamental_norm"] = res.fundamental.norm.get_str();
        out["norm_plus_one"] = element_to_string(res.norm_plus_one);
        out["period"] = res.period;
        return out;
      },
      py::arg("d"));
  m.def(
      "unit_search",
      [](const std::string& polynomial, long bound) {
        auto ord = make_order(poly::parse_poly(polynomial));
        auto res = unit_search(ord, bound);
        py::list units, positive;
        for (const auto& u : res.units) units.append(element_to_string(u));
        for (const auto& u : res.positive_units) positive.append(element_to_string(u));
        py::dict d;
        d["units"] = units;
        d["positive_units"] = positive;
        return d;
      },
      py::arg("poly"), py::arg("bound") = 10);
  m.def("appendix_check", [] {
    auto rep = appendix_matrices_check();
    py::dict d;
    d["commute"] = rep.commute;
    d["p_inv_a_p_integral"] = rep.p_inv_a_p_integral;
    d["p_inv_b_p_integral"] = rep.p_inv_b_p_integral;
    d["common_eigenvector"] = rep.common_eigenvector;
    d["all_clauses_expected"] = rep.all_clauses_expected;
    return d;
  });
  m.def(
      "gv_check",
      [](const std::vector<std::vector<long>>& matrix, const std::vector<std::string>& v) {
        IMat A(matrix.size());
        for (size_t i = 0; i < matrix.size(); ++i)
          A[i].assign(matrix[i].begin(), matrix[i].end());
        auto cert = gv_check(A, sources_of(v));
        py::dict d;
        d["member"] = cert.member;
        d["failing_clause"] = cert.failing_clause;
        d["lambda"] = cert.member ? cert.lambda.mid().to_double() : 0.0;
        d["minpoly_degree"] = cert.minpoly_degree;
        return d;
      },
      py::arg("matrix"), py::arg("v"));

  m.def(
      "run_config",
      [](const std::string& text) {
        auto rec = run(ExperimentConfig::parse(text));
        py::dict d;
        d["csv"] = rec.csv;
        d["jsonl"] = rec.jsonl;
        d["rows"] = rec.row_count;
        d["config_hash"] = rec.config_hash;
        return d;
      },
      py::arg("text"), "Run a line-oriented `key = value` experiment config.");

  m.def(
      "verify_all",
      [](const std::vector<std::string>& only, int workers) {
        auto results = run_acceptance(only, workers);
        py::list rows;
        for (const auto& r : results) {
          py::dict d;
          d["id"] = r.id;
          d["pass"] = r.pass;
          d["detail"] = r.detail;
          d["seconds"] = r.seconds;
          rows.append(d);
        }
        return rows;
      },
      py::arg("only") = std::vector<std::string>{}, py::arg("workers") = 1);
}
