#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "clab/acceptance.hpp"
#include "clab/cohomology.hpp"
#include "clab/config.hpp"
#include "clab/csv.hpp"
#include "clab/harness.hpp"
#include "clab/numberfield.hpp"

namespace {

using namespace clab;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

void emit(const RunRecord& rec, const std::string& out_path, const std::string& jsonl_path,
          const std::string& plot_path) {
  if (out_path.empty()) {
    std::cout << rec.csv;
  } else {
    write_file(out_path, rec.csv);
  }
  if (!jsonl_path.empty()) write_file(jsonl_path, rec.jsonl);
  if (!plot_path.empty()) write_file(plot_path, plot(rec));
}

int run_and_emit(const std::string& kind, std::map<std::string, std::string> kv,
                 const std::string& out, const std::string& jsonl, const std::string& plot_path) {
  auto cfg = ExperimentConfig::from_pairs(kind, kv);
  auto rec = run(cfg);
  emit(rec, out, jsonl, plot_path);
  return 0;
}

IMat read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file '" + path + "'");
  IMat m;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream is(line);
    std::vector<mpz_class> row;
    std::string tok;
    while (is >> tok) row.emplace_back(tok);
    if (!row.empty()) m.push_back(std::move(row));
  }
  if (m.empty()) throw std::runtime_error("matrix file is empty");
  for (const auto& row : m)
    if (row.size() != m.size()) throw std::runtime_error("matrix file is not square");
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collapse-lab: diophantine exponents, collapsed flat tori, torus Hodge spectra,\n"
               "flow cohomology profiles and number-field symmetry groups"};
  app.require_subcommand(1);
  app.footer(
      "CSV schemas: cf: n,a_n,p_n,q_n | badapprox: q,dist,quality |\n"
      "collapse: eps,injrad,diam_lo,diam_hi,vol,dual_min,exp_injrad,exp_diam |\n"
      "rayleigh: eps,R_eps,R1_times_eps2,rel_gap | spectrum: index,eigenvalue,multiplicity\n"
      "alpha grammar: phi | sqrt:N | rat:p/q | poly:<c0,..,1>@<lo,hi> | dec:<digits> |\n"
      "mu:<target>[@depth] | liouville[@depth].  eps grammar: 2^-N | decimal | p/q\n"
      "env: COLLAPSE_LAB_WORKERS sets the default worker count\n"
      "exit codes: 0 pass, 1 verification failure, 2 usage error");

  std::string alpha, out, jsonl, plot_path, input;
  int terms = 20, tail = -1, k = 2, p = 0, N = 64, per_octave = 1, workers = 0;
  long Q = 10000, count = 16;
  std::string eps = "1", eps_min = "2^-40", eps_max = "2^-4", eps_list;
  bool cf_subgrid = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out, "write CSV here (default: stdout)");
    cmd->add_option("--jsonl", jsonl, "also write JSON-lines rows here");
    cmd->add_option("--workers", workers, "worker threads (default: env or 1)");
  };

  auto* c_cf = app.add_subcommand("cf", "continued fraction expansion with convergents");
  c_cf->add_option("--input", input, "real number spec")->required();
  c_cf->add_option("--terms", terms, "number of partial quotients");
  add_common(c_cf);

  auto* c_mu = app.add_subcommand("mu", "irrationality exponent estimate");
  c_mu->add_option("--input", input, "real number spec")->required();
  c_mu->add_option("--terms", terms, "expansion length")->default_val(60);
  c_mu->add_option("--tail", tail, "tail window start (default terms/3)");
  add_common(c_mu);

  auto* c_bad = app.add_subcommand("badapprox", "badly-approximable quality scan");
  c_bad->add_option("--alpha", alpha, "direction components")->required();
  c_bad->add_option("--Q", Q, "scan bound");
  add_common(c_bad);

  auto* c_col = app.add_subcommand("collapse", "collapsed-torus geometry scan");
  c_col->add_option("--k", k, "torus dimension");
  c_col->add_option("--alpha", alpha, "flow direction components")->required();
  c_col->add_option("--eps-min", eps_min, "smallest eps");
  c_col->add_option("--eps-max", eps_max, "largest eps");
  c_col->add_option("--per-octave", per_octave, "grid points per factor of 2");
  c_col->add_flag("--cf-subgrid", cf_subgrid, "join the convergent-driven subgrid (k=2)");
  c_col->add_option("--plot", plot_path, "write an SVG log-log plot here");
  add_common(c_col);

  auto* c_spec = app.add_subcommand("spectrum", "flat-torus Hodge spectrum");
  c_spec->add_option("--k", k, "torus dimension");
  c_spec->add_option("--p", p, "form degree");
  c_spec->add_option("--alpha", alpha, "flow direction components")->required();
  c_spec->add_option("--eps", eps, "collapse parameter");
  c_spec->add_option("--count", count, "eigenvalues requested");
  add_common(c_spec);

  auto* c_ray = app.add_subcommand("rayleigh", "Hopf-flow Rayleigh quotient on S^3");
  c_ray->add_option("--alpha", alpha, "flow parameter (decimal or spec)")->default_val("1");
  c_ray->add_option("--eps-list", eps_list, "comma-separated eps values");
  c_ray->add_option("--N", N, "quadrature resolution")->default_val(64);
  c_ray->add_option("--plot", plot_path, "write an SVG log-log plot here");
  add_common(c_ray);

  std::string poly_text, vspec, profile_name, check_path, config_path;
  long bound = 10;
  bool units = false, as_json = false;

  auto* c_field = app.add_subcommand("field", "number field order: signature, units, matrices");
  c_field->add_option("--poly", poly_text, "monic integer polynomial, e.g. \"x^3-x-1\"")
      ->required();
  c_field->add_flag("--units", units, "run the bounded unit search");
  c_field->add_option("--bound", bound, "coefficient bound for the unit search");

  auto* c_gv = app.add_subcommand("gv", "flow-symmetry membership certificate");
  c_gv->add_option("--matrix", input, "whitespace-separated integer matrix file")->required();
  c_gv->add_option("--v", vspec, "direction components (comma-separated specs)")->required();

  auto* c_apx = app.add_subcommand("appendix-check", "built-in commuting-matrices check");

  auto* c_prof = app.add_subcommand("profile", "flow cohomology profiles");
  c_prof->add_option("--name", profile_name, "catalog entry id");
  c_prof->add_flag("--json", as_json, "JSON output");
  c_prof->add_option("--check", check_path, "validate a profile file");

  auto* c_plot = app.add_subcommand("plot", "re-plot a previous run from its config");
  c_plot->add_option("--config", config_path, "experiment config file")->required();
  c_plot->add_option("--out", plot_path, "SVG output path")->required();

  auto* c_run = app.add_subcommand("run", "run an experiment config file");
  c_run->add_option("--config", config_path, "experiment config file")->required();
  c_run->add_option("--out", out, "write CSV here (default: stdout)");
  c_run->add_option("--jsonl", jsonl, "also write JSON-lines rows here");
  c_run->add_option("--plot", plot_path, "write an SVG plot here");

  std::vector<std::string> only;
  auto* c_verify = app.add_subcommand("verify-all", "run the acceptance suite");
  c_verify->add_option("--only", only, "run only these criteria (e.g. AC-12)");
  c_verify->add_option("--workers", workers, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto wopt = workers > 0 ? std::optional<int>(workers) : std::nullopt;
    std::map<std::string, std::string> kv;
    if (c_cf->parsed()) {
      kv = {{"alpha", input}, {"terms", std::to_string(terms)}};
      return run_and_emit("cf", kv, out, jsonl, "");
    }
    if (c_mu->parsed()) {
      kv = {{"alpha", input}, {"terms", std::to_string(terms)}};
      if (tail >= 0) kv["tail"] = std::to_string(tail);
      return run_and_emit("mu", kv, out, jsonl, "");
    }
    if (c_bad->parsed()) {
      kv = {{"alpha", alpha}, {"Q", std::to_string(Q)},
            {"workers", std::to_string(resolve_workers(wopt))}};
      return run_and_emit("badapprox", kv, out, jsonl, "");
    }
    if (c_col->parsed()) {
      kv = {{"alpha", alpha},       {"k", std::to_string(k)},
            {"eps_min", eps_min},   {"eps_max", eps_max},
            {"per_octave", std::to_string(per_octave)},
            {"workers", std::to_string(resolve_workers(wopt))}};
      if (cf_subgrid) kv["cf_subgrid"] = "true";
      return run_and_emit("collapse", kv, out, jsonl, plot_path);
    }
    if (c_spec->parsed()) {
      kv = {{"alpha", alpha}, {"k", std::to_string(k)}, {"p", std::to_string(p)},
            {"eps", eps},     {"count", std::to_string(count)}};
      return run_and_emit("spectrum", kv, out, jsonl, "");
    }
    if (c_ray->parsed()) {
      kv = {{"alpha", alpha}, {"N", std::to_string(N)}};
      if (!eps_list.empty()) kv["eps_list"] = eps_list;
      return run_and_emit("rayleigh", kv, out, jsonl, plot_path);
    }
    if (c_field->parsed()) {
      auto ord = make_order(poly::parse_poly(poly_text));
      std::cout << "polynomial: " << poly::poly_to_string(ord.f) << "\n";
      std::cout << "degree: " << ord.k << "\nsignature: (" << ord.r << ", " << ord.s << ")\n";
      auto rk = unit_rank(ord);
      std::cout << "unit rank: " << rk.rank << " (claimed floor [0.5(k+1)] = "
                << rk.claimed_floor
                << (rk.meets_claimed_floor ? ", satisfied" : ", NOT satisfied") << ")\n";
      std::cout << "theta in (" << ord.theta.lo.get_str() << ", " << ord.theta.hi.get_str()
                << ")\n";
      if (units) {
        auto res = unit_search(ord, bound);
        std::cout << "units with |coeff| <= " << bound << ": " << res.units.size() << "\n";
        for (const auto& u : res.units)
          std::cout << "  " << element_to_string(u) << "  norm " << u.norm.get_str() << "\n";
        std::cout << "positive norm-1 units: " << res.positive_units.size() << "\n";
        for (const auto& u : res.positive_units) {
          IMat M = mult_matrix(ord, u);
          std::cout << "  " << element_to_string(u) << "  ->  [";
          for (size_t i = 0; i < M.size(); ++i) {
            std::cout << (i ? "; " : "");
            for (size_t j = 0; j < M.size(); ++j)
              std::cout << (j ? " " : "") << M[i][j].get_str();
          }
          std::cout << "]\n";
        }
      }
      return 0;
    }
    if (c_gv->parsed()) {
      IMat A = read_matrix_file(input);
      auto alphas = parse_alpha_list(vspec);
      std::vector<RealSource> v;
      for (const auto& a : alphas) v.push_back(a.source());
      auto cert = gv_check(A, v);
      if (cert.member) {
        std::cout << "member: yes\nlambda ~= " << cert.lambda.mid().str(15)
                  << "\nresidual <= " << fmt_double(cert.residual, 3)
                  << "\nminimal polynomial degree: " << cert.minpoly_degree
                  << (cert.ev_is_number_field ? " (defines a number field)" : "") << "\n";
        return 0;
      }
      std::cout << "member: no\nfailing clause: " << cert.failing_clause << "\n";
      return 1;
    }
    if (c_apx->parsed()) {
      auto rep = appendix_matrices_check();
      std::cout << "AB = BA: " << (rep.commute ? "yes" : "NO") << "\n";
      std::cout << "P^-1 A P integral: " << (rep.p_inv_a_p_integral ? "yes" : "no") << "\n";
      std::cout << "P^-1 B P integral: " << (rep.p_inv_b_p_integral ? "yes" : "no") << "\n";
      std::cout << "common eigenvector residual: " << fmt_double(rep.eigen_residual, 3) << "\n";
      return rep.all_clauses_expected ? 0 : 1;
    }
    if (c_prof->parsed()) {
      if (!check_path.empty()) {
        auto f = parse_profile(read_file(check_path));
        auto v = vanishing_criteria(f);
        auto g = gysin_consistency(f);
        std::cout << "profile '" << f.name << "': valid\n"
                  << "vanishing criteria: " << (v.pass ? "pass" : "FAIL") << "\n"
                  << "gysin consistency: " << (g.feasible ? "feasible" : "infeasible") << "\n";
        return v.pass && g.feasible ? 0 : 1;
      }
      if (profile_name.empty()) {
        for (const auto& f : catalog()) std::cout << f.name << "\n";
        return 0;
      }
      const auto& f = lookup(profile_name);
      if (as_json) {
        std::cout << profile_to_json(f) << "\n";
      } else {
        std::cout << profile_to_text(f);
        auto m = m_p(f);
        std::cout << "m_p = ";
        for (size_t i = 0; i < m.size(); ++i) std::cout << (i ? "," : "") << m[i];
        std::cout << "\n";
      }
      return 0;
    }
    if (c_plot->parsed() || c_run->parsed()) {
      auto cfg = ExperimentConfig::parse(read_file(config_path));
      auto rec = run(cfg);
      if (c_plot->parsed()) {
        write_file(plot_path, plot(rec));
        return 0;
      }
      emit(rec, out, jsonl, plot_path);
      return 0;
    }
    if (c_verify->parsed()) {
      auto results = run_acceptance(only, resolve_workers(wopt));
      return acceptance_report(results, std::cout);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
