#include "clab/harness.hpp"

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <sstream>
#include <stdexcept>

#include "clab/cohomology.hpp"
#include "clab/csv.hpp"
#include "clab/numberfield.hpp"
#include "clab/spectra.hpp"

namespace clab {

const char* tool_version() { return "0.1.0"; }

AlphaSpec parse_alpha(const std::string& spec) {
  AlphaSpec a;
  a.text = spec;
  auto at = spec.find('@');
  if (spec.rfind("mu:", 0) == 0) {
    double target = std::stod(spec.substr(3, at == std::string::npos ? spec.npos : at - 3));
    int depth = at == std::string::npos ? 12 : std::stoi(spec.substr(at + 1));
    a.cf = construct_alpha_with_mu(target, depth);
    return a;
  }
  if (spec.rfind("liouville", 0) == 0) {
    int depth = at == std::string::npos ? 7 : std::stoi(spec.substr(at + 1));
    a.cf = construct_liouville(depth);
    return a;
  }
  a.input = RealInput::parse(spec);
  return a;
}

std::vector<AlphaSpec> parse_alpha_list(const std::string& text) {
  // split on commas; a poly:... fragment keeps swallowing commas until its
  // @lo,hi window is complete (exactly one comma after the @)
  std::vector<std::string> parts;
  std::istringstream is(text);
  std::string tok;
  auto poly_incomplete = [](const std::string& s) {
    if (s.rfind("poly:", 0) != 0) return false;
    auto at = s.find('@');
    if (at == std::string::npos) return true;
    return s.find(',', at) == std::string::npos;
  };
  while (std::getline(is, tok, ',')) {
    if (!parts.empty() && poly_incomplete(parts.back())) {
      parts.back() += "," + tok;
    } else {
      parts.push_back(tok);
    }
  }
  std::vector<AlphaSpec> out;
  for (const auto& p : parts) out.push_back(parse_alpha(p));
  if (out.empty()) throw std::invalid_argument("empty alpha list");
  return out;
}

RealSource AlphaSpec::source() const {
  if (input) return RealSource(*input);
  if (cf) return cf->as_source();
  throw std::logic_error("empty alpha spec");
}

namespace {

void embed_config(CsvBuilder& csv, const ExperimentConfig& cfg) {
  csv.comment("schema = collapse-lab/1");
  csv.comment("tool_version = " + std::string(tool_version()));
  std::istringstream is(cfg.normalized_text());
  std::string line;
  while (std::getline(is, line)) csv.comment(line);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(cfg.hash()));
  csv.comment(std::string("config_hash = ") + hash);
  std::time_t now = std::time(nullptr);
  char ts[64];
  std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  csv.comment(std::string("timestamp = ") + ts);
}

RunRecord run_cf(const ExperimentConfig& cfg) {
  RunRecord rec;
  auto alpha = parse_alpha(cfg.get("alpha"));
  int terms = cfg.get_int("terms", 20);
  ContinuedFraction cf = alpha.has_cf() ? *alpha.cf : cf_expand(*alpha.input, terms);
  CsvBuilder csv;
  embed_config(csv, cfg);
  csv.header({"n", "a_n", "p_n", "q_n"});
  nlohmann::json jl;
  std::ostringstream jsonl;
  for (size_t n = 0; n < cf.size(); ++n) {
    csv.row({std::to_string(n), cf.a[n].get_str(), cf.p[n].get_str(), cf.q[n].get_str()});
    nlohmann::json j{{"n", n},
                     {"a", cf.a[n].get_str()},
                     {"p", cf.p[n].get_str()},
                     {"q", cf.q[n].get_str()}};
    jsonl << j.dump() << "\n";
  }
  if (cf.truncated) csv.comment("truncated = true (input precision exhausted)");
  if (cf.finite) csv.comment("finite = true (rational value, exact expansion)");
  rec.csv = csv.str();
  rec.jsonl = jsonl.str();
  rec.row_count = cf.size();
  return rec;
}

RunRecord run_mu(const ExperimentConfig& cfg) {
  RunRecord rec;
  auto alpha = parse_alpha(cfg.get("alpha"));
  int terms = cfg.get_int("terms", 60);
  ContinuedFraction cf = alpha.has_cf() ? *alpha.cf : cf_expand(*alpha.input, terms);
  int tail = cfg.get_int("tail", static_cast<int>(cf.size()) / 3);
  MuEstimate est = mu_estimate(cf, tail);
  CsvBuilder csv;
  embed_config(csv, cfg);
  csv.header({"mu_hat", "ratio_min", "ratio_max", "alt_form", "tail_start", "terms"});
  csv.row({fmt_double(est.mu_hat), fmt_double(est.ratio_min), fmt_double(est.ratio_max),
           fmt_double(est.alt_form), std::to_string(est.tail_start),
           std::to_string(cf.size())});
  nlohmann::json j{{"mu_hat", est.mu_hat},       {"ratio_min", est.ratio_min},
                   {"ratio_max", est.ratio_max}, {"alt_form", est.alt_form},
                   {"tail_start", est.tail_start}, {"forms_agree", est.forms_agree}};
  rec.csv = csv.str();
  rec.jsonl = j.dump() + "\n";
  rec.row_count = 1;
  return rec;
}

RunRecord run_badapprox(const ExperimentConfig& cfg) {
  RunRecord rec;
  auto alphas = parse_alpha_list(cfg.get("alpha"));
  std::vector<RealSource> dirs;
  for (const auto& a : alphas) dirs.push_back(a.source());
  long Q = cfg.get_long("Q", 10000);
  int workers = resolve_workers(cfg.has("workers") ? std::optional<int>(cfg.get_int("workers", 1))
                                                   : std::nullopt);
  CsvBuilder csv;
  embed_config(csv, cfg);
  csv.header({"q", "dist", "quality"});
  std::ostringstream jsonl;
  size_t rows = 0;
  auto cert = badapprox_scan(dirs, Q, workers,
                             [&](long q, const Interval& dist, const Interval& quality) {
                               csv.row({std::to_string(q), fmt_real(dist.mid()),
                                        fmt_real(quality.mid())});
                               ++rows;
                             });
  csv.comment("min_quality = " + fmt_double(cert.min_quality));
  csv.comment("argmin_q = " + cert.argmin_q.get_str());
  nlohmann::json j{{"min_quality", cert.min_quality},
                   {"argmin_q", cert.argmin_q.get_str()},
                   {"exact_hit", cert.exact_hit},
                   {"Q", Q},
                   {"dim", cert.dim}};
  rec.csv = csv.str();
  rec.jsonl = jsonl.str() + j.dump() + "\n";
  rec.row_count = rows;
  return rec;
}

RunRecord run_collapse(const ExperimentConfig& cfg) {
  RunRecord rec;
  auto alphas = parse_alpha_list(cfg.get("alpha"));
  int k = cfg.get_int("k", static_cast<int>(alphas.size()) + 1);
  if (k != static_cast<int>(alphas.size()) + 1)
    throw std::invalid_argument("collapse: k must equal 1 + number of alpha components");
  std::vector<RealSource> dirs;
  for (const auto& a : alphas) dirs.push_back(a.source());
  mpq_class eps_min = parse_eps(cfg.get("eps_min", "2^-40"));
  mpq_class eps_max = parse_eps(cfg.get("eps_max", "2^-4"));
  ScanOptions opt;
  opt.per_octave = cfg.get_int("per_octave", 1);
  opt.workers = resolve_workers(cfg.has("workers") ? std::optional<int>(cfg.get_int("workers", 1))
                                                   : std::nullopt);
  opt.cf_subgrid = cfg.get_bool("cf_subgrid", false);
  if (opt.cf_subgrid) {
    if (alphas.size() != 1) throw std::invalid_argument("cf_subgrid needs a single alpha");
    ContinuedFraction cf =
        alphas[0].has_cf() ? *alphas[0].cf : cf_expand(*alphas[0].input, cfg.get_int("terms", 40));
    MuEstimate est = mu_estimate(cf, static_cast<int>(cf.size()) / 3);
    opt.cf = cf;
    opt.mu_hat = est.mu_hat;
  }
  auto grid = make_eps_grid(eps_min, eps_max, opt);
  auto rows = scan_collapse(k, dirs, grid, opt.workers);
  CsvBuilder csv;
  embed_config(csv, cfg);
  csv.header({"eps", "injrad", "diam_lo", "diam_hi", "vol", "dual_min", "exp_injrad", "exp_diam"});
  std::ostringstream jsonl;
  PlotSeries diam{"diam", {}}, injrad{"injrad", {}};
  for (const auto& r : rows) {
    csv.row({fmt_mpq(r.eps), fmt_real(r.injrad), fmt_real(r.diam_lo), fmt_real(r.diam_hi),
             fmt_real(r.vol), fmt_real(r.dual_min), fmt_double(r.exp_injrad),
             fmt_double(r.exp_diam)});
    nlohmann::json j{{"eps", fmt_mpq(r.eps)},
                     {"injrad", fmt_real(r.injrad)},
                     {"diam_lo", fmt_real(r.diam_lo)},
                     {"diam_hi", fmt_real(r.diam_hi)},
                     {"vol", fmt_real(r.vol)},
                     {"dual_min", fmt_real(r.dual_min)},
                     {"exp_injrad", r.exp_injrad},
                     {"exp_diam", r.exp_diam}};
    jsonl << j.dump() << "\n";
    double e = mpq_class(r.eps).get_d();
    if (e > 0) {
      diam.points.emplace_back(e, r.diam_hi.to_double());
      injrad.points.emplace_back(e, r.injrad.to_double());
    }
  }
  rec.series = {diam, injrad};
  double mu = opt.cf_subgrid ? opt.mu_hat : 2.0;
  rec.ref_slopes = {{"1/mu", 1.0 / mu}, {"1-1/mu", 1.0 - 1.0 / mu}, {"1/k", 1.0 / k}};
  rec.csv = csv.str();
  rec.jsonl = jsonl.str();
  rec.row_count = rows.size();
  return rec;
}

RunRecord run_spectrum(const ExperimentConfig& cfg) {
  RunRecord rec;
  auto alphas = parse_alpha_list(cfg.get("alpha"));
  int k = cfg.get_int("k", static_cast<int>(alphas.size()) + 1);
  mpq_class eps = parse_eps(cfg.get("eps", "1"));
  int p = cfg.get_int("p", 0);
  long count = cfg.get_long("count", 16);
  // rationalize the collapsed Gram at its working precision
  std::vector<RealSource> dirs;
  for (const auto& a : alphas) dirs.push_back(a.source());
  CollapsedMetric m = gram(k, dirs, eps);
  auto gm = m.gram_matrix();
  QMat q(k, std::vector<mpq_class>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) q[i][j] = gm[i][j].mid().to_mpq_exact();
  // symmetrize the rounded matrix
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      mpq_class avg = (q[i][j] + q[j][i]) / 2;
      q[i][j] = avg;
      q[j][i] = avg;
    }
  TorusSpectrum spec = torus_hodge_spectrum(RationalGram(q), p, count);
  CsvBuilder csv;
  embed_config(csv, cfg);
  csv.header({"index", "eigenvalue", "multiplicity"});
  std::ostringstream jsonl;
  long index = 0;
  for (const auto& l : spec.levels) {
    csv.row({std::to_string(index), fmt_double(l.eigenvalue), std::to_string(l.multiplicity)});
    nlohmann::json j{{"index", index},
                     {"eigenvalue", l.eigenvalue},
                     {"multiplicity", l.multiplicity},
                     {"normsq", fmt_mpq(l.normsq)}};
    jsonl << j.dump() << "\n";
    ++index;
  }
  rec.csv = csv.str();
  rec.jsonl = jsonl.str();
  rec.row_count = spec.levels.size();
  return rec;
}

RunRecord run_rayleigh(const ExperimentConfig& cfg) {
  RunRecord rec;
  double alpha = 1.0;
  std::string aspec = cfg.get("alpha", "1");
  if (aspec == "1") {
    alpha = 1.0;
  } else {
    AlphaSpec a = parse_alpha(aspec);
    alpha = a.source().eval(64).mid().to_double();
  }
  int N = cfg.get_int("N", 64);
  std::vector<double> epses;
  std::istringstream el(cfg.get("eps_list", "2^-1,2^-2,2^-3,2^-4,2^-5,2^-6,2^-7,2^-8"));
  std::string tok;
  while (std::getline(el, tok, ',')) epses.push_back(mpq_class(parse_eps(tok)).get_d());
  CsvBuilder csv;
  embed_config(csv, cfg);
  csv.header({"eps", "R_eps", "R1_times_eps2", "rel_gap"});
  std::ostringstream jsonl;
  PlotSeries pts{"R_eps", {}};
  for (double e : epses) {
    HopfRayleigh hr = hopf_rayleigh({alpha, e, N});
    csv.row({fmt_double(e), fmt_double(hr.R_eps), fmt_double(hr.factorized),
             fmt_double(hr.rel_gap)});
    nlohmann::json j{{"eps", e},
                     {"R_eps", hr.R_eps},
                     {"R1_times_eps2", hr.factorized},
                     {"rel_gap", hr.rel_gap}};
    jsonl << j.dump() << "\n";
    pts.points.emplace_back(e, hr.R_eps);
  }
  rec.series = {pts};
  rec.ref_slopes = {{"slope 2", 2.0}};
  rec.csv = csv.str();
  rec.jsonl = jsonl.str();
  rec.row_count = epses.size();
  return rec;
}

RunRecord run_profile(const ExperimentConfig& cfg) {
  RunRecord rec;
  const FlowProfile& f = lookup(cfg.get("name", "hopf-s3"));
  auto m = m_p(f);
  CsvBuilder csv;
  embed_config(csv, cfg);
  csv.header({"p", "h_p", "b_p", "m_p"});
  for (int p = 0; p <= f.n; ++p)
    csv.row({std::to_string(p), std::to_string(f.h_at(p)), std::to_string(f.b_at(p)),
             std::to_string(m[p])});
  rec.csv = csv.str();
  rec.jsonl = profile_to_json(f) + "\n";
  rec.row_count = f.n + 1;
  return rec;
}

}  // namespace

RunRecord run(const ExperimentConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  if (config.kind == "cf") {
    rec = run_cf(config);
  } else if (config.kind == "mu") {
    rec = run_mu(config);
  } else if (config.kind == "badapprox") {
    rec = run_badapprox(config);
  } else if (config.kind == "collapse") {
    rec = run_collapse(config);
  } else if (config.kind == "spectrum") {
    rec = run_spectrum(config);
  } else if (config.kind == "rayleigh") {
    rec = run_rayleigh(config);
  } else if (config.kind == "profile") {
    rec = run_profile(config);
  } else {
    throw std::invalid_argument("unknown experiment kind '" + config.kind + "'");
  }
  rec.config = config;
  rec.config_hash = config.hash();
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::string plot(const RunRecord& record, const std::string& title) {
  if (record.row_count < 2) throw std::invalid_argument("plot: run has fewer than 2 rows");
  if (record.series.empty()) throw std::invalid_argument("plot: this run kind has no plot series");
  PlotSpec spec;
  spec.title = title.empty() ? record.config.kind : title;
  spec.slopes = record.ref_slopes;
  return plot_loglog_svg(record.series, spec);
}

}  // namespace clab
