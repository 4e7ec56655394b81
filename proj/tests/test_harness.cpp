#include <doctest.h>

#include <stdexcept>
#include "clab/acceptance.hpp"
#include "clab/csv.hpp"
#include "clab/harness.hpp"
#include "clab/svg.hpp"

using namespace clab;

TEST_CASE("config parsing rejects unknown and malformed keys by line") {
  CHECK_THROWS_WITH_AS(ExperimentConfig::parse("kind = cf\nwat = 1\n"),
                       doctest::Contains("line 2"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(ExperimentConfig::parse("kind = cf\nterms 20\n"),
                       doctest::Contains("line 2"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(ExperimentConfig::parse("alpha = phi\n"), doctest::Contains("kind"),
                       std::invalid_argument);
  CHECK_THROWS(ExperimentConfig::parse("kind = cf\nkind = mu\n"));
  auto cfg = ExperimentConfig::parse("# comment\nkind = cf\nalpha = phi\nterms = 8\n");
  CHECK(cfg.kind == "cf");
  CHECK(cfg.get_int("terms", 0) == 8);
}

TEST_CASE("config hash is stable under reordering") {
  auto a = ExperimentConfig::parse("kind = cf\nalpha = phi\nterms = 8\n");
  auto b = ExperimentConfig::parse("terms = 8\nalpha = phi\nkind = cf\n");
  CHECK(a.hash() == b.hash());
}

TEST_CASE("eps grammar") {
  CHECK(parse_eps("2^-4") == mpq_class(1, 16));
  CHECK(parse_eps("0.25") == mpq_class(1, 4));
  CHECK(parse_eps("3/8") == mpq_class(3, 8));
  CHECK(parse_eps("1") == 1);
}

TEST_CASE("alpha grammar and list splitting") {
  auto single = parse_alpha("sqrt:2");
  CHECK(single.input.has_value());
  auto constructed = parse_alpha("mu:3@10");
  CHECK(constructed.has_cf());
  CHECK(constructed.cf->size() == 11);

  auto list = parse_alpha_list("poly:-2,0,0,1@1,2,poly:-4,0,0,1@1,2");
  REQUIRE(list.size() == 2);
  CHECK(list[0].input.has_value());
  CHECK(list[1].input.has_value());
  auto mixed = parse_alpha_list("phi,sqrt:2");
  REQUIRE(mixed.size() == 2);
}

TEST_CASE("runs are deterministic modulo the timestamp line") {
  auto cfg = ExperimentConfig::from_pairs(
      "collapse",
      {{"alpha", "phi"}, {"eps_min", "2^-10"}, {"eps_max", "2^-4"}, {"per_octave", "1"}});
  auto r1 = run(cfg);
  auto r2 = run(cfg);
  CHECK(strip_timestamp(r1.csv) == strip_timestamp(r2.csv));
  CHECK(r1.config_hash == r2.config_hash);
  CHECK(r1.csv.find("# config_hash") != std::string::npos);
  CHECK(r1.csv.find("eps,injrad,diam_lo,diam_hi,vol,dual_min,exp_injrad,exp_diam") !=
        std::string::npos);
}

TEST_CASE("cf and badapprox runs carry the documented schemas") {
  auto cf = run(ExperimentConfig::from_pairs("cf", {{"alpha", "rat:355/113"}, {"terms", "9"}}));
  CHECK(cf.csv.find("n,a_n,p_n,q_n") != std::string::npos);
  CHECK(cf.csv.find("355,113") != std::string::npos);
  CHECK(cf.row_count == 3);

  auto bad = run(ExperimentConfig::from_pairs("badapprox", {{"alpha", "sqrt:2"}, {"Q", "20"}}));
  CHECK(bad.csv.find("q,dist,quality") != std::string::npos);
  CHECK(bad.row_count == 20);

  auto ray = run(ExperimentConfig::from_pairs(
      "rayleigh", {{"alpha", "1"}, {"N", "32"}, {"eps_list", "2^-1,2^-2"}}));
  CHECK(ray.csv.find("eps,R_eps,R1_times_eps2,rel_gap") != std::string::npos);

  auto spec = run(ExperimentConfig::from_pairs(
      "spectrum", {{"alpha", "sqrt:2"}, {"k", "2"}, {"p", "0"}, {"eps", "1"}, {"count", "6"}}));
  CHECK(spec.csv.find("index,eigenvalue,multiplicity") != std::string::npos);

  CHECK_THROWS(run(ExperimentConfig::from_pairs("bogus", {})));
}

TEST_CASE("plots emit svg with reference slopes, refuse single rows") {
  auto cfg = ExperimentConfig::from_pairs(
      "collapse",
      {{"alpha", "phi"}, {"eps_min", "2^-8"}, {"eps_max", "2^-4"}, {"per_octave", "1"}});
  auto rec = run(cfg);
  std::string svg = plot(rec);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("1/mu") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  PlotSeries s{"x", {{1.0, 2.0}}};
  CHECK_THROWS(plot_loglog_svg({s}, PlotSpec{}));
}

TEST_CASE("acceptance filtering") {
  auto res = run_acceptance({"AC-12"}, 1);
  REQUIRE(res.size() == 1);
  CHECK(res[0].id == "AC-12");
  CHECK(res[0].pass);
}

TEST_CASE("formatting is locale-free and fixed-width") {
  CHECK(fmt_double(0.25) == "0.25");
  CHECK(fmt_double(1.0 / 3.0, 6) == "0.333333");
  CHECK(fmt_mpq(mpq_class(1, 16)) == "0.0625");
}
