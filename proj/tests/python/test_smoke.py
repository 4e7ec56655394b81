import json
import math

import collapse_lab as cl


def test_version():
    assert cl.__version__


def test_cf_and_mu():
    cf = cl.cf_expand("phi", terms=10)
    assert [t["a"] for t in cf["terms"]] == ["1"] * 10
    assert cf["terms"][4]["p"] == "8" and cf["terms"][4]["q"] == "5"

    est = cl.mu_estimate("phi", terms=60, tail=20)
    assert abs(est["mu_hat"] - 2.0) < 0.01

    est4 = cl.mu_estimate("mu:4@12", tail=4)
    assert abs(est4["mu_hat"] - 4.0) < 0.2


def test_badapprox():
    cert = cl.badapprox_scan(["sqrt:2"], Q=10000)
    assert cert["min_quality"] > 0.2
    hit = cl.badapprox_scan(["rat:1/2"], Q=10)
    assert hit["exact_hit"] and hit["argmin_q"] == "2"


def test_collapse_scan():
    out = cl.collapse_scan(["phi"], eps_min="2^-12", eps_max="2^-4")
    assert out["rows"] >= 9
    header = "eps,injrad,diam_lo,diam_hi,vol,dual_min,exp_injrad,exp_diam"
    assert header in out["csv"]


def test_spectrum_and_hopf():
    spec = cl.torus_spectrum(["sqrt:2"], k=2, p=0, eps="1", count=6)
    assert "index,eigenvalue,multiplicity" in spec["csv"]

    hr = cl.hopf_rayleigh(alpha=1.0, eps=0.25, N=64)
    assert abs(hr["R1"] - 4.0) < 1e-8
    assert hr["rel_gap"] < 1e-6
    assert abs(hr["R_eps"] - 0.25**2 * hr["R1"]) < 1e-9


def test_cohomology_profiles():
    assert "hopf-s3" in cl.catalog()
    assert cl.m_p("hopf-s3") == [0, 1, 1, 0]
    prof = json.loads(cl.profile("sphere-s5"))
    assert prof["m_p"] == [0, 1, 1, 1, 1, 0]
    assert prof["vanishing_pass"]


def test_numberfields():
    assert tuple(cl.signature("x^3-x-1")) == (1, 1)
    pell = cl.pell_unit(2)
    assert pell["norm_plus_one"] == "3 + 2t"
    units = cl.unit_search("x^2-2", bound=5)
    assert "3 + 2t" in units["positive_units"]
    apx = cl.appendix_check()
    assert apx["all_clauses_expected"]
    cert = cl.gv_check([[3, 2], [4, 3]], ["rat:1/1", "sqrt:2"])
    assert cert["member"]
    assert math.isclose(cert["lambda"], 3 + 2 * math.sqrt(2), rel_tol=1e-9)


def test_run_config_and_determinism():
    text = "kind = cf\nalpha = rat:355/113\nterms = 9\n"
    a = cl.run_config(text)
    b = cl.run_config(text)
    assert a["rows"] == 3
    assert a["config_hash"] == b["config_hash"]


def test_verify_subset():
    results = cl.verify_all(only=["AC-12"])
    assert len(results) == 1 and results[0]["pass"]
