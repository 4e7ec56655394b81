"""Collapsed riemannian flows at desk scale.

Python surface over the C++ core: continued fractions and irrationality
exponents, badly-approximable scans, collapsed flat-torus geometry, exact
torus Hodge spectra, the Hopf-flow Rayleigh quotient, flow cohomology
profiles, and number-field symmetry groups.
"""

from _core import (  # noqa: F401
    __version__,
    appendix_check,
    badapprox_scan,
    catalog,
    cf_expand,
    collapse_scan,
    gv_check,
    hopf_rayleigh,
    m_p,
    mu_estimate,
    pell_unit,
    profile,
    run_config,
    signature,
    torus_spectrum,
    unit_search,
    verify_all,
)

__all__ = [
    "appendix_check",
    "badapprox_scan",
    "catalog",
    "cf_expand",
    "collapse_scan",
    "gv_check",
    "hopf_rayleigh",
    "m_p",
    "mu_estimate",
    "pell_unit",
    "profile",
    "run_config",
    "signature",
    "torus_spectrum",
    "unit_search",
    "verify_all",
]
