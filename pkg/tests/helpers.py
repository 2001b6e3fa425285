"""Shared values for the test modules."""

import time

from tpa.constants import thz_to_angular
from tpa.molecule import PAPER_OMEGA_BAR, paper_default_molecule

OMEGA_E = thz_to_angular(10.0)
WBAR = PAPER_OMEGA_BAR


def molecule(delta):
    return paper_default_molecule(PAPER_OMEGA_BAR, delta)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


_mc_cache = {}


def default_mc_report():
    """The 1e5-trajectory default run, shared by every module that needs it."""
    if "report" not in _mc_cache:
        from tpa.dephasing import OUParams
        from tpa.sweeps import DEFAULT_TAU_C, run_mc_report

        p = OUParams.impact_defaults(tau_c=DEFAULT_TAU_C)
        start = time.perf_counter()
        report = run_mc_report(p, 50)
        _mc_cache["seconds"] = time.perf_counter() - start
        _mc_cache["report"] = (p, report)
    return _mc_cache["report"]


def default_mc_seconds():
    default_mc_report()
    return _mc_cache["seconds"]
