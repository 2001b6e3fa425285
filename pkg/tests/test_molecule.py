import dataclasses
import math

import pytest
from hypothesis import given, strategies as st

from tpa.molecule import (
    PAPER_GAMMA_EG,
    BeamContext,
    DomainError,
    MoleculeParams,
    paper_default_molecule,
    validate,
)

from helpers import WBAR


def test_defaults_at_zero_detuning():
    m = paper_default_molecule(2.2431e15, 0.0)
    assert m.omega_eg == m.omega_fe == 2.2431e15
    assert m.gamma_eg == pytest.approx(6.2832e10, rel=5e-5)
    # e a0 / hbar worked out by hand from the pinned CODATA values
    assert m.d_eg == pytest.approx(1.602176634e-19 * 5.29177210903e-11 / 1.054571817e-34, rel=1e-15)
    assert m.d_eg == pytest.approx(8.0396e4, rel=5e-5)
    assert validate(m) == []


def test_quarter_detuning():
    m = paper_default_molecule(2.2431e15, 2.2431e15 / 4)
    assert m.omega_eg == pytest.approx(2.8039e15, rel=5e-5)


def test_paper_widths():
    m = paper_default_molecule(WBAR, 1e12)
    assert m.gamma_fg == pytest.approx(2 * math.pi * 1e12)
    assert m.gamma_fe == pytest.approx(2 * math.pi * 1e12)
    assert m.gamma_bar_eg == m.gamma_eg == PAPER_GAMMA_EG
    assert m.gamma_ee == 2 * m.gamma_bar_eg


@pytest.mark.parametrize("wbar, delta", [(-1.0, 0.0), (0.0, 0.0), (WBAR, WBAR), (WBAR, math.nan)])
def test_default_molecule_domain(wbar, delta):
    with pytest.raises(DomainError):
        paper_default_molecule(wbar, delta)


def test_validate_negative_width():
    m = dataclasses.replace(paper_default_molecule(WBAR, 0.0), gamma_eg=-1.0)
    assert "gamma_eg must be positive" in validate(m)


def test_validate_dephasing_split():
    m = paper_default_molecule(WBAR, 0.0)
    m = dataclasses.replace(m, gamma_bar_eg=2 * m.gamma_eg)
    assert validate(m) == ["gamma_bar_eg exceeds gamma_eg"]


def test_validate_nonfinite_and_zero_dipole():
    m = paper_default_molecule(WBAR, 0.0)
    assert validate(dataclasses.replace(m, omega_fe=math.inf)) == ["omega_fe must be finite"]
    assert validate(dataclasses.replace(m, d_fe=0.0)) == ["d_fe must be nonzero"]


def test_round_trip_dict():
    m = paper_default_molecule(WBAR, 3e12)
    assert MoleculeParams(**m.to_dict()) == m
    assert MoleculeParams.field_names()[0] == "omega_eg"


@given(st.floats(-0.99, 0.99))
def test_default_molecule_two_photon_resonant(x):
    m = paper_default_molecule(WBAR, x * WBAR)
    assert m.omega_eg + m.omega_fe == 2 * WBAR or abs(m.omega_fg - 2 * WBAR) <= 4 * math.ulp(WBAR)
    assert BeamContext.of(m, WBAR).two_photon_resonant(m)
    assert validate(m) == []


@given(st.floats(1e12, 1e16), st.floats(1e12, 1e16))
def test_omega_fg_is_sum(a, b):
    m = dataclasses.replace(paper_default_molecule(WBAR, 0.0), omega_eg=a, omega_fe=b)
    assert m.omega_fg == a + b


def test_detuning_sign():
    m = paper_default_molecule(WBAR, 5e12)
    assert m.detuning(WBAR) == pytest.approx(5e12, rel=1e-3)
    assert BeamContext.of(m, WBAR).delta > 0
