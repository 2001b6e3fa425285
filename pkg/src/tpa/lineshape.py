"""Resonant denominators and the five broadening functions R^1..R^5.

The four-frequency functions take their arguments in correlator order,
``<a+(w4) a+(w3) a(w2) a(w1)>``; they are not symmetric under exchange.
All functions broadcast over numpy arrays.

Internally everything is evaluated in offsets ``u = w - omega_bar`` so that
quadrature over a band a few THz wide around an optical carrier does not
lose digits to cancellation.
"""

from __future__ import annotations

import numpy as np

from .constants import CONST
from .molecule import DomainError, MoleculeParams


def q(omega_ij, gamma_ij, omega):
    """Q_ij(w) = w_ij - w - i gamma_ij."""
    return (omega_ij - omega) - 1j * gamma_ij


def _r_ee_offset(m: MoleculeParams, omega):
    return (-omega - 2j * m.gamma_eg) / (-omega - 1j * m.gamma_ee)


def r_ee(m: MoleculeParams, omega):
    """Population/excited-coherence factor R_ee(w); identically 1 without dephasing."""
    return _r_ee_offset(m, omega)


def prefactor(omega_bar: float) -> float:
    """hbar * omega_bar / (eps0 c), the unit-bearing factor shared by every R^i."""
    return CONST.hbar * omega_bar / CONST.eps0_c


def broadening_offsets(i: int, m: MoleculeParams, omega_bar: float, u1, u2=0.0, u3=0.0, u4=0.0):
    """R^i with every frequency given as an offset from ``omega_bar``."""
    k = prefactor(omega_bar)
    det_eg = m.omega_eg - omega_bar
    det_fe = m.omega_fe - omega_bar
    det_fg = m.omega_fg - 2.0 * omega_bar
    if i == 1:
        return k * m.d_eg**2 / q(det_eg, m.gamma_eg, u1)
    kk = k / CONST.eps0_c
    d4 = (m.d_fe * m.d_eg) ** 2
    if i == 2:
        den = q(det_eg, m.gamma_eg, u4) * np.conj(q(det_eg, m.gamma_eg, u3)) * q(det_eg, m.gamma_eg, u2)
        return -kk * m.d_eg**4 * _r_ee_offset(m, u2 - u3) / den
    if i == 3:
        den = q(det_eg, m.gamma_eg, u4) * q(det_fg, m.gamma_fg, u1 + u2) * q(det_eg, m.gamma_eg, u2)
        return 0.5 * kk * d4 / den
    if i == 4:
        den = q(det_fe, m.gamma_fe, u4) * np.conj(q(det_eg, m.gamma_eg, u3)) * q(det_eg, m.gamma_eg, u2)
        return 0.5 * kk * d4 * _r_ee_offset(m, u2 - u3) / den
    if i == 5:
        den = q(det_fe, m.gamma_fe, u4) * q(det_fg, m.gamma_fg, u1 + u2) * q(det_eg, m.gamma_eg, u2)
        return -0.5 * kk * d4 / den
    raise DomainError(f"broadening index must be 1..5, got {i}")


def broadening(i: int, m: MoleculeParams, omega_bar: float, w1, w2=None, w3=None, w4=None):
    """R^i(w1, w2, w3, w4) at absolute angular frequencies.

    For ``i == 1`` only ``w1`` is read.  Missing arguments for ``i >= 2``
    default to ``omega_bar``.
    """
    u = [0.0 if w is None else w - omega_bar for w in (w1, w2, w3, w4)]
    return broadening_offsets(i, m, omega_bar, *u)
