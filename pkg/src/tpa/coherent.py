"""CW coherent drive: exact rate terms, far-detuned limit, cross-sections.

Rates are energy removed per molecule per unit time (W).  The one-photon
group is ``a1 + a2`` and the two-photon group ``a3 + a4 + a5``.  Close to the
intermediate resonance that split is a bookkeeping convention rather than a
clean physical separation; ``a3`` changes sign at ``delta == gamma_eg``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .constants import CONST, to_goeppert_mayer
from .lineshape import broadening_offsets, prefactor
from .molecule import DomainError, MoleculeParams

VALIDITY_RATIO = 0.1


@dataclass(frozen=True)
class CoherentBeam:
    omega_bar: float
    intensity: float
    area: float

    def __post_init__(self) -> None:
        if self.intensity < 0:
            raise DomainError("intensity must be non-negative")
        if self.area <= 0:
            raise DomainError("area must be positive")

    @property
    def flux(self) -> float:
        """Photons per unit area per unit time."""
        return self.intensity / (CONST.hbar * self.omega_bar)


@dataclass(frozen=True)
class RateBreakdown:
    a1: float
    a2: float
    a3: float
    a4: float
    a5: float
    one_photon: float
    two_photon: float
    perturbation_valid: bool

    @classmethod
    def from_terms(cls, a1, a2, a3, a4, a5) -> "RateBreakdown":
        a1, a2, a3, a4, a5 = (float(a) for a in (a1, a2, a3, a4, a5))
        return cls(
            a1=a1,
            a2=a2,
            a3=a3,
            a4=a4,
            a5=a5,
            one_photon=a1 + a2,
            two_photon=a3 + a4 + a5,
            perturbation_valid=_valid(a1, a2),
        )

    @property
    def terms(self) -> tuple[float, float, float, float, float]:
        return (self.a1, self.a2, self.a3, self.a4, self.a5)

    def to_dict(self) -> dict:
        return asdict(self)


def _valid(a1: float, a2: float) -> bool:
    return abs(a2) <= VALIDITY_RATIO * abs(a1)


def perturbation_valid(rates: RateBreakdown) -> bool:
    """Third-order expansion is trusted when the saturation term is at most 10% of a1."""
    return _valid(rates.a1, rates.a2)


def closed_form_cross_sections(m: MoleculeParams, omega_bar: float) -> tuple[float, ...]:
    """sigma^1..sigma^5 from the expanded real-valued expressions (no resonance assumption)."""
    k = prefactor(omega_bar)
    e0c = CONST.eps0_c
    d_eg2 = m.d_eg**2
    d4 = (m.d_eg * m.d_fe) ** 2
    de = m.omega_eg - omega_bar
    df = m.omega_fe - omega_bar
    dfg = m.omega_fg - 2.0 * omega_bar
    ge, gf, gfg = m.gamma_eg, m.gamma_fe, m.gamma_fg
    le = de**2 + ge**2
    lf = df**2 + gf**2
    lfg = dfg**2 + gfg**2

    s1 = k * d_eg2 * ge / le
    s2 = -(d_eg2**2 / e0c**2) * (CONST.hbar * omega_bar / m.gamma_bar_eg) * ge**2 / le**2
    s3 = (d4 * k / (2 * e0c)) * (de**2 * gfg + 2 * de * dfg * ge - gfg * ge**2) / (le**2 * lfg)
    s4 = (d4 / (2 * e0c**2)) * (CONST.hbar * omega_bar / m.gamma_bar_eg) * (ge / le) * (gf / lf)
    s5 = (d4 * k / (2 * e0c)) * (ge * gf * gfg - de * df * gfg - dfg * (de * gf + df * ge)) / (le * lf * lfg)
    return (s1, s2, s3, s4, s5)


def coherent_cross_sections(m: MoleculeParams, omega_bar: float) -> tuple[float, ...]:
    """sigma^i = Im R^i evaluated with every frequency at the carrier.

    sigma^1 is in m^2, sigma^2..sigma^5 in m^2 / (W/m^2).
    """
    return tuple(float(np.imag(broadening_offsets(i, m, omega_bar, 0.0, 0.0, 0.0, 0.0))) for i in range(1, 6))


def coherent_rates(m: MoleculeParams, beam: CoherentBeam) -> RateBreakdown:
    s1, s2, s3, s4, s5 = closed_form_cross_sections(m, beam.omega_bar)
    i1 = beam.intensity
    i2 = i1 * i1
    return RateBreakdown.from_terms(i1 * s1, i2 * s2, i2 * s3, i2 * s4, i2 * s5)


def far_detuned_rates(m: MoleculeParams, beam: CoherentBeam) -> RateBreakdown:
    """Leading-order rates for |delta| >> widths on exact two-photon resonance."""
    wb = beam.omega_bar
    if abs(m.omega_fg - 2.0 * wb) > 1e-9 * m.omega_fg:
        raise DomainError("far-detuned rates need 2*omega_bar == omega_fg")
    delta = m.omega_eg - wb
    if delta == 0:
        raise DomainError("far-detuned rates need a nonzero detuning")
    k = prefactor(wb)
    e0c = CONST.eps0_c
    d4 = (m.d_eg * m.d_fe) ** 2
    hw_over_gbar = CONST.hbar * wb / m.gamma_bar_eg
    d2, d4_ = delta**2, delta**4
    i1 = beam.intensity
    i2 = i1 * i1
    a1 = i1 * k * m.d_eg**2 * m.gamma_eg / d2
    a2 = -i2 * (m.d_eg**4 / e0c**2) * hw_over_gbar * m.gamma_eg**2 / d4_
    a3 = i2 * (d4 * k / (2 * e0c)) / (d2 * m.gamma_fg)
    a4 = i2 * (d4 / (2 * e0c**2)) * hw_over_gbar * m.gamma_eg * m.gamma_fe / d4_
    return RateBreakdown.from_terms(a1, a2, a3, a4, a3)


def gm_2pa_cross_section(m: MoleculeParams, omega_bar: float, delta: float) -> float:
    """Far-detuned two-photon cross-section in Goeppert Mayer units."""
    if delta == 0:
        raise DomainError("two-photon cross-section diverges at delta == 0")
    hw = CONST.hbar * omega_bar
    sigma = 0.5 * (m.d_fe * m.d_eg) ** 2 / CONST.eps0_c**2 * hw**2 / (delta**2 * m.gamma_fg)
    return to_goeppert_mayer(sigma)
