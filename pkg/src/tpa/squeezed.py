"""CW degenerate squeezed light: photon statistics, cross-sections and rates.

The phase-matching function is flat over a band of width ``big_omega_e``
centred on the carrier, and the pump is monochromatic at twice the carrier.
With that model the one- and two-photon correlators reduce to products of
band indicators, so every cross-section becomes a 1D or 2D integral of an
imaginary part of R^i over the band.

Cross-sections do not depend on the squeezing strength or beam area, only on
(molecule, carrier, bandwidth, quadrature settings); they are cached on that
key and reused across intensity grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .coherent import RateBreakdown
from .constants import CONST
from .lineshape import broadening_offsets
from .molecule import DomainError, MoleculeParams
from .quadrature import QuadratureSpec, QuadResult, Rectangle, integrate_1d, integrate_2d

VARIANTS = ("I", "II")


@dataclass(frozen=True)
class SqueezedParams:
    """Squeezed beam: carrier, band width Omega_e, |beta_0| and beam area."""

    omega_bar: float
    big_omega_e: float
    beta0_mag: float
    area: float

    def __post_init__(self) -> None:
        if not self.big_omega_e > 0:
            raise DomainError("big_omega_e must be positive")
        if self.beta0_mag < 0:
            raise DomainError("beta0_mag must be non-negative")
        if not self.area > 0:
            raise DomainError("area must be positive")

    @property
    def t_e(self) -> float:
        """Entanglement time 2 pi / Omega_e."""
        return 2.0 * math.pi / self.big_omega_e

    @property
    def n_te(self) -> float:
        """Mean photon number within one entanglement time."""
        return math.sinh(self.beta0_mag) ** 2

    @classmethod
    def from_intensity(cls, omega_bar: float, big_omega_e: float, intensity: float, area: float) -> "SqueezedParams":
        """Pick |beta_0| so that the beam carries ``intensity``."""
        if intensity < 0:
            raise DomainError("intensity must be non-negative")
        i_vac = CONST.hbar * omega_bar * big_omega_e / (2.0 * math.pi * area)
        return cls(omega_bar, big_omega_e, math.asinh(math.sqrt(intensity / i_vac)), area)


def s_c_factors(p: SqueezedParams, omega: float) -> tuple[float, float]:
    if abs(omega - p.omega_bar) <= 0.5 * p.big_omega_e:
        return math.sinh(p.beta0_mag), math.cosh(p.beta0_mag)
    return 0.0, 1.0


def vacuum_intensity(p: SqueezedParams) -> float:
    """One photon per area per entanglement time, in W/m^2."""
    return CONST.hbar * p.omega_bar / (p.area * p.t_e)


def squeezed_intensity(p: SqueezedParams) -> float:
    return vacuum_intensity(p) * p.n_te


def g2_time(p: SqueezedParams, tau):
    n = p.n_te
    if n <= 0:
        raise DomainError("g2 is undefined for the vacuum (N_Te == 0)")
    return 1.0 + (2.0 + 1.0 / n) * np.sinc(np.asarray(tau) / p.t_e) ** 2


def g2_freq(p: SqueezedParams, w1: float, w2, pump_bw: float):
    """Frequency-resolved g2 for a pump of finite bandwidth ``pump_bw``."""
    if pump_bw <= 0:
        raise DomainError("pump bandwidth must be positive")
    s, c = s_c_factors(p, w1)
    if s == 0:
        raise DomainError("w1 lies outside the squeezed band (or the state is vacuum)")
    w2 = np.asarray(w2, dtype=float)
    # np.sinc(x) = sin(pi x)/(pi x)
    cross = (c / s) ** 2 * np.sinc((w1 + w2 - 2.0 * p.omega_bar) / pump_bw) ** 2
    return cross + 1.0 + np.sinc((w1 - w2) / pump_bw) ** 2


# -- cross-sections -----------------------------------------------------------

def _ridge_offsets(m: MoleculeParams, omega_bar: float, half: float) -> tuple[float, ...]:
    """Band offsets where some Q factor of the integrands is resonant."""
    de = m.omega_eg - omega_bar
    df = m.omega_fe - omega_bar
    pts = {de, -de, df, -df}
    return tuple(sorted(x for x in pts if -half < x < half))


def _integrand_2d(i: int, variant: str, m: MoleculeParams, omega_bar: float, norm: float):
    if variant == "I":
        def f(u1, u2):
            return norm * np.imag(broadening_offsets(i, m, omega_bar, u1, -u1, u2, -u2))
    elif variant == "II":
        def f(u1, u2):
            r = broadening_offsets(i, m, omega_bar, u1, u2, u2, u1)
            r = r + broadening_offsets(i, m, omega_bar, u1, u2, u1, u2)
            return 0.5 * norm * np.imag(r)
    else:
        raise DomainError(f"variant must be 'I' or 'II', got {variant!r}")
    return f


def sq_integrand(i: int, variant: str, m: MoleculeParams, p: SqueezedParams):
    """The normalised integrand f(u1, u2) over the band square, offsets in rad/s."""
    return _integrand_2d(i, variant, m, p.omega_bar, 1.0 / p.big_omega_e**2)


def band_square(p: SqueezedParams) -> Rectangle:
    h = 0.5 * p.big_omega_e
    return Rectangle(-h, h, -h, h)


@lru_cache(maxsize=8192)
def _sigma1(m: MoleculeParams, omega_bar: float, big_omega_e: float, quad: QuadratureSpec) -> QuadResult:
    half = 0.5 * big_omega_e
    norm = 1.0 / big_omega_e

    def f(u):
        return norm * np.imag(broadening_offsets(1, m, omega_bar, u))

    spec = quad.with_splits(_ridge_offsets(m, omega_bar, half))
    return integrate_1d(f, -half, half, spec)


@lru_cache(maxsize=65536)
def _sigma2d(i: int, variant: str, m: MoleculeParams, omega_bar: float, big_omega_e: float,
             quad: QuadratureSpec) -> QuadResult:
    half = 0.5 * big_omega_e
    f = _integrand_2d(i, variant, m, omega_bar, 1.0 / big_omega_e**2)
    ridges = _ridge_offsets(m, omega_bar, half)
    spec = quad.with_splits(ridges, ridges)
    return integrate_2d(f, Rectangle(-half, half, -half, half), spec)


def _check_index(i: int) -> None:
    if i not in (2, 3, 4, 5):
        raise DomainError(f"two-photon cross-section index must be 2..5, got {i}")


def sq_sigma1(m: MoleculeParams, p: SqueezedParams, quad: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    """Band-averaged Im R^1, in m^2."""
    return _sigma1(m, p.omega_bar, p.big_omega_e, quad)


def sq_cross_section_I(i: int, m: MoleculeParams, p: SqueezedParams,
                       quad: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    """Anti-correlated (w1 + w2 = 2 omega_bar) part of the pair correlator."""
    _check_index(i)
    return _sigma2d(i, "I", m, p.omega_bar, p.big_omega_e, quad)


def sq_cross_section_II(i: int, m: MoleculeParams, p: SqueezedParams,
                        quad: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    """Average of the two frequency-conserving (w1 = w4 / w1 = w3) pairings."""
    _check_index(i)
    return _sigma2d(i, "II", m, p.omega_bar, p.big_omega_e, quad)


def sq_cross_section(i: int, variant: str, m: MoleculeParams, p: SqueezedParams,
                     quad: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    if variant == "I":
        return sq_cross_section_I(i, m, p, quad)
    if variant == "II":
        return sq_cross_section_II(i, m, p, quad)
    raise DomainError(f"variant must be 'I' or 'II', got {variant!r}")


@dataclass(frozen=True)
class SqueezedCrossSections:
    sigma1: QuadResult
    sigma_I: dict
    sigma_II: dict

    @property
    def two_photon_I(self) -> float:
        return sum(self.sigma_I[i].value for i in (3, 4, 5))

    @property
    def two_photon_II(self) -> float:
        return sum(self.sigma_II[i].value for i in (3, 4, 5))


def sq_cross_sections(m: MoleculeParams, p: SqueezedParams,
                      quad: QuadratureSpec = QuadratureSpec()) -> SqueezedCrossSections:
    return SqueezedCrossSections(
        sigma1=sq_sigma1(m, p, quad),
        sigma_I={i: sq_cross_section_I(i, m, p, quad) for i in (2, 3, 4, 5)},
        sigma_II={i: sq_cross_section_II(i, m, p, quad) for i in (2, 3, 4, 5)},
    )


def assemble_rates(xs: SqueezedCrossSections, intensity: float, i_vac: float) -> RateBreakdown:
    """Rates at one intensity from precomputed cross-sections.

    Note the one-photon group keeps the sigma^2 (saturation) terms even
    though they grow as intensity squared.
    """
    lin = intensity * (i_vac + intensity)
    quad = 2.0 * intensity * intensity
    a = [intensity * xs.sigma1.value]
    for i in (2, 3, 4, 5):
        a.append(lin * xs.sigma_I[i].value + quad * xs.sigma_II[i].value)
    return RateBreakdown.from_terms(*a)


def sq_rates(m: MoleculeParams, p: SqueezedParams, quad: QuadratureSpec = QuadratureSpec()) -> RateBreakdown:
    intensity = squeezed_intensity(p)
    if intensity == 0:
        return RateBreakdown.from_terms(0.0, 0.0, 0.0, 0.0, 0.0)
    return assemble_rates(sq_cross_sections(m, p, quad), intensity, vacuum_intensity(p))


def clear_cache() -> None:
    _sigma1.cache_clear()
    _sigma2d.cache_clear()
