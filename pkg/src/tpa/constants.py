"""Physical constants (SI) and the few unit conversions used across the package.

Every frequency and width inside the package is angular (rad/s). THz values are
ordinary frequencies and get converted once, at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

CONSTANTS_VERSION = "codata2018-pinned-1"

GM = 1e-58
"""One Goeppert Mayer unit in m^4 s / photon^2."""


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34
    eps0: float = 8.8541878128e-12
    c: float = 2.99792458e8
    elem_charge: float = 1.602176634e-19
    bohr_radius: float = 5.29177210903e-11

    def __post_init__(self) -> None:
        for name in ("hbar", "eps0", "c", "elem_charge", "bohr_radius"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def eps0_c(self) -> float:
        return self.eps0 * self.c


CONST = PhysicalConstants()


def thz_to_angular(f: float) -> float:
    """Ordinary frequency in THz -> angular frequency in rad/s."""
    return 2.0 * math.pi * f * 1e12


def to_goeppert_mayer(sigma: float) -> float:
    """Two-photon cross-section in m^4 s/photon^2 -> GM."""
    return sigma / GM
