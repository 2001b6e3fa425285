"""Three-level molecule g -> e -> f, parameterised by angular frequencies and widths."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

from .constants import CONST, thz_to_angular


class DomainError(ValueError):
    """Raised when an operation is called outside its domain of validity."""


@dataclass(frozen=True)
class MoleculeParams:
    """Transition frequencies, total widths and hbar-scaled dipole elements.

    ``gamma_bar_eg`` is the population-decay part of ``gamma_eg``; the
    difference is pure dephasing.  ``d_eg``/``d_fe`` are projections of the
    dipole moments on the field polarization divided by hbar (C m / (J s)).
    """

    omega_eg: float
    omega_fe: float
    gamma_eg: float
    gamma_fe: float
    gamma_fg: float
    gamma_bar_eg: float
    d_eg: float
    d_fe: float

    @property
    def omega_fg(self) -> float:
        return self.omega_eg + self.omega_fe

    @property
    def gamma_ee(self) -> float:
        # no dephasing on a population; decay of e counted from both sides
        return 2.0 * self.gamma_bar_eg

    def detuning(self, omega_bar: float) -> float:
        """delta = omega_eg - omega_bar."""
        return self.omega_eg - omega_bar

    def to_dict(self) -> dict[str, float]:
        return asdict(self)

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


@dataclass(frozen=True)
class BeamContext:
    omega_bar: float
    delta: float

    @classmethod
    def of(cls, m: MoleculeParams, omega_bar: float) -> "BeamContext":
        return cls(omega_bar=omega_bar, delta=m.detuning(omega_bar))

    def two_photon_resonant(self, m: MoleculeParams, rtol: float = 1e-9) -> bool:
        return abs(m.omega_fg - 2.0 * self.omega_bar) <= rtol * m.omega_fg


PAPER_GAMMA_FG = thz_to_angular(1.0)
PAPER_GAMMA_FE = thz_to_angular(1.0)
PAPER_GAMMA_EG = thz_to_angular(0.01)
PAPER_OMEGA_BAR = thz_to_angular(357.0)
PAPER_DIPOLE = CONST.elem_charge * CONST.bohr_radius / CONST.hbar


def paper_default_molecule(omega_bar: float, delta: float) -> MoleculeParams:
    """Dye-like molecule held on two-photon resonance with a drive at ``omega_bar``.

    The intermediate level sits at ``omega_bar + delta`` and the upper
    transition at ``omega_bar - delta``, so ``omega_fg == 2 * omega_bar``.
    """
    if not (math.isfinite(omega_bar) and omega_bar > 0):
        raise DomainError("omega_bar must be positive")
    if not (math.isfinite(delta) and abs(delta) < omega_bar):
        raise DomainError("|delta| must be smaller than omega_bar")
    return MoleculeParams(
        omega_eg=omega_bar + delta,
        omega_fe=omega_bar - delta,
        gamma_eg=PAPER_GAMMA_EG,
        gamma_fe=PAPER_GAMMA_FE,
        gamma_fg=PAPER_GAMMA_FG,
        gamma_bar_eg=PAPER_GAMMA_EG,
        d_eg=PAPER_DIPOLE,
        d_fe=PAPER_DIPOLE,
    )


def validate(m: MoleculeParams) -> list[str]:
    """Return a list of violated invariants; empty means the molecule is usable."""
    problems = []
    for name in MoleculeParams.field_names():
        if not math.isfinite(getattr(m, name)):
            problems.append(f"{name} must be finite")
    if problems:
        return problems
    for name in ("gamma_eg", "gamma_fe", "gamma_fg", "gamma_bar_eg"):
        if getattr(m, name) <= 0:
            problems.append(f"{name} must be positive")
    if m.gamma_bar_eg > m.gamma_eg:
        problems.append("gamma_bar_eg exceeds gamma_eg")
    if m.omega_eg <= 0:
        problems.append("omega_eg must be positive")
    if m.omega_fe <= 0:
        problems.append("omega_fe must be positive")
    if m.d_eg == 0:
        problems.append("d_eg must be nonzero")
    if m.d_fe == 0:
        problems.append("d_fe must be nonzero")
    return problems
