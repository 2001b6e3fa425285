"""(delta, intensity) sweeps, figure presets and deterministic CSV/JSON output."""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .coherent import CoherentBeam, RateBreakdown, coherent_cross_sections, coherent_rates
from .constants import CONST, CONSTANTS_VERSION, thz_to_angular
from .dephasing import OUParams, kernel_analytic, kernel_impact, kernel_mc
from .molecule import PAPER_OMEGA_BAR, MoleculeParams, paper_default_molecule, validate
from .quadrature import QuadratureError, QuadratureSpec
from .squeezed import (
    SqueezedCrossSections,
    SqueezedParams,
    assemble_rates,
    g2_freq,
    g2_time,
    sq_cross_sections,
    vacuum_intensity,
)

SWEEP_HEADER = (
    "delta_rad_s", "intensity_W_m2", "a1_W", "a2_W", "a3_W", "a4_W", "a5_W",
    "one_photon_W", "two_photon_W", "perturbation_valid",
)
MC_HEADER = ("t_s", "abs_kernel_mc", "stderr", "kernel_analytic", "kernel_impact")

PAPER_AREA = 2.24e-13
PAPER_BIG_OMEGA_E = thz_to_angular(10.0)

FIGURE_PRESETS = ("fig5", "fig6", "fig8", "fig9", "fig10", "fig11", "fig12", "fig13", "fig14", "fig15", "fig16")
PRESETS = FIGURE_PRESETS + ("g2", "mc")


class ConfigError(ValueError):
    pass


class SweepError(RuntimeError):
    """A grid point could not be evaluated; carries the offending detuning."""

    def __init__(self, message: str, delta: float):
        super().__init__(f"{message} at delta = {delta:.6e} rad/s")
        self.delta = delta


# -- configuration ------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    min: float
    max: float
    points: int
    spacing: str = "log"

    def __post_init__(self) -> None:
        if self.points < 1:
            raise ConfigError("grid needs at least one point")
        if not self.min < self.max:
            raise ConfigError("grid needs min < max")
        if self.spacing not in ("log", "linear"):
            raise ConfigError(f"spacing must be 'log' or 'linear', got {self.spacing!r}")
        if self.spacing == "log" and self.min <= 0:
            raise ConfigError("log grid needs min > 0")

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.min])
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, self.points)
        return np.linspace(self.min, self.max, self.points)


DEFAULT_DELTA_GRID = GridSpec(1e10, 3e14, 80, "log")
DEFAULT_INTENSITY_GRID = GridSpec(1e2, 1e13, 80, "log")

_CONFIG_KEYS = {
    "molecule", "beam", "omega_bar", "area", "big_omega_e", "delta_grid",
    "intensity_grid", "quadrature", "output", "preset",
}
_GRID_KEYS = {"min", "max", "points", "spacing"}
_QUAD_KEYS = {"rel_tol", "abs_tol", "max_subdivisions", "abs_tol_scale"}


@dataclass(frozen=True)
class SweepConfig:
    beam: str = "coherent"
    molecule: dict = field(default_factory=dict)
    omega_bar: float = PAPER_OMEGA_BAR
    area: float = PAPER_AREA
    big_omega_e: float = PAPER_BIG_OMEGA_E
    delta_grid: GridSpec = DEFAULT_DELTA_GRID
    intensity_grid: GridSpec = DEFAULT_INTENSITY_GRID
    quadrature: QuadratureSpec = QuadratureSpec()
    output: str | None = None
    preset: str | None = None

    def __post_init__(self) -> None:
        if self.beam not in ("coherent", "squeezed"):
            raise ConfigError(f"beam must be 'coherent' or 'squeezed', got {self.beam!r}")
        unknown = set(self.molecule) - set(MoleculeParams.field_names())
        if unknown:
            raise ConfigError(f"unknown molecule field(s): {sorted(unknown)}")
        if not (self.omega_bar > 0 and self.area > 0 and self.big_omega_e > 0):
            raise ConfigError("omega_bar, area and big_omega_e must be positive")
        if self.preset is not None and self.preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}")

    def molecule_at(self, delta: float) -> MoleculeParams:
        m = paper_default_molecule(self.omega_bar, delta)
        if self.molecule:
            m = MoleculeParams(**{**m.to_dict(), **self.molecule})
        problems = validate(m)
        if problems:
            raise ConfigError("invalid molecule: " + "; ".join(problems))
        return m

    def metadata(self) -> dict:
        return {
            "package_version": __version__,
            "constants_version": CONSTANTS_VERSION,
            "constants": asdict(CONST),
            "beam": self.beam,
            "preset": self.preset,
            "omega_bar_rad_s": self.omega_bar,
            "area_m2": self.area,
            "big_omega_e_rad_s": self.big_omega_e,
            "molecule_overrides": dict(sorted(self.molecule.items())),
            "molecule_at_zero_detuning": self.molecule_at(0.0).to_dict(),
            "delta_grid": asdict(self.delta_grid),
            "intensity_grid": asdict(self.intensity_grid),
            "quadrature": self.quadrature.to_dict(),
        }


def _check_keys(d: dict, allowed: set, where: str) -> None:
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")


def _grid(d: dict, where: str) -> GridSpec:
    _check_keys(d, _GRID_KEYS, where)
    try:
        return GridSpec(float(d["min"]), float(d["max"]), int(d["points"]), d.get("spacing", "log"))
    except KeyError as exc:
        raise ConfigError(f"{where} is missing {exc.args[0]!r}") from None


def parse_config(doc: dict) -> SweepConfig:
    _check_keys(doc, _CONFIG_KEYS, "config")
    kw: dict = {}
    for key in ("beam", "output", "preset"):
        if key in doc:
            kw[key] = doc[key]
    for key in ("omega_bar", "area", "big_omega_e"):
        if key in doc:
            kw[key] = float(doc[key])
    if "molecule" in doc:
        _check_keys(doc["molecule"], set(MoleculeParams.field_names()), "molecule")
        kw["molecule"] = {k: float(v) for k, v in doc["molecule"].items()}
    if "delta_grid" in doc:
        kw["delta_grid"] = _grid(doc["delta_grid"], "delta_grid")
    if "intensity_grid" in doc:
        kw["intensity_grid"] = _grid(doc["intensity_grid"], "intensity_grid")
    if "quadrature" in doc:
        _check_keys(doc["quadrature"], _QUAD_KEYS, "quadrature")
        try:
            kw["quadrature"] = QuadratureSpec(**doc["quadrature"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad quadrature block: {exc}") from None
    return SweepConfig(**kw)


def load_config(path) -> SweepConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return parse_config(doc)


# -- evaluation ---------------------------------------------------------------

def thread_count() -> int:
    env = os.environ.get("TPA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"TPA_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def parallel_map(fn: Callable, items: Sequence) -> list:
    """Order-preserving map; results come back in input order regardless of threads."""
    n = min(thread_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class SweepRow:
    delta: float
    intensity: float
    rates: RateBreakdown

    def cells(self) -> tuple:
        r = self.rates
        return (self.delta, self.intensity, *r.terms, r.one_photon, r.two_photon, r.perturbation_valid)


@dataclass
class SweepResult:
    rows: list
    metadata: dict
    header: tuple = SWEEP_HEADER

    def column(self, name: str) -> np.ndarray:
        j = self.header.index(name)
        return np.array([row[j] for row in self.table_rows()])

    def table_rows(self) -> list:
        return [r.cells() if isinstance(r, SweepRow) else tuple(r) for r in self.rows]


def squeezed_sections_for(cfg: SweepConfig, deltas: Sequence[float]) -> list[SqueezedCrossSections]:
    """One cross-section set per detuning, computed before any intensity fan-out."""

    def one(delta: float) -> SqueezedCrossSections:
        m = cfg.molecule_at(delta)
        p = SqueezedParams(cfg.omega_bar, cfg.big_omega_e, 0.0, cfg.area)
        try:
            return sq_cross_sections(m, p, cfg.quadrature)
        except QuadratureError as exc:
            raise SweepError(f"squeezed cross-section failed: {exc}", delta) from exc

    return parallel_map(one, list(deltas))


def _i_vac(cfg: SweepConfig) -> float:
    return vacuum_intensity(SqueezedParams(cfg.omega_bar, cfg.big_omega_e, 0.0, cfg.area))


def run_sweep(cfg: SweepConfig) -> SweepResult:
    deltas = cfg.delta_grid.values()
    intensities = cfg.intensity_grid.values()
    rows: list[SweepRow] = []
    if cfg.beam == "coherent":
        def per_delta(delta):
            m = cfg.molecule_at(delta)
            return [SweepRow(delta, i, coherent_rates(m, CoherentBeam(cfg.omega_bar, i, cfg.area)))
                    for i in intensities]
        for block in parallel_map(per_delta, list(deltas)):
            rows.extend(block)
    else:
        sections = squeezed_sections_for(cfg, deltas)
        i_vac = _i_vac(cfg)
        for delta, xs in zip(deltas, sections):
            rows.extend(SweepRow(delta, i, assemble_rates(xs, i, i_vac)) for i in intensities)
    meta = cfg.metadata()
    if cfg.beam == "squeezed":
        meta["vacuum_intensity_W_m2"] = _i_vac(cfg)
    return SweepResult(rows=rows, metadata=meta)


# -- presets ------------------------------------------------------------------

def _preset_config(name: str, **overrides) -> SweepConfig:
    beam = "squeezed" if name in ("fig14", "fig15") else "coherent"
    return SweepConfig(beam=beam, preset=name, **overrides)


def cross_section_table(cfg: SweepConfig, index: int | str) -> SweepResult:
    """delta-only sweep of coherent vs squeezed cross-sections (figures 8-13).

    ``index`` is 1..5 or ``"2pa"`` for the sum of terms 3, 4 and 5.
    """
    deltas = cfg.delta_grid.values()
    sections = squeezed_sections_for(cfg, deltas)
    rows = []
    for delta, xs in zip(deltas, sections):
        coh = coherent_cross_sections(cfg.molecule_at(delta), cfg.omega_bar)
        if index == 1:
            rows.append((delta, coh[0], xs.sigma1.value, xs.sigma1.error))
            continue
        if index == "2pa":
            keys = (3, 4, 5)
        else:
            keys = (index,)
        c = sum(coh[k - 1] for k in keys)
        s_i = sum(xs.sigma_I[k].value for k in keys)
        e_i = sum(xs.sigma_I[k].error for k in keys)
        s_ii = sum(xs.sigma_II[k].value for k in keys)
        e_ii = sum(xs.sigma_II[k].error for k in keys)
        rows.append((delta, c, s_i, e_i, s_ii, e_ii))
    if index == 1:
        header = ("delta_rad_s", "sigma_coh", "sigma_sq", "sigma_sq_err")
    else:
        header = ("delta_rad_s", "sigma_coh", "sigma_sq_I", "sigma_sq_I_err", "sigma_sq_II", "sigma_sq_II_err")
    meta = cfg.metadata()
    meta["cross_section"] = str(index)
    return SweepResult(rows=rows, metadata=meta, header=header)


RATIO_HEADER = (
    "delta_rad_s", "intensity_W_m2", "two_photon_sq_W", "two_photon_coh_W", "ratio",
    "sq_valid", "coh_valid", "perturbation_valid",
)


def ratio_table(cfg: SweepConfig) -> SweepResult:
    """T_sq / T_coh on the (delta, I) grid at equal intensities (figure 16)."""
    deltas = cfg.delta_grid.values()
    intensities = cfg.intensity_grid.values()
    sections = squeezed_sections_for(cfg, deltas)
    i_vac = _i_vac(cfg)
    rows = []
    for delta, xs in zip(deltas, sections):
        m = cfg.molecule_at(delta)
        for i in intensities:
            sq = assemble_rates(xs, i, i_vac)
            coh = coherent_rates(m, CoherentBeam(cfg.omega_bar, i, cfg.area))
            ratio = sq.two_photon / coh.two_photon if coh.two_photon != 0 else math.nan
            both = sq.perturbation_valid and coh.perturbation_valid
            rows.append((delta, i, sq.two_photon, coh.two_photon, ratio,
                         sq.perturbation_valid, coh.perturbation_valid, both))
    meta = cfg.metadata()
    meta["vacuum_intensity_W_m2"] = i_vac
    return SweepResult(rows=rows, metadata=meta, header=RATIO_HEADER)


def g2_table(p: SqueezedParams, mode: str, points: int = 1001, pump_bw: float | None = None) -> SweepResult:
    """g2 against time delay (mode 'time') or against w2 at w1 = carrier (mode 'freq')."""
    meta = {
        "package_version": __version__,
        "mode": mode,
        "omega_bar_rad_s": p.omega_bar,
        "big_omega_e_rad_s": p.big_omega_e,
        "beta0_mag": p.beta0_mag,
        "area_m2": p.area,
        "n_te": p.n_te,
    }
    if mode == "time":
        tau = np.linspace(-3 * p.t_e, 3 * p.t_e, points)
        g = g2_time(p, tau)
        return SweepResult(rows=list(zip(tau, g)), metadata=meta, header=("tau_s", "g2"))
    if mode == "freq":
        bw = pump_bw if pump_bw is not None else 1e-3 * p.big_omega_e
        meta["pump_bw_rad_s"] = bw
        w2 = p.omega_bar + np.linspace(-0.5, 0.5, points) * p.big_omega_e
        g = g2_freq(p, p.omega_bar, w2, bw)
        return SweepResult(rows=list(zip(w2, g)), metadata=meta, header=("omega2_rad_s", "g2"))
    raise ConfigError(f"g2 mode must be 'time' or 'freq', got {mode!r}")


def run_mc_report(p: OUParams, t_points: int = 50) -> SweepResult:
    t = np.linspace(0.0, p.n_steps * p.dt, t_points)
    est = kernel_mc(p, t)
    analytic = kernel_analytic(p.sigma_sq, p.tau_c, t)
    impact = kernel_impact(p.sigma_sq, p.tau_c, t)
    rows = list(zip(t, est.magnitude, est.stderr, analytic, impact))
    meta = {"package_version": __version__, "ou_params": p.to_dict(), "t_points": t_points}
    return SweepResult(rows=rows, metadata=meta, header=MC_HEADER)


_MC_KEYS = {"sigma_sq", "tau_c", "dt", "horizon", "n_traj", "seed", "t_points"}
DEFAULT_TAU_C = 1e-13


def parse_mc_config(doc: dict) -> tuple[OUParams, int]:
    """OU parameters; anything left out follows the sigma^2 tau_c^2 = 1e-2 impact defaults."""
    _check_keys(doc, _MC_KEYS, "mc config")
    tau_c = float(doc.get("tau_c", DEFAULT_TAU_C))
    base = OUParams.impact_defaults(tau_c=tau_c)
    sigma_sq = float(doc.get("sigma_sq", base.sigma_sq))
    rate = sigma_sq * tau_c
    try:
        p = OUParams(
            sigma_sq=sigma_sq,
            tau_c=tau_c,
            dt=float(doc.get("dt", base.dt)),
            horizon=float(doc.get("horizon", 5.0 / rate if rate > 0 else 500 * tau_c)),
            n_traj=int(doc.get("n_traj", base.n_traj)),
            seed=int(doc.get("seed", 0)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return p, int(doc.get("t_points", 50))


def run_preset(name: str, delta_points: int | None = None, intensity_points: int | None = None) -> SweepResult:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    if name == "g2":
        p = SqueezedParams(PAPER_OMEGA_BAR, PAPER_BIG_OMEGA_E, 1.0, PAPER_AREA)
        return g2_table(p, "time")
    if name == "mc":
        return run_mc_report(OUParams.impact_defaults(tau_c=DEFAULT_TAU_C))
    overrides = {}
    if delta_points:
        overrides["delta_grid"] = GridSpec(DEFAULT_DELTA_GRID.min, DEFAULT_DELTA_GRID.max, delta_points)
    if intensity_points:
        overrides["intensity_grid"] = GridSpec(DEFAULT_INTENSITY_GRID.min, DEFAULT_INTENSITY_GRID.max,
                                               intensity_points)
    cfg = _preset_config(name, **overrides)
    if name in ("fig5", "fig6", "fig14", "fig15"):
        return run_sweep(cfg)
    if name == "fig16":
        return ratio_table(cfg)
    index = {"fig8": 1, "fig9": 2, "fig10": 3, "fig11": 4, "fig12": 5, "fig13": "2pa"}[name]
    return cross_section_table(cfg, index)


# -- output -------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    return f"{float(x):.16e}"


def emit_csv(r: SweepResult, path) -> Path:
    """Write ``path`` (CSV, LF line endings) and a sibling ``.json`` metadata file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(r.header)]
    lines.extend(",".join(_fmt(x) for x in row) for row in r.table_rows())
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    meta_path = path.with_suffix(".json")
    with open(meta_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(r.metadata, sort_keys=True, indent=2) + "\n")
    return path
