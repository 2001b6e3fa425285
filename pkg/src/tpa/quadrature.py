"""Deterministic adaptive Gauss-Kronrod quadrature in one and two dimensions.

Each panel is integrated with the 15-point Kronrod rule (tensor 15x15 in 2D);
the embedded 7-point Gauss rule supplies the local error.  Panels are refined
by bisection, worst first, until the summed error meets the tolerance.  In 2D
a panel is cut across the axis that carries most of its error.

Integrands must be vectorised: they are called with numpy arrays and return
an array of the same shape.  Narrow features should be announced through
``split_points`` so that they sit on panel edges from the start.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple, Sequence

import numpy as np

# 15-point Kronrod abscissae on [-1, 1] (ascending) and weights; the 7-point
# Gauss rule uses the odd-indexed abscissae.
_XK_HALF = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK_HALF = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG_HALF = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

XK = np.concatenate([-_XK_HALF[:-1], _XK_HALF[::-1]])
WK = np.concatenate([_WK_HALF[:-1], _WK_HALF[::-1]])
WG = np.zeros(15)
WG[1::2] = np.concatenate([_WG_HALF[:-1], _WG_HALF[::-1]])

# integral of |f| on the starting panels is scaled by this to give the
# absolute tolerance floor (sign-changing integrands can sum to ~0)
DEFAULT_ABS_TOL_SCALE = 1e-12


class QuadratureError(RuntimeError):
    """Tolerance not reached within the subdivision budget."""

    def __init__(self, message: str, value: float, error: float):
        super().__init__(f"{message} (best value {value:.6e}, error estimate {error:.3e})")
        self.value = value
        self.error = error


class QuadResult(NamedTuple):
    value: float
    error: float


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-7
    abs_tol: float = 0.0
    max_subdivisions: int = 20_000
    split_points: tuple = ()
    abs_tol_scale: float = DEFAULT_ABS_TOL_SCALE

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0 or self.abs_tol > 0):
            raise ValueError("need rel_tol > 0 or abs_tol > 0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        object.__setattr__(self, "split_points", _normalise_splits(self.split_points))

    def with_splits(self, *axes: Sequence[float]) -> "QuadratureSpec":
        return replace(self, split_points=tuple(tuple(float(x) for x in ax) for ax in axes))

    def to_dict(self) -> dict:
        return {
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "max_subdivisions": self.max_subdivisions,
            "abs_tol_scale": self.abs_tol_scale,
        }


def _normalise_splits(points) -> tuple:
    if not points:
        return ()
    if all(np.isscalar(p) for p in points):
        return (tuple(float(p) for p in points),)
    return tuple(tuple(float(x) for x in ax) for ax in points)


def _axis_splits(spec: QuadratureSpec, axis: int) -> tuple[float, ...]:
    sp = spec.split_points
    if not sp:
        return ()
    if len(sp) == 1:
        return sp[0]
    return sp[axis]


def _edges(a: float, b: float, splits: Sequence[float]) -> np.ndarray:
    inner = sorted({float(s) for s in splits if a < s < b})
    return np.array([a, *inner, b])


def _select(errors: np.ndarray, excess: float, budget: int) -> np.ndarray:
    """Indices of the worst panels whose combined error covers ``excess``."""
    order = np.argsort(-errors, kind="stable")
    cum = np.cumsum(errors[order])
    n = int(np.searchsorted(cum, excess, side="left")) + 1
    n = max(1, min(n, budget, len(order)))
    return np.sort(order[:n])


def _tolerance(spec: QuadratureSpec, total: float, probe: float) -> float:
    return max(spec.abs_tol, spec.abs_tol_scale * probe, spec.rel_tol * abs(total))


# -- one dimension ------------------------------------------------------------

def _panels_1d(f, a: np.ndarray, b: np.ndarray):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x = mid[:, None] + half[:, None] * XK[None, :]
    y = np.asarray(f(x), dtype=float)
    kron = half * (y @ WK)
    gauss = half * (y @ WG)
    absval = np.abs(half) * (np.abs(y) @ WK)
    return kron, np.abs(kron - gauss), absval


def integrate_1d(f: Callable, a: float, b: float, spec: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    if not a < b:
        raise ValueError("integrate_1d needs a < b")
    edges = _edges(a, b, _axis_splits(spec, 0))
    lo, hi = edges[:-1], edges[1:]
    val, err, absval = _panels_1d(f, lo, hi)
    probe = float(absval.sum())
    splits = 0
    while True:
        total = float(val.sum())
        toterr = float(err.sum())
        tol = _tolerance(spec, total, probe)
        if toterr <= tol:
            return QuadResult(total, toterr)
        budget = spec.max_subdivisions - splits
        if budget <= 0:
            raise QuadratureError("1D quadrature did not converge", total, toterr)
        idx = _select(err, toterr - 0.5 * tol, budget)
        splits += len(idx)
        keep = np.ones(len(lo), dtype=bool)
        keep[idx] = False
        mid = 0.5 * (lo[idx] + hi[idx])
        new_lo = np.concatenate([lo[idx], mid])
        new_hi = np.concatenate([mid, hi[idx]])
        nv, ne, _ = _panels_1d(f, new_lo, new_hi)
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        order = np.argsort(lo, kind="stable")
        lo, hi, val, err = lo[order], hi[order], val[order], err[order]


# -- two dimensions -----------------------------------------------------------

@dataclass(frozen=True)
class Rectangle:
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self) -> None:
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError("rectangle needs x0 < x1 and y0 < y1")

    @property
    def area(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0)


@dataclass
class _Panels:
    x0: np.ndarray
    x1: np.ndarray
    y0: np.ndarray
    y1: np.ndarray
    val: np.ndarray = field(default=None)
    ex: np.ndarray = field(default=None)
    ey: np.ndarray = field(default=None)


def _eval_2d(f, x0, x1, y0, y1):
    hx = 0.5 * (x1 - x0)
    hy = 0.5 * (y1 - y0)
    x = (0.5 * (x0 + x1))[:, None] + hx[:, None] * XK[None, :]
    y = (0.5 * (y0 + y1))[:, None] + hy[:, None] * XK[None, :]
    z = np.asarray(f(x[:, :, None], y[:, None, :]), dtype=float)
    jac = hx * hy
    zk_y = z @ WK           # Kronrod along y, shape (P, 15)
    zg_y = z @ WG
    kk = jac * (zk_y @ WK)
    gk = jac * (zk_y @ WG)  # Gauss in x, Kronrod in y
    kg = jac * (zg_y @ WK)
    absval = np.abs(jac) * ((np.abs(z) @ WK) @ WK)
    return kk, np.abs(kk - gk), np.abs(kk - kg), absval


def integrate_2d(f: Callable, domain: Rectangle, spec: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    """Integrate f(x, y) over a rectangle; split points are given per axis."""
    ex_edges = _edges(domain.x0, domain.x1, _axis_splits(spec, 0))
    ey_edges = _edges(domain.y0, domain.y1, _axis_splits(spec, 1))
    gx0, gy0 = np.meshgrid(ex_edges[:-1], ey_edges[:-1], indexing="ij")
    gx1, gy1 = np.meshgrid(ex_edges[1:], ey_edges[1:], indexing="ij")
    x0, x1, y0, y1 = (g.ravel() for g in (gx0, gx1, gy0, gy1))
    val, ex, ey, absval = _eval_2d(f, x0, x1, y0, y1)
    probe = float(absval.sum())
    splits = 0
    while True:
        err = ex + ey
        total = float(val.sum())
        toterr = float(err.sum())
        tol = _tolerance(spec, total, probe)
        if toterr <= tol:
            return QuadResult(total, toterr)
        budget = spec.max_subdivisions - splits
        if budget <= 0:
            raise QuadratureError("2D quadrature did not converge", total, toterr)
        idx = _select(err, toterr - 0.5 * tol, budget)
        splits += len(idx)
        keep = np.ones(len(x0), dtype=bool)
        keep[idx] = False

        cut_x = ex[idx] >= ey[idx]
        sx0, sx1, sy0, sy1 = x0[idx], x1[idx], y0[idx], y1[idx]
        xm = np.where(cut_x, 0.5 * (sx0 + sx1), sx1)
        ym = np.where(cut_x, sy1, 0.5 * (sy0 + sy1))
        # first child keeps the low corner; second child takes the other half
        c1 = (sx0, xm, sy0, ym)
        c2 = (np.where(cut_x, xm, sx0), sx1, np.where(cut_x, sy0, ym), sy1)
        nx0, nx1, ny0, ny1 = (np.concatenate([p, q]) for p, q in zip(c1, c2))
        nv, nex, ney, _ = _eval_2d(f, nx0, nx1, ny0, ny1)

        x0 = np.concatenate([x0[keep], nx0])
        x1 = np.concatenate([x1[keep], nx1])
        y0 = np.concatenate([y0[keep], ny0])
        y1 = np.concatenate([y1[keep], ny1])
        val = np.concatenate([val[keep], nv])
        ex = np.concatenate([ex[keep], nex])
        ey = np.concatenate([ey[keep], ney])
        order = np.lexsort((y0, x0))
        x0, x1, y0, y1 = x0[order], x1[order], y0[order], y1[order]
        val, ex, ey = val[order], ex[order], ey[order]


def riemann_oracle_2d(f: Callable, domain: Rectangle, n_per_axis: int, chunk: int = 256) -> float:
    """Plain midpoint tensor sum; slow on purpose, used only to cross-check."""
    if n_per_axis < 2:
        raise ValueError("n_per_axis must be >= 2")
    hx = (domain.x1 - domain.x0) / n_per_axis
    hy = (domain.y1 - domain.y0) / n_per_axis
    xs = domain.x0 + hx * (np.arange(n_per_axis) + 0.5)
    ys = domain.y0 + hy * (np.arange(n_per_axis) + 0.5)
    total = 0.0
    for start in range(0, n_per_axis, chunk):
        xb = xs[start:start + chunk]
        total += float(np.sum(f(xb[:, None], ys[None, :])))
    return total * hx * hy


def riemann_oracle_1d(f: Callable, a: float, b: float, n: int) -> float:
    h = (b - a) / n
    xs = a + h * (np.arange(n) + 0.5)
    return float(np.sum(f(xs))) * h
