"""Asymptotic iteration for two coupled first-order linear ODEs.

For the system

    y1' = lambda0 y1 + s0 y2,    y2' = omega0 y1 + p0 y2

repeated differentiation gives level-n coefficients obeying

    lambda_{n+1} = lambda_n' + lambda_n lambda0 + s_n omega0
    s_{n+1}      = s_n'      + lambda_n s0      + s_n p0
    omega_{n+1}  = omega_n'  + omega_n lambda0  + p_n omega0
    p_{n+1}      = p_n'      + omega_n s0       + p_n p0

and the quantization condition is delta = lambda_{n+1} s_n - s_{n+1} lambda_n = 0
at a fixed point r0. The (lambda, s) pair closes on itself, so eigenvalue
searches never build omega_n or p_n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import NoSignChange, NotConverged
from .precision import Arithmetic, precision_for_depth
from .series import TruncatedSeries

TINY = 1e-300


@dataclass(frozen=True, eq=False)
class CoefficientSystem:
    """The four coefficient series expanded about ``r0``.

    ``energy_like`` is the root variable the series were built at (E or
    epsilon) and ``energy`` the matching energy in units of m.
    """

    lambda0: TruncatedSeries
    s0: TruncatedSeries
    omega0: TruncatedSeries
    p0: TruncatedSeries
    r0: float
    energy_like: float
    energy: float | None = None

    def __post_init__(self):
        parts = (self.lambda0, self.s0, self.omega0, self.p0)
        if any(p.center != self.lambda0.center for p in parts):
            raise ValueError("coefficient series must share one center")
        if len({p.degree for p in parts}) != 1:
            raise ValueError("coefficient series must share one degree")

    @property
    def degree(self) -> int:
        return self.lambda0.degree


@dataclass(frozen=True, eq=False)
class AimLevel:
    n: int
    lambda_n: TruncatedSeries
    s_n: TruncatedSeries
    omega_n: TruncatedSeries | None = None
    p_n: TruncatedSeries | None = None


@dataclass(frozen=True)
class EigenResult:
    """Outcome of an eigenvalue solve.

    ``history`` holds the root estimate (as an energy) at each depth listed
    in ``depths``; depths without a sign change in the bracket are absent.
    """

    energy: float
    iterations_used: int
    delta_residual: float
    r0: float
    history: tuple[float, ...]
    depths: tuple[int, ...]
    energy_like: float
    converged: bool = True


class SystemBuilder(Protocol):
    """What the engine needs from a model: a map from the root variable to
    a coefficient system, plus the energy <-> variable conversion."""

    r0: float
    min_depth: int
    max_depth: int

    def __call__(self, x: float, degree: int, bits: int | None = None) -> CoefficientSystem: ...

    def energy(self, x: float) -> float: ...

    def to_variable(self, energy: float) -> float: ...


def initial_level(system: CoefficientSystem, full: bool = True) -> AimLevel:
    if full:
        return AimLevel(0, system.lambda0, system.s0, system.omega0, system.p0)
    return AimLevel(0, system.lambda0, system.s0)


def aim_step(prev: AimLevel, base: CoefficientSystem) -> AimLevel:
    """Advance one level. omega/p are carried only if ``prev`` has them."""
    lam, s = prev.lambda_n, prev.s_n
    lam1 = lam.derivative() + lam * base.lambda0 + s * base.omega0
    s1 = s.derivative() + lam * base.s0 + s * base.p0
    if prev.omega_n is None:
        return AimLevel(prev.n + 1, lam1, s1)
    om, p = prev.omega_n, prev.p_n
    om1 = om.derivative() + om * base.lambda0 + p * base.omega0
    p1 = p.derivative() + om * base.s0 + p * base.p0
    return AimLevel(prev.n + 1, lam1, s1, om1, p1)


def delta(level_n: AimLevel, level_n1: AimLevel):
    """Constant term of lambda_{n+1} s_n - s_{n+1} lambda_n (value at r0)."""
    return (level_n1.lambda_n.coeffs[0] * level_n.s_n.coeffs[0]
            - level_n1.s_n.coeffs[0] * level_n.lambda_n.coeffs[0])


def normalized_delta(level_n: AimLevel, level_n1: AimLevel) -> float:
    l0, s0 = level_n.lambda_n.coeffs[0], level_n.s_n.coeffs[0]
    l1, s1 = level_n1.lambda_n.coeffs[0], level_n1.s_n.coeffs[0]
    a, b = l1 * s0, s1 * l0
    # the |l1 l0| term keeps the scale honest when every s_n vanishes
    scale = max(abs(a), abs(b), abs(l1 * l0))
    if scale == 0:
        return 0.0
    return float((a - b) / scale) if float(scale) > TINY else 0.0


def delta_profile(system: CoefficientSystem, depth: int) -> list[float]:
    """Normalized delta at depths 0..depth, from one pass of the recursion."""
    if system.degree < depth + 2:
        raise ValueError(f"degree {system.degree} too small for depth {depth}")
    level = initial_level(system, full=False)
    out = []
    for _ in range(depth + 1):
        nxt = aim_step(level, system)
        out.append(normalized_delta(level, nxt))
        level = nxt
    return out


def quantization_function(builder: SystemBuilder, depth: int,
                          bits: int | None = None) -> Callable[[float], float]:
    """x -> normalized delta at ``depth``, evaluated at working precision."""
    if bits is None:
        bits = precision_for_depth(depth)
    arith = Arithmetic(bits)

    def f(x: float) -> float:
        with arith.context():
            system = builder(x, depth + 2, bits)
            return delta_profile(system, depth)[depth]

    return f


def _root(f, a, b, fa=None, fb=None) -> float:
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if fa == 0:
        return a
    if fb == 0:
        return b
    return brentq(f, a, b, xtol=1e-17, rtol=4 * np.finfo(float).eps, maxiter=200)


def _local_bracket(f, x_prev, step, lo, hi):
    """Grow a window around x_prev until it holds a sign change."""
    w = max(abs(step) * 4, 1e-10 * max(1.0, abs(x_prev)))
    while True:
        a, b = max(lo, x_prev - w), min(hi, x_prev + w)
        fa, fb = f(a), f(b)
        if fa * fb <= 0:
            return a, b, fa, fb
        if a == lo and b == hi:
            return None
        w *= 8


def solve_eigenvalue(builder: SystemBuilder, bracket: Sequence[float],
                     max_iter: int | None = None, tol: float = 1e-9, *,
                     min_depth: int | None = None, start_depth: int = 2,
                     bits: int | None = None) -> EigenResult:
    """Locate one eigenvalue inside an energy bracket.

    The root of delta is tracked from depth ``start_depth`` upward, each
    depth warm-started from the previous root. The solve stops at the first
    depth >= ``min_depth`` whose root agrees with the previous depth's to
    ``tol`` in energy.

    Parameters
    ----------
    builder : SystemBuilder
        Model producing coefficient systems (see :mod:`diracaim.models`).
    bracket : (float, float)
        Energy interval holding exactly one eigenvalue.
    max_iter : int, optional
        Deepest AIM level tried. Defaults to ``builder.max_depth``.
    tol : float
        Agreement between successive depths, in units of m.
    bits : int, optional
        Fixed working precision; default grows with depth.

    Raises
    ------
    NoSignChange
        No depth produced a sign change inside the bracket.
    NotConverged
        Estimates still moved by more than ``tol`` at ``max_iter``.
    """
    max_iter = builder.max_depth if max_iter is None else max_iter
    min_depth = builder.min_depth if min_depth is None else min_depth
    xa, xb = sorted(builder.to_variable(e) for e in bracket)
    history: list[tuple[int, float]] = []
    roots: list[float] = []
    last = None
    for n in range(start_depth, max_iter + 1):
        f = quantization_function(builder, n, bits)
        if roots:
            step = roots[-1] - roots[-2] if len(roots) > 1 else 1e-6 * (xb - xa)
            found = _local_bracket(f, roots[-1], step, xa, xb)
        else:
            fa, fb = f(xa), f(xb)
            found = (xa, xb, fa, fb) if fa * fb <= 0 else None
        if found is None:
            continue
        x = _root(f, *found)
        roots.append(x)
        e = float(builder.energy(x))
        history.append((n, e))
        last = (n, x, f)
        if (n >= min_depth and len(history) > 1 and history[-2][0] == n - 1
                and abs(e - history[-2][1]) < tol):
            resid = abs(f(x))
            return EigenResult(
                energy=e, iterations_used=n, delta_residual=resid,
                r0=float(builder.r0), history=tuple(h[1] for h in history),
                depths=tuple(h[0] for h in history), energy_like=float(x))
    if last is None:
        raise NoSignChange(
            f"delta keeps one sign on {tuple(bracket)} up to depth {max_iter}")
    n, x, f = last
    raise NotConverged(
        f"depth {max_iter}: successive estimates still differ by more than {tol}",
        history=history, last_delta=f(x))


def scan_brackets(builder: SystemBuilder, energy_range: Sequence[float], grid: int,
                  depth: int, bits: int | None = None) -> list[tuple[float, float]]:
    """All adjacent grid pairs (in energy) where delta changes sign."""
    if grid < 2:
        raise ValueError("grid must have at least two points")
    f = quantization_function(builder, depth, bits)
    energies = np.linspace(energy_range[0], energy_range[1], grid)
    vals = [f(builder.to_variable(e)) for e in energies]
    out = []
    for i in range(grid - 1):
        if vals[i] == 0 or vals[i] * vals[i + 1] < 0:
            out.append((float(energies[i]), float(energies[i + 1])))
    if vals[-1] == 0 and (not out or out[-1][1] != energies[-1]):
        out.append((float(energies[-2]), float(energies[-1])))
    return sorted(out)
