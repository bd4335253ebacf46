"""Two-sided shooting on the untransformed radial Dirac equations.

An independent check of the AIM eigenvalues: integrate outward from a
power-law start near the origin and inward from the asymptotic tail, then
drive the normalized Wronskian G_out F_in - F_out G_in at r_match to zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import NoSignChange, NotConverged
from .models import LinearConfined, QuantumChannel, origin_exponent


@dataclass(frozen=True)
class ShootingConfig:
    """Integration radii and tolerances.

    ``r_max=None`` picks 12 for confined potentials and 40/sigma for the
    Coulomb-tailed families.
    """

    r_min: float = 1e-4
    r_match: float = 1.0
    r_max: float | None = None
    rtol: float = 1e-12
    atol: float = 1e-300
    energy_tol: float = 1e-12
    max_steps: int = 200

    def __post_init__(self):
        if not 0 < self.r_min < self.r_match:
            raise ValueError("need 0 < r_min < r_match")
        if self.r_max is not None and self.r_max <= self.r_match:
            raise ValueError("need r_match < r_max")
        if self.rtol <= 0 or self.energy_tol <= 0:
            raise ValueError("tolerances must be positive")


def _rhs(potential, channel, E):
    k, m = channel.k, potential.m

    def f(r, y):
        V, U = potential.vector(r), potential.scalar(r)
        return [-k / r * y[0] + (E + m - V + U) * y[1],
                -(E - m - V - U) * y[0] + k / r * y[1]]
    return f


def _r_max(potential, E, config):
    if config.r_max is not None:
        return config.r_max
    if isinstance(potential, LinearConfined):
        return 12.0
    return 40 / math.sqrt(potential.m ** 2 - E ** 2)


def _tail(potential, channel, E, r):
    """Leading decaying behaviour (G, F) at large r."""
    m = potential.m
    if isinstance(potential, LinearConfined):
        a, b = potential.alpha(E), potential.beta
        # F/G from the dominant balance G' ~ (B2 - B1) r F, G'/G ~ -(a + b r)
        ratio = -(a + b * r) / ((potential.B2 - potential.B1) * r)
        return np.array([1.0, ratio])
    # the overall scale is irrelevant for a linear system
    return np.array([1.0, -math.sqrt((m - E) / (m + E))])


def integrate_outward(potential, channel: QuantumChannel, E: float,
                      config: ShootingConfig = ShootingConfig()):
    """(G, F, G', F') at r_match from G ~ r^gamma, F ~ (gamma + k)/g r^gamma."""
    g = origin_exponent(channel, potential)
    c = (g + channel.k) / potential.coupling
    f = _rhs(potential, channel, E)
    y0 = [config.r_min ** g, c * config.r_min ** g]
    # an explicit first step skips scipy's step heuristic, which divides by
    # atol and breaks down when the F start is exactly zero
    sol = solve_ivp(f, (config.r_min, config.r_match), y0, method="DOP853",
                    rtol=config.rtol, atol=config.atol, first_step=config.r_min / 10)
    if not sol.success or not np.all(np.isfinite(sol.y[:, -1])):
        raise NotConverged(f"outward integration failed at E={E}: {sol.message}")
    G, F = sol.y[:, -1]
    dG, dF = f(config.r_match, [G, F])
    return G, F, dG, dF


def integrate_inward(potential, channel: QuantumChannel, E: float,
                     config: ShootingConfig = ShootingConfig()):
    f = _rhs(potential, channel, E)
    r_max = _r_max(potential, E, config)
    sol = solve_ivp(f, (r_max, config.r_match), _tail(potential, channel, E, r_max),
                    method="DOP853", rtol=config.rtol, atol=config.atol)
    if not sol.success or not np.all(np.isfinite(sol.y[:, -1])):
        raise NotConverged(f"inward integration failed at E={E}: {sol.message}")
    G, F = sol.y[:, -1]
    dG, dF = f(config.r_match, [G, F])
    return G, F, dG, dF


def mismatch(potential, channel: QuantumChannel, E: float,
             config: ShootingConfig = ShootingConfig()) -> float:
    """Normalized Wronskian of outward and inward solutions at r_match."""
    Go, Fo, _, _ = integrate_outward(potential, channel, E, config)
    Gi, Fi, _, _ = integrate_inward(potential, channel, E, config)
    no, ni = math.hypot(Go, Fo), math.hypot(Gi, Fi)
    return (Go / no) * (Fi / ni) - (Fo / no) * (Gi / ni)


def match_eigenvalue(potential, channel: QuantumChannel, bracket,
                     config: ShootingConfig = ShootingConfig()) -> float:
    """Energy in ``bracket`` where the outward and inward solutions match."""
    lo, hi = bracket
    flo, fhi = mismatch(potential, channel, lo, config), mismatch(potential, channel, hi, config)
    if flo * fhi > 0:
        raise NoSignChange(f"shooting mismatch keeps one sign on {tuple(bracket)}")
    try:
        return brentq(lambda e: mismatch(potential, channel, e, config), lo, hi,
                      xtol=config.energy_tol, rtol=4 * np.finfo(float).eps,
                      maxiter=config.max_steps)
    except RuntimeError as exc:
        raise NotConverged(str(exc)) from exc


def radial_solution(potential, channel: QuantumChannel, E: float, r_samples,
                    config: ShootingConfig = ShootingConfig()):
    """Unit-normalized (G, F) at ``r_samples`` from the matched solutions.

    Outward values are used below r_match and inward values above, scaled
    to agree in G at r_match.
    """
    r = np.asarray(r_samples, dtype=float)
    f = _rhs(potential, channel, E)
    g = origin_exponent(channel, potential)
    c = (g + channel.k) / potential.coupling
    r_max = _r_max(potential, E, config)
    grid = np.linspace(config.r_min, r_max, 4001)
    inner = grid[grid <= config.r_match]
    outer = grid[grid >= config.r_match][::-1]
    o = solve_ivp(f, (config.r_min, config.r_match), [config.r_min ** g, c * config.r_min ** g],
                  method="DOP853", rtol=config.rtol, atol=config.atol, dense_output=True,
                  first_step=config.r_min / 10)
    i = solve_ivp(f, (r_max, config.r_match), _tail(potential, channel, E, r_max),
                  method="DOP853", rtol=config.rtol, atol=config.atol, dense_output=True)
    scale = o.sol(config.r_match)[0] / i.sol(config.r_match)[0]

    def sample(x):
        x = np.atleast_1d(x)
        out = np.where(x <= config.r_match, o.sol(np.minimum(x, config.r_match)),
                       scale * i.sol(np.maximum(x, config.r_match)))
        return out

    dense = np.concatenate([inner, outer[::-1]])
    vals = sample(dense)
    norm = np.trapezoid(vals[0] ** 2 + vals[1] ** 2, dense)
    G, F = sample(r) / math.sqrt(norm)
    return G, F
