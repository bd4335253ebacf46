"""Closed-form Dirac-Coulomb spectrum and radial functions in d dimensions."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import UnphysicalCoupling
from .models import PureCoulomb, QuantumChannel, origin_exponent


@dataclass(frozen=True)
class CoulombState:
    """An exactly solvable Coulomb level.

    ``a = n + gamma`` and ``b = sqrt(k^2 + n^2 + 2 n gamma)`` are the
    dimensionless combinations E A / sigma and m A / sigma.
    """

    channel: QuantumChannel
    A: float
    m: float
    energy: float
    a: float
    b: float
    gamma: float

    @property
    def sigma(self) -> float:
        return math.sqrt(self.m ** 2 - self.energy ** 2)

    @property
    def r1(self) -> float:
        """Length unit of the scaled variable rho = r / r1."""
        return 1 / (2 * self.sigma)


def _gamma(channel, A):
    try:
        return origin_exponent(channel, PureCoulomb(A))
    except ValueError as exc:
        raise UnphysicalCoupling(str(exc)) from exc


def coulomb_energy(channel: QuantumChannel, A: float, m: float = 1.0, sign: int = 1) -> float:
    """E = +-m [1 + (A / (n + gamma))^2]^(-1/2).

    Examples
    --------
    >>> from diracaim.models import channel_from_k
    >>> round(coulomb_energy(channel_from_k(-1, 0), 0.5), 8)
    0.8660254
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    g = _gamma(channel, A)
    return sign * m / math.sqrt(1 + (A / (channel.n + g)) ** 2)


def energy_from_a(channel: QuantumChannel, A: float, m: float = 1.0) -> float:
    """Quantization through a = n + gamma: m / sqrt(1 + (A / (n + gamma))^2)."""
    g = _gamma(channel, A)
    return m / math.sqrt(1 + (A / (channel.n + g)) ** 2)


def energy_from_s(channel: QuantumChannel, A: float, s: float, m: float = 1.0) -> float:
    """Quantization through b: m sqrt(1 - A^2 / (k^2 + s (2n - s) + 2 s gamma))."""
    g = _gamma(channel, A)
    n, k = channel.n, channel.k
    return m * math.sqrt(1 - A * A / (k * k + s * (2 * n - s) + 2 * s * g))


def has_node_zero_state(channel: QuantumChannel) -> bool:
    """n = 0 exists only when b = -k_d > 0, i.e. k_d < 0."""
    return channel.k < 0


def coulomb_state(channel: QuantumChannel, A: float, m: float = 1.0) -> CoulombState:
    if channel.n == 0 and not has_node_zero_state(channel):
        raise ValueError(f"k_d={channel.k} > 0 has no n=0 Coulomb state")
    g = _gamma(channel, A)
    n, k = channel.n, channel.k
    return CoulombState(channel, A, m, coulomb_energy(channel, A, m), n + g,
                        math.sqrt(k * k + n * n + 2 * n * g), g)


def hypergeometric_1f1_coefficients(neg_n: int, c: float) -> np.ndarray:
    """Power coefficients of the terminating 1F1(-n; c; rho)."""
    if neg_n > 0:
        raise ValueError("first parameter must be a non-positive integer")
    if c <= 0 and float(c).is_integer():
        raise ValueError(f"1F1 has a pole at c={c}")
    n = -neg_n
    out = np.empty(n + 1)
    out[0] = 1.0
    for i in range(n):
        out[i + 1] = out[i] * (i - n) / ((c + i) * (i + 1))
    return out


def hypergeometric_1f1_poly(neg_n: int, c: float, rho):
    """sum_k (-n)_k / (c)_k rho^k / k! for a terminating series."""
    coeffs = hypergeometric_1f1_coefficients(neg_n, c)
    return np.polynomial.polynomial.polyval(rho, coeffs)


def generalized_factorial_ratio(x: float, n: int) -> float:
    """(x + n)! / x! = Gamma(x + n + 1) / Gamma(x + 1) for real x > -1."""
    return math.exp(math.lgamma(x + n + 1) - math.lgamma(x + 1))


def coulomb_phi(state: CoulombState, c2: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Polynomial coefficients in rho of (phi1, phi2)."""
    n, g, k, b = state.channel.n, state.gamma, state.channel.k, state.b
    phi2 = ((-1) ** n * generalized_factorial_ratio(2 * g, n) * c2
            * hypergeometric_1f1_coefficients(-n, 2 * g + 1))
    if n == 0:
        return np.zeros(1), phi2
    phi1 = ((-1) ** (n + 1) * (b + k) * generalized_factorial_ratio(2 * g, n - 1) * c2
            * hypergeometric_1f1_coefficients(1 - n, 2 * g + 1))
    return phi1, phi2


def _unnormalized(state: CoulombState, r):
    phi1, phi2 = coulomb_phi(state)
    rho = np.asarray(r, dtype=float) / state.r1
    P = np.polynomial.polynomial.polyval
    p1, p2 = P(rho, phi1), P(rho, phi2)
    env = np.power(r, state.gamma) * np.exp(-state.sigma * np.asarray(r, dtype=float))
    m, E = state.m, state.energy
    return math.sqrt(m + E) * env * (p1 + p2), math.sqrt(m - E) * env * (p1 - p2)


def coulomb_norm(state: CoulombState) -> float:
    """C2 making the radial spinor unit-normalized."""
    def dens(r):
        G, F = _unnormalized(state, r)
        return G * G + F * F
    upper = 40 / state.sigma
    # split at a few decay lengths so quad sees the bulk of the weight
    pts = [p for p in (2 / state.sigma, 8 / state.sigma) if p < upper]
    total = quad(dens, 0, upper, points=pts, limit=400, epsabs=0, epsrel=1e-13)[0]
    return 1 / math.sqrt(total)


def coulomb_radial(channel: QuantumChannel, A: float, m: float, r_samples):
    """Normalized (G, F) at the requested radii."""
    state = coulomb_state(channel, A, m)
    r = np.asarray(r_samples, dtype=float)
    if np.any(r <= 0):
        raise ValueError("radii must be positive")
    c = coulomb_norm(state)
    G, F = _unnormalized(state, r)
    return c * G, c * F
