"""Quantum numbers, potentials and the transformed coefficient systems.

The radial Dirac equations with vector potential V and scalar potential U,

    G' = -k/r G + (E + m - V + U) F
    F' = -(E - m - V - U) G + k/r F,

are rewritten for each potential family through an ansatz

    G = r^gamma exp(-q(r)) (phi1 + phi2),  F = r^gamma exp(-q(r)) (phi1 - phi2)

(with extra sqrt(m +- E) weights for pure Coulomb), which turns them into a
first-order system for (phi1, phi2) that the AIM engine consumes.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import ClassVar

from .engine import CoefficientSystem
from .errors import NoDiscreteSpectrum, UnphysicalCoupling
from .precision import Arithmetic
from .series import TruncatedSeries

FINE_STRUCTURE = 1 / 137.036
ELECTRON_MASS_KEV = 511.004

_LETTERS = "spdfghiklmnoqrtuv"
_SUB = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")


# ---------------------------------------------------------------- channels
@dataclass(frozen=True)
class QuantumChannel:
    """Angular and radial quantum numbers of a d-dimensional Dirac state.

    Parameters
    ----------
    d : int
        Spatial dimension, >= 2.
    tau : int
        +1 or -1; the sign of k_d.
    j : Fraction
        Half-integer total angular momentum, >= 1/2.
    n : int
        Radial (node) index, >= 0.
    """

    d: int
    tau: int
    j: Fraction
    n: int

    def __post_init__(self):
        j = Fraction(self.j)
        object.__setattr__(self, "j", j)
        if self.d < 2:
            raise ValueError("dimension must be >= 2")
        if self.tau not in (1, -1):
            raise ValueError("tau must be +1 or -1")
        if j.denominator != 2 or j < Fraction(1, 2):
            raise ValueError(f"j must be a half-integer >= 1/2, got {j}")
        if self.n < 0:
            raise ValueError("n must be >= 0")

    @property
    def k_frac(self) -> Fraction:
        return self.tau * (self.j + Fraction(self.d - 2, 2))

    @property
    def k(self) -> float:
        """k_d = tau (j + (d-2)/2)."""
        return float(self.k_frac)

    @property
    def ell(self) -> Fraction:
        return self.j + Fraction(self.tau, 2)

    @property
    def n_r(self) -> Fraction:
        """Principal number n + |k_d| - (d-3)/2."""
        return self.n + abs(self.k_frac) - Fraction(self.d - 3, 2)

    @property
    def parity(self) -> int:
        return -1 if int(self.ell) % 2 else 1

    @property
    def label(self) -> str:
        """Spectroscopic label such as ``3p3/2`` (d=3 only)."""
        if self.d != 3:
            return f"n={self.n},k_d={self.k_frac}"
        return f"{int(self.n_r)}{_LETTERS[int(self.ell)]}{self.j.numerator}/2"

    def with_n(self, n: int) -> "QuantumChannel":
        return QuantumChannel(self.d, self.tau, self.j, n)


def make_channel(d: int, tau: int, j, n: int) -> QuantumChannel:
    return QuantumChannel(d, tau, Fraction(j), n)


def channel_from_k(k, n: int, d: int = 3) -> QuantumChannel:
    """Channel with k_d = k (e.g. k=-1 is s1/2 in three dimensions)."""
    k = Fraction(k)
    if k == 0:
        raise ValueError("k_d must be nonzero")
    tau = 1 if k > 0 else -1
    return QuantumChannel(d, tau, abs(k) - Fraction(d - 2, 2), n)


def parse_label(label: str) -> QuantumChannel:
    """Inverse of :attr:`QuantumChannel.label` for d=3 (``"1s1/2"``, ``"3p₃/₂"``)."""
    m = re.fullmatch(r"\s*(\d+)([a-z])(\d+)/2\s*", label.translate(_SUB))
    if not m:
        raise ValueError(f"cannot parse state label {label!r}")
    n_r, letter, twoj = int(m.group(1)), m.group(2), int(m.group(3))
    ell = _LETTERS.index(letter)
    j = Fraction(twoj, 2)
    tau = int(2 * (ell - j))
    if tau not in (1, -1):
        raise ValueError(f"{label!r}: j must be ell +- 1/2")
    ch = QuantumChannel(3, tau, j, 0)
    n = n_r - int(abs(ch.k_frac))
    if n < 0:
        raise ValueError(f"{label!r}: principal number too small for this j")
    return ch.with_n(n)


# -------------------------------------------------------------- potentials
@dataclass(frozen=True)
class PureCoulomb:
    A: float
    m: float = 1.0
    family: ClassVar[str] = "coulomb"

    def __post_init__(self):
        if self.A <= 0 or self.m <= 0:
            raise ValueError("PureCoulomb needs A > 0 and m > 0")

    @property
    def coupling(self) -> float:
        return self.A

    def vector(self, r):
        return -self.A / r

    def scalar(self, r):
        return 0.0 * r


@dataclass(frozen=True)
class ScreenedCoulomb:
    """Point nucleus -Z alpha / r with a (Z-1)-electron screening tail."""

    Z: float
    m: float = 1.0
    family: ClassVar[str] = "screened"

    def __post_init__(self):
        if self.Z <= 0 or self.m <= 0:
            raise ValueError("ScreenedCoulomb needs Z > 0 and m > 0")

    @property
    def v1(self) -> float:
        return self.Z * FINE_STRUCTURE

    @property
    def v2(self) -> float:
        return (self.Z - 1) * FINE_STRUCTURE

    @property
    def lam(self) -> float:
        return 0.98 * FINE_STRUCTURE * self.Z ** (1 / 3)

    @property
    def coupling(self) -> float:
        return self.v1

    def screening(self, r):
        return self.v2 * self.lam / (1 + self.lam * r)

    def vector(self, r):
        return -self.v1 / r + self.screening(r)

    def scalar(self, r):
        return 0.0 * r


@dataclass(frozen=True)
class LinearConfined:
    """Coulomb plus linear vector potential with linear scalar confinement."""

    A: float
    B1: float
    B2: float
    m: float = 1.0
    family: ClassVar[str] = "confined"

    def __post_init__(self):
        if self.A <= 0 or self.m <= 0 or self.B1 < 0:
            raise ValueError("LinearConfined needs A > 0, m > 0, B1 >= 0")
        if not self.B2 > self.B1:
            raise NoDiscreteSpectrum(f"B2={self.B2} must exceed B1={self.B1}")

    @property
    def coupling(self) -> float:
        return self.A

    @property
    def beta(self) -> float:
        return math.sqrt(self.B2 ** 2 - self.B1 ** 2)

    def alpha(self, energy: float) -> float:
        return (self.m * self.B2 + energy * self.B1) / self.beta

    def vector(self, r):
        return -self.A / r + self.B1 * r

    def scalar(self, r):
        return self.B2 * r


PotentialSpec = PureCoulomb | ScreenedCoulomb | LinearConfined


def origin_exponent(channel: QuantumChannel, potential: PotentialSpec) -> float:
    """gamma = sqrt(k^2 - g^2) with g the Coulomb strength at the origin."""
    g = potential.coupling
    if g >= abs(channel.k):
        raise UnphysicalCoupling(
            f"coupling {g} >= |k_d| = {abs(channel.k)}: gamma is imaginary")
    return math.sqrt(channel.k ** 2 - g ** 2)


@dataclass(frozen=True)
class AsymptoticFactor:
    """Exponents of the ansatz prefactor r^gamma exp(-q(r))."""

    family: str
    gamma: float
    sigma: float | None = None
    alpha_lin: float | None = None
    beta_lin: float | None = None

    def exponent(self, r):
        """q(r): sigma r or alpha r + beta r^2 / 2."""
        if self.family == "confined":
            return self.alpha_lin * r + 0.5 * self.beta_lin * r * r
        return self.sigma * r

    def exponent_slope(self, r):
        if self.family == "confined":
            return self.alpha_lin + self.beta_lin * r
        return self.sigma + 0.0 * r


def asymptotic_factor(potential: PotentialSpec, channel: QuantumChannel,
                      energy: float) -> AsymptoticFactor:
    gamma = origin_exponent(channel, potential)
    if isinstance(potential, LinearConfined):
        return AsymptoticFactor("confined", gamma, alpha_lin=potential.alpha(energy),
                                beta_lin=potential.beta)
    if abs(energy) >= potential.m:
        raise ValueError("sub-threshold family needs |E| < m")
    return AsymptoticFactor(potential.family, gamma,
                            sigma=math.sqrt(potential.m ** 2 - energy ** 2))


# ------------------------------------------------- coefficient expansions
@dataclass(frozen=True)
class RationalTerm:
    """c(r) = const + inv / r + lin * r + screen / (1 + lam r)."""

    const: object = 0
    inv: object = 0
    lin: object = 0
    screen: object = 0

    def value(self, r, lam=0.0):
        out = self.const + self.inv / r + self.lin * r
        if self.screen:
            out = out + self.screen / (1 + lam * r)
        return out


def _expand(terms, lam, center, degree, arith, regular=False):
    """Series of each c(r) about ``center``, or of r c(r) when ``regular``."""
    x = TruncatedSeries.variable(arith.real(center), degree)
    one = arith.real(1)
    inv = None if regular else x.reciprocal()
    screen = (x * lam + one).reciprocal() if lam else None
    out = []
    for t in terms:
        if regular:
            s = x * t.const + x * x * t.lin + t.inv
            if screen is not None:
                s = s + x * screen * t.screen
        else:
            s = inv * t.inv + x * t.lin + t.const
            if screen is not None:
                s = s + screen * t.screen
        out.append(s)
    return out


class _Problem:
    """Shared plumbing: map a root variable to coefficient series."""

    channel: QuantumChannel
    r0: float
    min_depth: int
    max_depth: int

    def terms(self, x, arith: Arithmetic):
        """Return (lam, (lambda0, s0, omega0, p0) terms, energy)."""
        raise NotImplementedError

    def __call__(self, x, degree: int, bits: int | None = None) -> CoefficientSystem:
        arith = Arithmetic(bits)
        with arith.context():
            lam, terms, energy = self.terms(x, arith)
            series = _expand(terms, lam, self.r0, degree, arith)
        return CoefficientSystem(*series, r0=self.r0, energy_like=x, energy=float(energy))

    def regular_system(self, x, degree: int, bits: int | None = None):
        """Series about 0 of r*lambda0, r*s0, r*omega0, r*p0 (all analytic)."""
        arith = Arithmetic(bits)
        with arith.context():
            lam, terms, _ = self.terms(x, arith)
            return _expand(terms, lam, 0, degree, arith, regular=True)

    def coefficient_values(self, x, r):
        """Direct pointwise values of the four coefficient functions."""
        lam, terms, _ = self.terms(x, Arithmetic())
        return tuple(t.value(r, lam) for t in terms)


class _SubThreshold(_Problem):
    """Root variable eps = sqrt((m - E)/(m + E))."""

    m: float

    def energy(self, eps):
        return self.m * (1 - eps * eps) / (1 + eps * eps)

    def sigma(self, eps):
        return 2 * self.m * eps / (1 + eps * eps)

    def to_variable(self, energy):
        if not -self.m < energy < self.m:
            raise ValueError(f"energy {energy} outside (-m, m)")
        return math.sqrt((self.m - energy) / (self.m + energy))


class CoulombProblem(_SubThreshold):
    """Pure Coulomb in the scaled variable rho = 2 sigma r.

    Parameters
    ----------
    channel : QuantumChannel
    potential : PureCoulomb
    r0 : float
        Expansion point in rho units.
    """

    def __init__(self, channel: QuantumChannel, potential: PureCoulomb,
                 r0: float = 2.0, min_depth: int = 2, max_depth: int = 40):
        self.channel, self.potential = channel, potential
        self.m = potential.m
        self.gamma = origin_exponent(channel, potential)
        self.r0, self.min_depth, self.max_depth = float(r0), min_depth, max_depth

    def ab(self, eps):
        """(a, b) = (E A / sigma, m A / sigma) expressed in eps."""
        A = self.potential.A
        return A * (1 - eps * eps) / (2 * eps), A * (1 + eps * eps) / (2 * eps)

    def terms(self, x, arith):
        eps = arith.real(x)
        a, b = self.ab(eps)
        k, g = arith.real(self.channel.k), arith.sqrt(arith.real(self.channel.k) ** 2
                                                      - arith.real(self.potential.A) ** 2)
        one = arith.real(1)
        terms = (RationalTerm(const=one, inv=-(a + g)), RationalTerm(inv=-(b + k)),
                 RationalTerm(inv=b - k), RationalTerm(inv=a - g))
        return 0, terms, self.energy(eps)


class ScreenedProblem(_SubThreshold):
    """Screened Coulomb in r units.

    ``r0=None`` places the expansion point at 4/sigma, with sigma from the
    point-Coulomb estimate of the energy; the decay length sets the scale at
    which delta converges fastest.
    """

    def __init__(self, channel: QuantumChannel, potential: ScreenedCoulomb,
                 r0: float | None = None, min_depth: int = 2, max_depth: int = 40):
        self.channel, self.potential = channel, potential
        self.m = potential.m
        self.gamma = origin_exponent(channel, potential)
        if r0 is None:
            r0 = 4.0 / self.sigma(self.to_variable(self.estimate()))
        if r0 <= 0:
            raise ValueError("r0 must be positive")
        self.r0, self.min_depth, self.max_depth = float(r0), min_depth, max_depth

    def estimate(self) -> float:
        """Point-Coulomb energy with the same nuclear charge."""
        x = self.potential.v1 / (self.channel.n + self.gamma)
        return self.m / math.sqrt(1 + x * x)

    def default_bracket(self) -> tuple[float, float]:
        """Screening only raises the level, so search above the estimate."""
        e = self.estimate()
        return e - 1e-4 * (self.m - e), e + 0.5 * (self.m - e)

    def terms(self, x, arith):
        eps = arith.real(x)
        m = arith.real(self.m)
        E = m * (1 - eps * eps) / (1 + eps * eps)
        sig = 2 * m * eps / (1 + eps * eps)
        Z = arith.real(self.potential.Z)
        alpha = 1 / arith.real(137.036)
        v1, v2 = Z * alpha, (Z - 1) * alpha
        lam = arith.real(0.98) * alpha * arith.cbrt(Z)
        k = arith.real(self.channel.k)
        g = arith.sqrt(k * k - v1 * v1)
        w = v2 * lam
        terms = (RationalTerm(const=m + sig, inv=-g),
                 RationalTerm(const=-E, inv=-(v1 + k), screen=w),
                 RationalTerm(const=E, inv=v1 - k, screen=-w),
                 RationalTerm(const=sig - m, inv=-g))
        return lam, terms, E


class ConfinedProblem(_Problem):
    """Linear-plus-Coulomb vector with linear scalar potential; root variable E."""

    def __init__(self, channel: QuantumChannel, potential: LinearConfined,
                 r0: float = 1.5, min_depth: int = 20, max_depth: int = 60):
        self.channel, self.potential = channel, potential
        self.m = potential.m
        self.gamma = origin_exponent(channel, potential)
        self.r0, self.min_depth, self.max_depth = float(r0), min_depth, max_depth

    def energy(self, x):
        return x

    def to_variable(self, energy):
        return float(energy)

    def terms(self, x, arith):
        E = arith.real(x)
        p = self.potential
        m, A, B1, B2 = (arith.real(v) for v in (p.m, p.A, p.B1, p.B2))
        k = arith.real(self.channel.k)
        beta = arith.sqrt(B2 * B2 - B1 * B1)
        alpha = (m * B2 + E * B1) / beta
        g = arith.sqrt(k * k - A * A)
        terms = (RationalTerm(const=m + alpha, inv=-g, lin=beta + B2),
                 RationalTerm(const=-E, inv=-(A + k), lin=B1),
                 RationalTerm(const=E, inv=A - k, lin=-B1),
                 RationalTerm(const=alpha - m, inv=-g, lin=beta - B2))
        return 0, terms, E


def make_problem(potential: PotentialSpec, channel: QuantumChannel, r0=None, **kw):
    """Pick the problem class matching the potential family."""
    if isinstance(potential, PureCoulomb):
        return CoulombProblem(channel, potential, 2.0 if r0 is None else r0, **kw)
    if isinstance(potential, ScreenedCoulomb):
        return ScreenedProblem(channel, potential, r0, **kw)
    if isinstance(potential, LinearConfined):
        return ConfinedProblem(channel, potential, 1.5 if r0 is None else r0, **kw)
    raise TypeError(f"unknown potential {potential!r}")


# thin functional builders
def coulomb_system(channel, A, m, eps, r0=2.0, degree=42, bits=None) -> CoefficientSystem:
    return CoulombProblem(channel, PureCoulomb(A, m), r0)(eps, degree, bits)


def screened_system(channel, Z, m, eps, r0=2.0, degree=42, bits=None) -> CoefficientSystem:
    return ScreenedProblem(channel, ScreenedCoulomb(Z, m), r0)(eps, degree, bits)


def confined_system(channel, A, B1, B2, m, E, r0=1.5, degree=42, bits=None) -> CoefficientSystem:
    return ConfinedProblem(channel, LinearConfined(A, B1, B2, m), r0)(E, degree, bits)
