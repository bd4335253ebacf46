"""Approximate radial wavefunctions from the AIM generator.

Near r = 0 the ratio alpha = s_n / lambda_n is analytic once the
Coulomb poles are factored out: with L_n = r^(n+1) lambda_n and
S_n = r^(n+1) s_n the recursion reads

    L_{n+1} = r L_n' - (n+1) L_n + L_n (r lambda0) + S_n (r omega0)
    S_{n+1} = r S_n' - (n+1) S_n + L_n (r s0)      + S_n (r p0)

and alpha = S_n / L_n. Its Taylor coefficients are exact through order n.
Then

    phi2 = exp( int (r p0 - r omega0 alpha) / r dr ),   phi1 = -alpha phi2

where the integrand's pole residue vanishes identically, and the G and F
polynomial factors are phi1 + phi2 and phi1 - phi2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import GeneratorSingular
from .models import (AsymptoticFactor, ConfinedProblem, CoulombProblem, ScreenedProblem,
                     asymptotic_factor)
from .precision import Arithmetic, precision_for_depth
from .series import TruncatedSeries

DEFAULT_ORDER = 15
P = np.polynomial.polynomial


@dataclass(frozen=True, eq=False)
class GeneratedWavefunction:
    """Polynomial-times-envelope approximation of (G, F).

    ``poly_g`` and ``poly_f`` hold the coefficients a_k and b_k of the
    polynomial factors in the variable r / ``length_unit`` (rho for the
    pure Coulomb family, r otherwise). ``weights`` multiply G and F
    separately (sqrt(m +- E) for pure Coulomb, 1 otherwise).
    """

    family: str
    channel: object
    potential: object
    energy: float
    phi1: np.ndarray
    phi2: np.ndarray
    factor: AsymptoticFactor
    length_unit: float
    weights: tuple[float, float]
    order: int
    depth: int
    norm: float = 1.0
    valid_radius: float = math.inf

    @property
    def poly_g(self) -> np.ndarray:
        return self.phi1 + self.phi2

    @property
    def poly_f(self) -> np.ndarray:
        return self.phi1 - self.phi2

    def scaled_coefficients(self, a0: float) -> tuple[np.ndarray, np.ndarray]:
        """(a_k, b_k) rescaled so that a_0 equals ``a0``."""
        s = a0 / self.poly_g[0]
        return self.poly_g * s, self.poly_f * s


def _times_r_derivative(c: np.ndarray) -> np.ndarray:
    return c * np.arange(len(c))


def alpha_ratio(problem, energy: float, order: int, depth: int | None = None,
                bits: int | None = None) -> tuple[TruncatedSeries, list[TruncatedSeries]]:
    """alpha = s_n / lambda_n about r=0, plus the regular coefficient series.

    Returns
    -------
    alpha : TruncatedSeries of degree ``order``
    base : [r lambda0, r s0, r omega0, r p0] about 0
    """
    depth = order + 2 if depth is None else depth
    bits = precision_for_depth(depth) if bits is None else bits
    arith = Arithmetic(bits)
    x = problem.to_variable(energy)
    with arith.context():
        l0, s0, w0, p0 = problem.regular_system(x, order + 1, bits)
        L, S = l0.coeffs, s0.coeffs
        deg = len(L) - 1

        def conv(a, b):
            return np.convolve(a, b)[: deg + 1]

        for n in range(depth):
            L, S = (_times_r_derivative(L) - (n + 1) * L + conv(L, l0.coeffs) + conv(S, w0.coeffs),
                    _times_r_derivative(S) - (n + 1) * S + conv(L, s0.coeffs) + conv(S, p0.coeffs))
            # rescale to keep magnitudes tame; alpha only needs the ratio
            big = max(abs(L[0]), abs(S[0]))
            if big == 0:
                raise GeneratorSingular(f"lambda_{n + 1} and s_{n + 1} vanish at r=0")
            L, S = L / big, S / big
        if L[0] == 0:
            raise GeneratorSingular(f"lambda_{depth} vanishes at r=0; retry deeper")
        Ls, Ss = TruncatedSeries._raw(L, l0.center), TruncatedSeries._raw(S, l0.center)
        alpha = (Ss * Ls.reciprocal()).truncate(order)
    return alpha, [l0, s0, w0, p0]


def generate_phi2(problem, energy: float, order: int = DEFAULT_ORDER,
                  depth: int | None = None, bits: int | None = None) -> np.ndarray:
    """Polynomial factor phi2 (with phi2(0) = 1) to degree ``order``."""
    depth = order + 2 if depth is None else depth
    bits = precision_for_depth(depth) if bits is None else bits
    alpha, base = alpha_ratio(problem, energy, order, depth, bits)
    with Arithmetic(bits).context():
        return _to_float(_phi2_series(alpha, base, order))


def _to_float(s: TruncatedSeries) -> np.ndarray:
    return np.array([float(c) for c in s.coeffs])


def _phi2_series(alpha, base, order) -> TruncatedSeries:
    _, _, w0, p0 = base
    num = p0.truncate(order) - w0.truncate(order) * alpha
    residue = num.coeffs[0]
    scale = max(abs(c) for c in p0.coeffs[:2]) or 1
    if abs(float(residue / scale)) > 1e-8:
        raise GeneratorSingular(f"integrand keeps a pole residue {float(residue):.3e}")
    # the residue integrates to gamma ln r, already in the r^gamma prefactor
    q = TruncatedSeries._raw(num.coeffs[1:], num.center)
    return q.integral().exp().truncate(order)


def generate_phi1(phi2, alpha: TruncatedSeries, order: int = DEFAULT_ORDER) -> np.ndarray:
    """phi1 = -alpha phi2, truncated to degree ``order``.

    ``phi2`` may be a float array or a series at working precision. The
    product cancels heavily at high order (alpha's coefficients grow like
    the inverse distance to the nearest node of phi2), so pass the
    extended-precision series when ``order`` is large.
    """
    if not isinstance(phi2, TruncatedSeries):
        phi2 = TruncatedSeries(np.asarray(phi2, dtype=float))
        alpha = TruncatedSeries(_to_float(alpha))
    return _to_float(-(alpha.truncate(order) * phi2.truncate(order)))


def generate_wavefunction(problem, energy: float, order: int = DEFAULT_ORDER,
                          depth: int | None = None, bits: int | None = None,
                          normalize: bool = True) -> GeneratedWavefunction:
    """Build, and optionally normalize, the approximate (G, F) of a state."""
    depth = order + 2 if depth is None else depth
    bits = precision_for_depth(depth) if bits is None else bits
    alpha, base = alpha_ratio(problem, energy, order, depth, bits)
    with Arithmetic(bits).context():
        phi2s = _phi2_series(alpha, base, order)
        phi1 = generate_phi1(phi2s, alpha, order)
        phi2 = _to_float(phi2s)
    pot, ch = problem.potential, problem.channel
    factor = asymptotic_factor(pot, ch, energy)
    if isinstance(problem, CoulombProblem):
        unit = 1 / (2 * factor.sigma)
        weights = (math.sqrt(pot.m + energy), math.sqrt(pot.m - energy))
    else:
        unit, weights = 1.0, (1.0, 1.0)
    gen = GeneratedWavefunction(pot.family, ch, pot, float(energy), phi1, phi2, factor,
                                unit, weights, order, depth)
    radius = _valid_radius(gen)
    gen = _replace(gen, valid_radius=radius)
    if normalize:
        gen = _replace(gen, norm=_norm(gen))
    return gen


def _replace(gen, **kw):
    fields = dict(gen.__dict__)
    fields.update(kw)
    return GeneratedWavefunction(**fields)


def _valid_radius(gen: GeneratedWavefunction, rtol: float = 1e-10) -> float:
    """Largest r where the tail terms of both polynomials are negligible."""
    f = gen.factor
    cap = 40 / f.sigma if f.sigma else _confined_cap(f)
    tail = 3
    for poly in (gen.poly_g, gen.poly_f):
        if len(poly) <= tail or not np.any(poly[-tail:]):
            continue
        lo, hi = 0.0, cap
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            x = mid / gen.length_unit
            terms = np.abs(poly) * x ** np.arange(len(poly))
            if terms[-tail:].sum() <= rtol * terms.sum():
                lo = mid
            else:
                hi = mid
        cap = min(cap, lo)
    return cap


def _confined_cap(f: AsymptoticFactor) -> float:
    # radius where the Gaussian envelope has fallen by e^-60
    a, b = f.alpha_lin, f.beta_lin
    return (-a + math.sqrt(a * a + 120 * b)) / b


def _raw_samples(gen: GeneratedWavefunction, r):
    r = np.asarray(r, dtype=float)
    x = r / gen.length_unit
    env = np.power(r, gen.factor.gamma) * np.exp(-gen.factor.exponent(r))
    return (gen.weights[0] * env * P.polyval(x, gen.poly_g),
            gen.weights[1] * env * P.polyval(x, gen.poly_f))


def _norm(gen: GeneratedWavefunction) -> float:
    def dens(r):
        G, F = _raw_samples(gen, r)
        return G * G + F * F
    upper = gen.valid_radius
    total = quad(dens, 0, upper, limit=400, epsabs=0, epsrel=1e-12)[0]
    return 1 / math.sqrt(total)


def reconstruct(gen: GeneratedWavefunction, r_samples) -> tuple[np.ndarray, np.ndarray]:
    """Sample (G, F). Values past ``gen.valid_radius`` are unreliable."""
    r = np.asarray(r_samples, dtype=float)
    if np.any(r <= 0):
        raise ValueError("radii must be positive")
    G, F = _raw_samples(gen, r)
    return gen.norm * G, gen.norm * F


def reconstruct_derivatives(gen: GeneratedWavefunction, r_samples):
    """Analytic (G', F') of the reconstructed functions."""
    r = np.asarray(r_samples, dtype=float)
    x = r / gen.length_unit
    env = np.power(r, gen.factor.gamma) * np.exp(-gen.factor.exponent(r))
    slope = gen.factor.gamma / r - gen.factor.exponent_slope(r)
    out = []
    for w, poly in zip(gen.weights, (gen.poly_g, gen.poly_f)):
        val = P.polyval(x, poly)
        der = P.polyval(x, P.polyder(poly)) / gen.length_unit if len(poly) > 1 else 0 * x
        out.append(gen.norm * w * env * (der + slope * val))
    return tuple(out)


def ode_residual(gen: GeneratedWavefunction, r_samples) -> float:
    """Max pointwise residual of the raw radial equations, relative to
    max(|G'|, |F'|) over the samples."""
    r = np.asarray(r_samples, dtype=float)
    G, F = reconstruct(gen, r)
    dG, dF = reconstruct_derivatives(gen, r)
    k, E, m = gen.channel.k, gen.energy, gen.potential.m
    V, U = gen.potential.vector(r), gen.potential.scalar(r)
    res_g = dG - (-k / r * G + (E + m - V + U) * F)
    res_f = dF - (-(E - m - V - U) * G + k / r * F)
    scale = max(np.max(np.abs(dG)), np.max(np.abs(dF)))
    return float(max(np.max(np.abs(res_g)), np.max(np.abs(res_f))) / scale)
