"""Truncated power series about a fixed expansion point.

Coefficients are Taylor coefficients: ``coeffs[i] = f^(i)(center) / i!``.
They live in a numpy array that is either float64 or an object array of
``gmpy2.mpfr`` values, and every operation here works on both.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CenterMismatchError, DegreeExhaustedError, SingularExpansionError
from .precision import all_finite, scalar_exp


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Degree-D polynomial approximation of a function about ``center``.

    Parameters
    ----------
    coeffs : array_like
        Taylor coefficients, length D+1. Must be finite.
    center : float
        Expansion point.

    Examples
    --------
    >>> s = TruncatedSeries([1.0, 1.0]) * TruncatedSeries([1.0, -1.0, 0.0])
    >>> s.coeffs.tolist()
    [1.0, 0.0]
    """

    coeffs: np.ndarray
    center: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.dtype != object:
            c = c.astype(float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a non-empty 1-d sequence")
        if not all_finite(c):
            raise ValueError("series coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def _raw(cls, coeffs: np.ndarray, center) -> "TruncatedSeries":
        # trusted internal path: skip validation in hot loops
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", coeffs)
        object.__setattr__(obj, "center", center)
        return obj

    # -- constructors ---------------------------------------------------
    @classmethod
    def constant(cls, value, degree: int, center=0.0) -> "TruncatedSeries":
        c = _zeros_like_scalar(value, degree + 1)
        c[0] = value
        return cls._raw(c, center)

    @classmethod
    def variable(cls, center, degree: int) -> "TruncatedSeries":
        """The identity function x = center + h."""
        c = _zeros_like_scalar(center, degree + 1)
        c[0] = center
        if degree >= 1:
            c[1] = c[0] ** 0 if c.dtype == object else 1.0
        return cls._raw(c, center)

    # -- basic properties -------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def truncate(self, degree: int) -> "TruncatedSeries":
        if degree > self.degree:
            raise ValueError("cannot raise degree by truncation")
        return TruncatedSeries._raw(self.coeffs[: degree + 1], self.center)

    def _check(self, other: "TruncatedSeries") -> int:
        if other.center != self.center:
            raise CenterMismatchError(
                f"series centers differ: {self.center} vs {other.center}")
        return min(self.degree, other.degree)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            d = self._check(other)
            return TruncatedSeries._raw(self.coeffs[: d + 1] + other.coeffs[: d + 1], self.center)
        c = self.coeffs.copy()
        c[0] = c[0] + other
        return TruncatedSeries._raw(c, self.center)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(-self.coeffs, self.center)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            d = self._check(other)
            prod = np.convolve(self.coeffs[: d + 1], other.coeffs[: d + 1])[: d + 1]
            return TruncatedSeries._raw(prod, self.center)
        return TruncatedSeries._raw(self.coeffs * other, self.center)

    __rmul__ = __mul__

    def derivative(self) -> "TruncatedSeries":
        if self.degree == 0:
            raise DegreeExhaustedError("derivative of a degree-0 series")
        c = self.coeffs[1:] * np.arange(1, self.degree + 1)
        return TruncatedSeries._raw(c, self.center)

    def integral(self) -> "TruncatedSeries":
        """Antiderivative vanishing at the center; degree grows by one."""
        c = _zeros_like_scalar(self.coeffs[0], self.degree + 2)
        c[1:] = self.coeffs / np.arange(1, self.degree + 2)
        return TruncatedSeries._raw(c, self.center)

    def reciprocal(self) -> "TruncatedSeries":
        a = self.coeffs
        if a[0] == 0:
            raise SingularExpansionError(
                f"reciprocal of a series vanishing at its center {self.center}")
        g = _zeros_like_scalar(a[0], len(a))
        g[0] = 1 / a[0]
        for k in range(1, len(a)):
            g[k] = -np.dot(a[1:k + 1], g[k - 1::-1]) * g[0]
        return TruncatedSeries._raw(g, self.center)

    def exp(self) -> "TruncatedSeries":
        f = self.coeffs
        g = _zeros_like_scalar(f[0], len(f))
        g[0] = scalar_exp(f[0])
        df = f * np.arange(len(f))
        for k in range(1, len(f)):
            g[k] = np.dot(df[1:k + 1], g[k - 1::-1]) / k
        return TruncatedSeries._raw(g, self.center)

    def eval(self, x):
        """Horner evaluation at ``x`` (scalar or array)."""
        h = np.asarray(x) - self.center if not np.isscalar(x) else x - self.center
        acc = self.coeffs[-1] + 0 * h
        for c in self.coeffs[-2::-1]:
            acc = acc * h + c
        return acc

    def __call__(self, x):
        return self.eval(x)

    def __repr__(self):
        return f"TruncatedSeries(degree={self.degree}, center={self.center}, coeffs={self.coeffs!r})"


def _zeros_like_scalar(value, n: int) -> np.ndarray:
    if isinstance(value, (float, int, np.floating, np.integer)):
        return np.zeros(n)
    out = np.empty(n, dtype=object)
    out[:] = [value * 0 for _ in range(n)]
    return out


# functional spellings of the operations
def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def derivative(a: TruncatedSeries) -> TruncatedSeries:
    return a.derivative()


def reciprocal(a: TruncatedSeries) -> TruncatedSeries:
    return a.reciprocal()


def eval_series(a: TruncatedSeries, x):
    return a.eval(x)
