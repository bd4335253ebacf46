"""Working-precision scalars: plain floats or gmpy2 ``mpfr`` values.

The AIM recursion cancels heavily at depth, so eigenvalue work runs in
multiple precision. Everything else can stay in double. An
:class:`Arithmetic` instance hides which of the two is in use.
"""
from __future__ import annotations

import contextlib
import math

import gmpy2
import numpy as np

DOUBLE_BITS = 53


def precision_for_depth(depth: int) -> int:
    """Bits of mantissa that keep ``depth`` AIM levels clean."""
    return 96 + 6 * int(depth)


class Arithmetic:
    """Scalar factory at a fixed precision.

    Parameters
    ----------
    bits : int or None
        Mantissa bits. ``None`` or anything <= 53 selects native floats.
    """

    def __init__(self, bits: int | None = None):
        self.bits = None if bits is None or bits <= DOUBLE_BITS else int(bits)

    @property
    def extended(self) -> bool:
        return self.bits is not None

    def context(self):
        if self.bits is None:
            return contextlib.nullcontext()
        return gmpy2.context(gmpy2.get_context(), precision=self.bits)

    def real(self, x):
        if self.bits is None:
            return float(x)
        return gmpy2.mpfr(x, self.bits)

    def sqrt(self, x):
        return math.sqrt(x) if self.bits is None else gmpy2.sqrt(self.real(x))

    def cbrt(self, x):
        return float(np.cbrt(x)) if self.bits is None else gmpy2.cbrt(self.real(x))

    def zeros(self, n: int) -> np.ndarray:
        if self.bits is None:
            return np.zeros(n)
        out = np.empty(n, dtype=object)
        out[:] = [gmpy2.mpfr(0, self.bits) for _ in range(n)]
        return out

    def array(self, values) -> np.ndarray:
        if self.bits is None:
            return np.asarray(values, dtype=float)
        return np.array([self.real(v) for v in values], dtype=object)

    def __repr__(self):
        return f"Arithmetic(bits={self.bits})"


def is_extended_array(a: np.ndarray) -> bool:
    return a.dtype == object


_MPFR = type(gmpy2.mpfr(0))


def scalar_exp(x):
    return gmpy2.exp(x) if isinstance(x, _MPFR) else math.exp(x)


def all_finite(a: np.ndarray) -> bool:
    if a.dtype == object:
        return all(gmpy2.is_finite(gmpy2.mpfr(v)) for v in a)
    return bool(np.all(np.isfinite(a)))
