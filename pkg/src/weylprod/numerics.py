"""Low-level numeric helpers shared across the package.

Everything here is about evaluating log(2 sin(pi x)) accurately for points
that may sit very close to 0 or 1, and about summing long series of such
terms without throwing that accuracy away again.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np

LOG2 = math.log(2.0)

# generous per-term bound for the double-precision log(2 sin pi x) kernel:
# the argument is reflected into (0, 1/2], so the sine keeps a few-ulp
# relative error and the log adds one more rounding.
TERM_EPS = 3e-16


def log_two_sin_pi(x) -> float:
    """log(2 sin(pi x)) in double precision for x in (0, 1).

    Fraction and float inputs are reflected to (0, 1/2] before the sine is
    evaluated (exactly: 1 - x is computed without rounding), so the result
    keeps full relative accuracy near both endpoints.
    """
    if isinstance(x, Fraction):
        if 2 * x > 1:
            x = 1 - x
        xf = float(x)
    else:
        xf = float(x)
        if xf > 0.5:
            xf = 1.0 - xf  # exact for xf in [0.5, 1]
    if not 0.0 < xf <= 0.5:
        raise ValueError(f"point {x!r} outside (0, 1)")
    return math.log(2.0 * math.sin(math.pi * xf))


def log_two_sin_pi_array(x: np.ndarray) -> np.ndarray:
    """Vectorized log(2 sin(pi x)) for an array with entries in (0, 1)."""
    r = np.where(x > 0.5, 1.0 - x, x)
    return np.log(2.0 * np.sin(np.pi * r))


def log_two_sin_pi_mp(x, prec: int):
    """log(2 sin(pi x)) as an mpf, evaluated at `prec` bits.

    mpmath's sinpi reduces the argument exactly, which is what makes points
    within 2^-p of an integer safe to use here.
    """
    with mpmath.mp.workprec(prec):
        return mpmath.log(2 * mpmath.sinpi(x))


class NeumaierSum:
    """Running compensated sum (Neumaier's variant of Kahan summation)."""

    __slots__ = ("_s", "_c")

    def __init__(self, start=0.0):
        self._s = float(start)
        self._c = 0.0

    def add(self, v: float) -> None:
        t = self._s + v
        if abs(self._s) >= abs(v):
            self._c += (self._s - t) + v
        else:
            self._c += (v - t) + self._s
        self._s = t

    @property
    def value(self) -> float:
        return self._s + self._c


def compensated_cumsum(a: np.ndarray, block: int = 4096) -> np.ndarray:
    """Prefix sums of `a` with rounding error O(block * eps), not O(n * eps).

    Plain np.cumsum loses ~n*eps absolute accuracy over millions of terms;
    here each block is cumsum'd locally and chained through an exactly
    accumulated carry (fsum per block, Neumaier across blocks).
    """
    a = np.asarray(a, dtype=np.float64)
    out = np.empty_like(a)
    carry = NeumaierSum()
    for lo in range(0, len(a), block):
        hi = min(lo + block, len(a))
        np.cumsum(a[lo:hi], out=out[lo:hi])
        out[lo:hi] += carry.value
        carry.add(math.fsum(a[lo:hi].tolist()))
    return out


def as_float_array(points) -> np.ndarray:
    """Convert a sequence of Fraction/mpf/float points to a float64 array."""
    conv = getattr(points, "to_float_array", None)
    if conv is not None:
        return conv()
    return np.array([float(x) for x in points], dtype=np.float64)


def decimal_str(x, digits: int = 40) -> str:
    """Render a value with `digits` significant decimal digits.

    Fractions are converted at enough binary precision that all requested
    digits are meaningful; mpf and float values print their exact binary
    content (lossless round-trip for doubles).
    """
    if isinstance(x, Fraction):
        with mpmath.mp.workprec(int(digits * 3.33) + 24):
            v = mpmath.mpf(x.numerator) / x.denominator
            return mpmath.nstr(v, digits)
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, digits)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    xf = float(x)
    if math.isinf(xf) or math.isnan(xf):
        return repr(xf)
    with mpmath.mp.workprec(60):
        return mpmath.nstr(mpmath.mpf(xf), digits)
