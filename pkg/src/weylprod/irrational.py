"""Exact arithmetic for quadratic irrationals alpha = (a + b*sqrt(d))/c.

Continued fractions, convergents, Ostrowski digit expansions and
floor(n*alpha) are computed on plain integers: the only irrational
ingredient, sqrt(d), enters through comparisons that reduce to integer
square comparisons. Every combinatorial quantity downstream is therefore
exact. Fractional parts {n*alpha} are evaluated with mpmath at a precision
budget wide enough that sine products over them can be trusted far below
double precision.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import mpmath

DEFAULT_N_MAX = 2 ** 24


def default_precision_bits(n_max: int) -> int:
    """64 guard bits plus two bits per doubling of the index budget.

    ||n*alpha|| can shrink like 1/n, and log(2 sin(pi {n*alpha})) then
    needs about log2(n) extra bits; doubling that and adding 64 leaves a
    comfortable margin.
    """
    return 64 + 2 * max(2, (max(n_max, 2) - 1).bit_length())


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def surd_sign(u: int, v: int, d: int) -> int:
    """Sign of u + v*sqrt(d), exact, for non-square d >= 2.

    Equality with zero is impossible when v != 0 because sqrt(d) is
    irrational.
    """
    if v == 0:
        return (u > 0) - (u < 0)
    if v > 0:
        if u >= 0:
            return 1
        return 1 if v * v * d > u * u else -1
    if u <= 0:
        return -1
    return 1 if u * u > v * v * d else -1


def surd_cmp(u: int, v: int, d: int, num: int, den: int) -> int:
    """Sign of (u + v*sqrt(d)) - num/den for den > 0."""
    if den <= 0:
        raise ValueError("den must be positive")
    return surd_sign(u * den - num, v * den, d)


def floor_surd(p: int, q: int, r: int, d: int) -> int:
    """floor((p + q*sqrt(d)) / r) exactly, for r != 0 and non-square d >= 2.

    With t = floor(q*sqrt(d)) (an isqrt), floor((p + q*sqrt(d))/r) equals
    floor((p + t)/r): no multiple of r can lie strictly between p + t and
    p + q*sqrt(d) because the latter is irrational.
    """
    if r == 0:
        raise ZeroDivisionError("r must be nonzero")
    if r < 0:
        p, q, r = -p, -q, -r
    if q == 0:
        return p // r
    if q > 0:
        t = math.isqrt(q * q * d)
    else:
        t = -math.isqrt(q * q * d) - 1
    return (p + t) // r


@dataclass(frozen=True)
class IrrationalSpec:
    """alpha = (a + b*sqrt(d)) / c, constrained to the open unit interval."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.c == 0:
            raise ValueError("c must be nonzero")
        if self.c < 0:
            object.__setattr__(self, "a", -self.a)
            object.__setattr__(self, "b", -self.b)
            object.__setattr__(self, "c", -self.c)
        if self.b == 0:
            raise ValueError("b = 0 would make alpha rational")
        if self.d < 2 or is_perfect_square(self.d):
            raise ValueError(f"d = {self.d} must be a non-square integer >= 2")
        if surd_sign(self.a, self.b, self.d) <= 0:
            raise ValueError("alpha must be positive")
        if surd_sign(self.a - self.c, self.b, self.d) >= 0:
            raise ValueError("alpha must be less than 1")

    def mpf(self, prec: int = 160):
        """alpha as an mpf rounded at `prec` bits."""
        with mpmath.mp.workprec(prec + 8):
            v = (self.a + self.b * mpmath.sqrt(self.d)) / self.c
        with mpmath.mp.workprec(prec):
            return +v

    def __str__(self):
        sign = "+" if self.b >= 0 else "-"
        return f"({self.a}{sign}{abs(self.b)}*sqrt({self.d}))/{self.c}"


SHORTHANDS = {
    "sqrt2m1": IrrationalSpec(-1, 1, 1, 2),   # sqrt(2) - 1
    "golden": IrrationalSpec(-1, 1, 2, 5),    # (sqrt(5) - 1) / 2
}

_ALPHA_RE = re.compile(
    r"^\(\s*(-?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\)"
    r"\s*(?:/\s*(-?\d+)\s*)?$"
)


def parse_alpha(text: str) -> IrrationalSpec:
    """Parse "(a+b*sqrt(d))/c" or the shorthands "sqrt2m1" / "golden"."""
    key = text.strip()
    if key in SHORTHANDS:
        return SHORTHANDS[key]
    m = _ALPHA_RE.match(key)
    if not m:
        raise ValueError(
            f"cannot parse alpha spec {text!r}; expected '(a+b*sqrt(d))/c' "
            f"or one of {sorted(SHORTHANDS)}"
        )
    a = int(m.group(1))
    b = int(m.group(3)) * (-1 if m.group(2) == "-" else 1)
    d = int(m.group(4))
    c = int(m.group(5)) if m.group(5) else 1
    return IrrationalSpec(a, b, c, d)


@dataclass(frozen=True)
class ConvergentTable:
    """Partial quotients a_1..a_K with convergents p_i/q_i, i = 0..K.

    q_0 = 1 and p_0 = 0 (alpha lies in (0,1)); the usual recursion
    q_{i+1} = a_{i+1} q_i + q_{i-1} then generates the best approximation
    denominators.
    """

    alpha: IrrationalSpec
    partial_quotients: tuple
    p: tuple
    q: tuple

    @property
    def depth(self) -> int:
        return len(self.partial_quotients)

    def level_of(self, n: int) -> int:
        """Largest l with q_l <= n; requires the table to reach past n."""
        if n < 1:
            raise ValueError("n must be positive")
        if self.q[-1] <= n:
            raise ValueError(
                f"convergent table too shallow: q_K = {self.q[-1]} <= {n}"
            )
        l = len(self.q) - 1
        while self.q[l] > n:
            l -= 1
        return l


def cf_expand(alpha: IrrationalSpec, K: int) -> ConvergentTable:
    """Continued fraction expansion of alpha to K partial quotients.

    Works on the surd state x_i = (p + q*sqrt(d))/r with integer p, q, r;
    each step inverts the fractional part and takes an exact floor, so the
    expansion (eventually periodic for quadratic irrationals) is exact.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    d = alpha.d
    p_, q_, r_ = alpha.a, alpha.b, alpha.c
    a_cur = 0  # floor(alpha) = 0 since alpha in (0, 1)
    quots = []
    ps = [0]
    qs = [1]
    pprev, pcur = 1, 0
    qprev, qcur = 0, 1
    for _ in range(K):
        # x <- 1 / (x - a_cur)
        p_ -= a_cur * r_
        denom = p_ * p_ - q_ * q_ * d
        p_, q_, r_ = r_ * p_, -r_ * q_, denom
        g = math.gcd(math.gcd(abs(p_), abs(q_)), abs(r_))
        if g > 1:
            p_, q_, r_ = p_ // g, q_ // g, r_ // g
        if r_ < 0:
            p_, q_, r_ = -p_, -q_, -r_
        a_cur = floor_surd(p_, q_, r_, d)
        if a_cur < 1:
            raise AssertionError("partial quotient < 1; invalid surd state")
        quots.append(a_cur)
        pprev, pcur = pcur, a_cur * pcur + pprev
        qprev, qcur = qcur, a_cur * qcur + qprev
        ps.append(pcur)
        qs.append(qcur)
    return ConvergentTable(alpha, tuple(quots), tuple(ps), tuple(qs))


def cf_expand_until(alpha: IrrationalSpec, q_min: int, max_K: int = 512) -> ConvergentTable:
    """Expand until the last denominator exceeds q_min."""
    K = 8
    while K <= max_K:
        table = cf_expand(alpha, K)
        if table.q[-1] > q_min:
            return table
        K *= 2
    raise ValueError(f"denominators did not exceed {q_min} within {max_K} quotients")


@dataclass(frozen=True)
class OstrowskiDigits:
    """Digits b_0..b_l of N in the q_i numeration system, greedy form."""

    digits: tuple
    value: int
    level: int

    def reconstruct(self, table: ConvergentTable) -> int:
        return sum(b * q for b, q in zip(self.digits, table.q))


def ostrowski(N: int, table: ConvergentTable) -> OstrowskiDigits:
    """Greedy digit expansion N = sum b_i q_i with q_l <= N < q_{l+1}.

    The greedy choice from the top yields the canonical form: b_i <= a_{i+1},
    b_0 < a_1, and b_i = a_{i+1} forces b_{i-1} = 0.
    """
    if N < 1:
        raise ValueError("N must be positive")
    l = table.level_of(N)
    rem = N
    digits = [0] * (l + 1)
    for i in range(l, -1, -1):
        digits[i], rem = divmod(rem, table.q[i])
    if rem != 0:
        raise AssertionError("greedy expansion left a remainder")
    return OstrowskiDigits(tuple(digits), N, l)


def type_exponent_estimate(table: ConvergentTable, min_q: int = 10) -> float:
    """max over tabulated i of log q_{i+1} / log q_i as a growth proxy.

    Indices with q_i < min_q are skipped: for tiny denominators the ratio
    reflects the start-up of the recursion, not the approximation type.
    Falls back to all q_i >= 2 if the table never reaches min_q.
    """
    if table.depth < 3:
        raise ValueError("need at least 3 partial quotients")
    for floor_q in (min_q, 2):
        ratios = [
            math.log(table.q[i + 1]) / math.log(table.q[i])
            for i in range(1, len(table.q) - 1)
            if table.q[i] >= floor_q
        ]
        if ratios:
            return max(ratios)
    raise ValueError("table too shallow for a growth estimate")


@dataclass(frozen=True)
class FractionalPart:
    """{n*alpha} as an mpf plus an absolute error bound."""

    value: object
    error_bound: float


class FracPartEvaluator:
    """Evaluates {n*alpha} with an exact integer floor and an mpf remainder.

    The precision budget is fixed up front from the largest admissible n
    (default 2^24), so every returned value carries the same absolute error
    bound 2^(2 - precision_bits).
    """

    def __init__(self, alpha: IrrationalSpec, n_max: int = DEFAULT_N_MAX,
                 precision_bits: int | None = None):
        if n_max < 1:
            raise ValueError("n_max must be positive")
        self.alpha = alpha
        self.n_max = n_max
        self.precision_bits = precision_bits or default_precision_bits(n_max)
        if self.precision_bits < 68:
            raise ValueError("precision_bits must be >= 68 to keep the "
                             "error bound below 2^-64")
        surd_bits = (alpha.b * alpha.b * alpha.d).bit_length() // 2 + 2
        self._work = self.precision_bits + n_max.bit_length() + surd_bits + 12
        with mpmath.mp.workprec(self._work):
            self._sqrt_d = mpmath.sqrt(alpha.d)
        self.error_bound = math.ldexp(1.0, 2 - self.precision_bits)

    def floor_n_alpha(self, n: int) -> int:
        a = self.alpha
        return floor_surd(n * a.a, n * a.b, a.c, a.d)

    def frac_part(self, n: int) -> FractionalPart:
        if not 1 <= n <= self.n_max:
            raise ValueError(f"n = {n} outside the configured budget "
                             f"[1, {self.n_max}]")
        a = self.alpha
        m = floor_surd(n * a.a, n * a.b, a.c, a.d)
        with mpmath.mp.workprec(self._work):
            v = (n * a.a - m * a.c + n * a.b * self._sqrt_d) / a.c
        with mpmath.mp.workprec(self.precision_bits):
            v = +v
        return FractionalPart(v, self.error_bound)


def frac_part(n: int, alpha: IrrationalSpec, n_max: int = DEFAULT_N_MAX,
              precision_bits: int | None = None) -> FractionalPart:
    """One-shot {n*alpha}; build a FracPartEvaluator for repeated calls."""
    return FracPartEvaluator(alpha, n_max, precision_bits).frac_part(n)


def surd_from_cf(prefix, period) -> IrrationalSpec:
    """The quadratic irrational [0; prefix..., (period...)^inf] in (0, 1).

    Lets tests construct alphas with prescribed partial quotients, e.g. one
    huge quotient injected mid-expansion.
    """
    prefix = list(prefix)
    period = list(period)
    if not period:
        raise ValueError("period must be nonempty")
    if any(t < 1 for t in prefix + period):
        raise ValueError("partial quotients must be >= 1")
    # tail y = [period; y]: y = (P y + Q) / (R y + S)
    P, Q, R, S = 1, 0, 0, 1
    for t in period:
        P, Q, R, S = P * t + Q, P, R * t + S, R
    disc = (S - P) ** 2 + 4 * R * Q
    if disc <= 0 or is_perfect_square(disc):
        raise ValueError("period does not define a quadratic irrational")
    # y = (u + sqrt(disc)) / w, the root > 1
    u, w = P - S, 2 * R
    # alpha = (A y + B) / (C y + D) with a leading zero quotient
    A, B, C, D = 0, 1, 1, 0
    for t in prefix:
        A, B, C, D = A * t + B, A, C * t + D, C
    n0, n1 = A * u + B * w, A
    m0, m1 = C * u + D * w, C
    a = n0 * m0 - n1 * m1 * disc
    b = n1 * m0 - n0 * m1
    c = m0 * m0 - m1 * m1 * disc
    g = math.gcd(math.gcd(abs(a), abs(b)), abs(c))
    if g > 1:
        a, b, c = a // g, b // g, c // g
    return IrrationalSpec(a, b, c, disc)
