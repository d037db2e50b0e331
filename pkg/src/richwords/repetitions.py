"""Exact repetition analysis: periods, exponents, maximal repetitions.

All comparisons are exact. Exponents are rationals (fractions.Fraction);
irrational thresholds of the form (a + b*sqrt(2))/c are compared with
integer arithmetic only. Floating point appears nowhere except rendering.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple

import numpy as np

from .numeration import pell

__all__ = [
    "Exponent",
    "MaximalRep",
    "SurdThreshold",
    "R_CRITICAL_EXPONENT",
    "smallest_period",
    "exponent_of",
    "is_primitive",
    "period_extension_table",
    "maximal_repetitions",
    "critical_exponent",
    "high_power_periods",
    "PredictedPower",
    "predicted_highest_powers",
    "highest_power_exponent",
    "compare_to_surd",
    "critexp_bound_check",
    "parse_exponent",
]

Exponent = Fraction


def parse_exponent(text: str) -> Fraction:
    """Parse 'a/b' or a plain integer into an exact exponent."""
    f = Fraction(text)
    if f <= 0:
        raise ValueError(f"exponent must be positive, got {text!r}")
    return f


def smallest_period(w: str) -> int:
    """Least p >= 1 with w[i] == w[i+p] for all valid i (border method)."""
    n = len(w)
    if n == 0:
        raise ValueError("empty word has no period")
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and w[i] != w[k]:
            k = fail[k - 1]
        if w[i] == w[k]:
            k += 1
        fail[i] = k
    return n - fail[-1]


def exponent_of(w: str) -> Fraction:
    """Length over smallest period, as an exact rational."""
    return Fraction(len(w), smallest_period(w))


def is_primitive(w: str) -> bool:
    """True iff w is not a proper integer power of a shorter word."""
    p = smallest_period(w)
    return not (len(w) % p == 0 and len(w) // p >= 2)


def _byte_array(w: str) -> np.ndarray:
    return np.frombuffer(w.encode("ascii"), dtype=np.uint8)


def period_extension_table(w: str) -> np.ndarray:
    """ext[p] = longest stretch of positions i with w[i] == w[i+p].

    A stretch of length s at period p witnesses a factor of length s + p
    with period p. Index 0 is unused. O(n^2) total work, vectorized per p.
    """
    n = len(w)
    ext = np.zeros(max(n, 1), dtype=np.int64)
    if n < 2:
        return ext
    arr = _byte_array(w)
    for p in range(1, n):
        eq = arr[p:] == arr[:-p]
        mism = np.flatnonzero(~eq)
        if mism.size == 0:
            ext[p] = eq.size
        else:
            bounds = np.concatenate(((-1,), mism, (eq.size,)))
            ext[p] = int(np.diff(bounds).max()) - 1
    return ext


@dataclass(frozen=True, order=True)
class MaximalRep:
    """A repetition w[start : start+extension+period] that is maximal:
    extendable neither left nor right with the same period."""

    period: int
    start: int
    extension: int

    @property
    def length(self) -> int:
        return self.extension + self.period

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.length, self.period)


def maximal_repetitions(w: str, min_exponent: Fraction | int) -> list[MaximalRep]:
    """All maximal repetitions of w with length/period >= min_exponent,
    ordered by (period, start). The period is not required to be smallest."""
    n = len(w)
    reps: list[MaximalRep] = []
    if n < 2:
        return reps
    t = Fraction(min_exponent)
    arr = _byte_array(w)
    pad = np.zeros(n + 2, dtype=np.int8)
    for p in range(1, n):
        m = n - p
        pad[1 : m + 1] = arr[p:] == arr[:-p]
        pad[m + 1] = 0
        d = np.diff(pad[: m + 2])
        starts = np.flatnonzero(d == 1)
        ends = np.flatnonzero(d == -1)
        for i, e in zip(starts, ends):
            s = int(e - i)
            if t.denominator * (s + p) >= t.numerator * p:
                reps.append(MaximalRep(period=p, start=int(i), extension=s))
    return reps


def critical_exponent(w: str) -> Fraction:
    """Maximum exponent over all nonempty factors of w."""
    if not w:
        raise ValueError("empty word has no critical exponent")
    ext = period_extension_table(w)
    best = Fraction(1)
    for p in range(1, len(w)):
        s = int(ext[p])
        if s * best.denominator > (best.numerator - best.denominator) * p:
            e = Fraction(s + p, p)
            if e > best:
                best = e
    return best


def high_power_periods(w: str, threshold: Fraction | int) -> set[int]:
    """Periods p such that some factor of w with smallest period p has
    exponent >= threshold. The threshold must exceed 1: a qualifying factor
    then spans at least one matching position pair, which is what the
    per-period scan detects."""
    n = len(w)
    t = Fraction(threshold)
    if t <= 1:
        raise ValueError(f"threshold must exceed 1, got {t}")
    found: set[int] = set()
    if n == 0:
        return found
    arr = _byte_array(w)
    for p in range(1, n):
        eq = arr[p:] == arr[:-p]
        mism = np.flatnonzero(~eq)
        bounds = np.concatenate(((-1,), mism, (eq.size,)))
        gaps = np.diff(bounds) - 1
        if t.denominator * (int(gaps.max()) + p) < t.numerator * p:
            continue
        starts = bounds[:-1] + 1
        for i, s in zip(starts, gaps):
            s = int(s)
            if s > 0 and t.denominator * (s + p) >= t.numerator * p:
                # the run factor carries smallest period p exactly when no
                # smaller period explains it (see module tests)
                if smallest_period(w[int(i) : int(i) + s + p]) == p:
                    found.add(p)
                    break
    return found


class PredictedPower(NamedTuple):
    extension: int
    period: int
    exponent: Fraction


def highest_power_exponent(m: int) -> Fraction:
    """The exponent 2 + (P_{m+1} - 1)/(P_{m+1} + P_m) of the m-th predicted
    highest power."""
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    return 2 + Fraction(pell(m + 1) - 1, pell(m + 1) + pell(m))


def predicted_highest_powers(max_m: int) -> list[PredictedPower]:
    """Closed-form (extension, period, exponent) triples of the maximal
    repetitions of the word r: (P_{m+2} - 1, P_{m+1} + P_m) for m >= 1."""
    if max_m < 1:
        raise ValueError(f"max_m must be positive, got {max_m}")
    out = []
    for m in range(1, max_m + 1):
        n = pell(m + 2) - 1
        p = pell(m + 1) + pell(m)
        e = Fraction(n + p, p)
        assert e == highest_power_exponent(m)
        out.append(PredictedPower(extension=n, period=p, exponent=e))
    return out


def _sqrt2_sign(a: int, b: int) -> int:
    """Exact sign of a + b*sqrt(2), by integer arithmetic only."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    lhs, rhs = a * a, 2 * b * b
    if a > 0:  # b < 0: positive iff a^2 > 2b^2
        return (lhs > rhs) - (lhs < rhs)
    return (rhs > lhs) - (rhs < lhs)


@dataclass(frozen=True)
class SurdThreshold:
    """The exact value (a + b*sqrt(2)) / c with c > 0, in lowest terms."""

    a: int
    b: int
    c: int = 1

    def __post_init__(self) -> None:
        if self.c == 0:
            raise ValueError("denominator must be nonzero")
        a, b, c = self.a, self.b, self.c
        if c < 0:
            a, b, c = -a, -b, -c
        g = gcd(gcd(abs(a), abs(b)), c)
        if g > 1:
            a, b, c = a // g, b // g, c // g
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_rational(cls, q: Fraction | int) -> SurdThreshold:
        q = Fraction(q)
        return cls(q.numerator, 0, q.denominator)

    @classmethod
    def parse(cls, text: str) -> SurdThreshold:
        """Parse 'A+Bsqrt2/C' (C optional, defaults to 1)."""
        m = re.fullmatch(r"(-?\d+)\+(-?\d+)sqrt2(?:/(\d+))?", text.replace(" ", ""))
        if not m:
            raise ValueError(f"cannot parse surd threshold {text!r}")
        return cls(int(m.group(1)), int(m.group(2)), int(m.group(3) or 1))

    def compare_rational(self, q: Fraction | int) -> int:
        """Sign of self - q, exactly."""
        q = Fraction(q)
        # (a + b sqrt2)/c - n/d  has the sign of (a d - n c) + b d sqrt2
        return _sqrt2_sign(self.a * q.denominator - q.numerator * self.c,
                           self.b * q.denominator)

    def __float__(self) -> float:
        return (self.a + self.b * 2 ** 0.5) / self.c

    def __str__(self) -> str:
        return f"({self.a}+{self.b}*sqrt2)/{self.c}"


R_CRITICAL_EXPONENT = SurdThreshold(4, 1, 2)  # 2 + sqrt(2)/2


def compare_to_surd(e: Fraction | int, t: SurdThreshold) -> str:
    """Exact ordering of the rational e against t: 'less', 'equal', 'greater'."""
    sign = t.compare_rational(Fraction(e))
    if sign > 0:
        return "less"
    if sign < 0:
        return "greater"
    return "equal"


def critexp_bound_check(m: int) -> bool:
    """Exactly verify, for index m >= 4, that the m-th predicted exponent
    stays below its algebraic bound and below the next one, which in turn
    stays below 2 + sqrt(2)/2."""
    if m < 4:
        raise ValueError(f"m must be at least 4, got {m}")
    e_m = highest_power_exponent(m)
    e_next = highest_power_exponent(m + 1)
    if not e_m < e_next:
        return False
    if R_CRITICAL_EXPONENT.compare_rational(e_next) <= 0:
        return False
    # bound(m) - 2 = (p2*sqrt2 + p2 - p + 1) / (p2*sqrt2 + 2*p2 - 1), p2 = P_m^2
    p = pell(m)
    p2 = p * p
    num_r, num_s = p2 - p + 1, p2  # rational and sqrt2 parts of the numerator
    den_r, den_s = 2 * p2 - 1, p2
    q = e_m - 2
    # e_m - 2 < N/D with D > 0  <=>  N - q*D > 0
    a_part = num_r * q.denominator - q.numerator * den_r
    b_part = num_s * q.denominator - q.numerator * den_s
    return _sqrt2_sign(a_part, b_part) > 0
