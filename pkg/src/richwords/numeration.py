"""Pell numbers and the canonical Pell positional number system.

Integers are written as sums of Pell numbers n = sum(d[i] * P(i+1)) with
digits in {0, 1, 2}. The representation is unique once the least significant
digit is kept below 2 and every 2 is immediately followed (toward the least
significant end) by a 0.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

__all__ = [
    "pell",
    "PellRep",
    "encode",
    "decode",
    "is_canonical",
    "is_high_power_period",
]

# P_0, P_1, ... grown on demand; never shrunk, so slices are stable.
_PELL: list[int] = [0, 1]


def _extend_pell(limit_value: int) -> None:
    while _PELL[-1] <= limit_value:
        _PELL.append(2 * _PELL[-1] + _PELL[-2])


def pell(n: int) -> int:
    """Return the n-th Pell number (P_0 = 0, P_1 = 1, P_n = 2P_{n-1} + P_{n-2})."""
    if n < 0:
        raise ValueError(f"Pell index must be nonnegative, got {n}")
    while len(_PELL) <= n:
        _PELL.append(2 * _PELL[-1] + _PELL[-2])
    return _PELL[n]


@dataclass(frozen=True)
class PellRep:
    """Digit string of an integer in the Pell number system.

    Digits are stored least-significant-first: digits[i] is the coefficient
    of P_{i+1}. The canonical representation of 0 is the empty tuple.
    """

    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(d not in (0, 1, 2) for d in self.digits):
            raise ValueError(f"Pell digits must be in {{0,1,2}}: {self.digits}")

    def __str__(self) -> str:
        """Most-significant-first rendering; 0 renders as '0'."""
        if not self.digits:
            return "0"
        return "".join(str(d) for d in reversed(self.digits))

    @classmethod
    def from_string(cls, text: str) -> PellRep:
        """Parse a most-significant-first digit string over {0,1,2}."""
        if not text or set(text) - set("012"):
            raise ValueError(f"invalid Pell digit string: {text!r}")
        digits = tuple(int(c) for c in reversed(text))
        # strip most-significant zeros so "0" parses to the empty representation
        while digits and digits[-1] == 0:
            digits = digits[:-1]
        return cls(digits)


def encode(n: int) -> PellRep:
    """Greedy most-significant-first expansion of n; the canonical representation."""
    if n < 0:
        raise ValueError(f"cannot encode negative integer {n}")
    if n == 0:
        return PellRep(())
    _extend_pell(n)
    top = bisect_right(_PELL, n) - 1  # largest index with P_top <= n
    digits = [0] * top
    rem = n
    for i in range(top, 0, -1):
        d, rem = divmod(rem, _PELL[i])
        digits[i - 1] = d
    return PellRep(tuple(digits))


def decode(r: PellRep) -> int:
    """Value of a digit string: sum of digits[i] * P_{i+1}."""
    if r.digits:
        pell(len(r.digits))
    return sum(d * _PELL[i + 1] for i, d in enumerate(r.digits))


def is_canonical(r: PellRep) -> bool:
    """True iff r is the unique canonical representation of its value."""
    digits = r.digits
    if not digits:
        return True
    if digits[-1] == 0:  # most-significant zero
        return False
    if digits[0] > 1:
        return False
    for i in range(1, len(digits)):
        if digits[i] == 2 and digits[i - 1] != 0:
            return False
    return True


def is_high_power_period(p: int) -> bool:
    """True iff p = P_n + P_{n-1} for some n >= 3.

    Equivalently the canonical digits of p, written most-significant-first,
    match 1100*: two leading ones followed by at least one zero.
    """
    if p < 1:
        raise ValueError(f"period must be positive, got {p}")
    digits = encode(p).digits
    if len(digits) < 3:
        return False
    return (
        digits[-1] == 1
        and digits[-2] == 1
        and all(d == 0 for d in digits[: len(digits) - 2])
    )
