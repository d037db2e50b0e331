"""Generators for the infinite binary word studied by this package.

The word is produced three independent ways: as the image under a coding of
the fixed point of a three-letter morphism, as the image under an erasing
coding of the fixed point of a six-letter morphism, and symbol-by-symbol by
an automaton that reads canonical Pell digit strings. All three must agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .numeration import encode

__all__ = [
    "Morphism",
    "Dfao",
    "LengthSequence",
    "VerificationReport",
    "PHI",
    "TAU",
    "F",
    "G",
    "R_DFAO",
    "apply_morphism",
    "fixed_point_prefix",
    "word_r",
    "dfao_eval",
    "verify_lemma_identities",
    "verify_equivalence",
    "length_sequence",
]


class DfaoError(Exception):
    """Structural defect in an automaton: missing transition or output."""


@dataclass(frozen=True)
class Morphism:
    """A morphism on words, given by the image of each alphabet symbol.

    Images are words over `target_alphabet`, which defaults to the source
    alphabet (an endomorphism)."""

    alphabet: tuple[str, ...]
    images: dict[str, str]
    target_alphabet: tuple[str, ...] | None = None
    _table: dict[int, str] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        missing = set(self.alphabet) - set(self.images)
        if missing:
            raise ValueError(f"no image for symbols {sorted(missing)}")
        target = self.target_alphabet if self.target_alphabet is not None else self.alphabet
        stray = set("".join(self.images.values())) - set(target)
        if stray:
            raise ValueError(f"image symbols {sorted(stray)} outside target alphabet")
        object.__setattr__(
            self, "_table", {ord(s): self.images[s] for s in self.alphabet}
        )

    def apply(self, w: str) -> str:
        """Concatenate the images of the symbols of w, in order."""
        unknown = set(w) - set(self.alphabet)
        if unknown:
            raise ValueError(f"symbol {sorted(unknown)[0]!r} not in alphabet")
        return w.translate(self._table)

    def is_prolongable_on(self, s: str) -> bool:
        img = self.images.get(s)
        return img is not None and len(img) >= 2 and img[0] == s


@dataclass(frozen=True)
class Dfao:
    """Deterministic finite automaton with output, fed Pell digits msd-first.

    `transitions` maps (state, digit) to a state and may be partial; `outputs`
    is defined only on final states. Canonical digit strings never leave the
    defined region; anything else raises DfaoError.
    """

    states: tuple[str, ...]
    start: str
    transitions: dict[tuple[str, int], str]
    outputs: dict[str, str]

    @classmethod
    def from_morphism(cls, m: Morphism, coding: Morphism, start: str) -> Dfao:
        """Standard construction: state set = alphabet of m, transition on
        digit d follows the d-th symbol of the image, output = non-erasing
        part of the coding."""
        transitions = {
            (q, d): m.images[q][d]
            for q in m.alphabet
            for d in range(len(m.images[q]))
        }
        outputs = {q: coding.images[q] for q in m.alphabet if coding.images[q]}
        return cls(states=m.alphabet, start=start, transitions=transitions, outputs=outputs)


PHI = Morphism(("0", "1", "2"), {"0": "01", "1": "02", "2": "022"})
TAU = Morphism(("0", "1", "2"), {"0": "0", "1": "01", "2": "011"},
               target_alphabet=("0", "1"))
F = Morphism(
    ("0", "1", "2", "3", "4", "5"),
    {"0": "012", "1": "304", "2": "0", "3": "354", "4": "3", "5": "032"},
)
G = Morphism(
    ("0", "1", "2", "3", "4", "5"),
    {"0": "0", "1": "0", "2": "", "3": "1", "4": "", "5": "1"},
    target_alphabet=("0", "1"),
)
R_DFAO = Dfao.from_morphism(F, G, start="0")


def apply_morphism(m: Morphism, w: str) -> str:
    """Apply m to w (plain, non-reversing application)."""
    return m.apply(w)


def fixed_point_prefix(m: Morphism, seed: str, length: int) -> str:
    """First `length` symbols of the fixed point of m starting with `seed`."""
    if length < 1:
        raise ValueError(f"length must be positive, got {length}")
    if not m.is_prolongable_on(seed):
        raise ValueError(f"morphism is not prolongable on {seed!r}")
    w = seed
    while len(w) < length:
        nxt = m.apply(w)
        if len(nxt) <= len(w):
            raise ValueError("morphism iteration stopped growing")
        w = nxt
    return w[:length]


def _r_prefix_phi_tau(length: int) -> str:
    return TAU.apply(fixed_point_prefix(PHI, "0", length))[:length]


def _r_prefix_f_g(length: int) -> str:
    # the coding erases two of the six symbols, so generate with headroom
    buf = 3 * length
    while True:
        v = G.apply(fixed_point_prefix(F, "0", buf))
        if len(v) >= length:
            return v[:length]
        buf *= 2


def dfao_eval(d: Dfao, n: int) -> str:
    """Output symbol of d after reading the canonical Pell digits of n."""
    if n < 0:
        raise ValueError(f"index must be nonnegative, got {n}")
    state = d.start
    for digit in reversed(encode(n).digits):
        nxt = d.transitions.get((state, digit))
        if nxt is None:
            raise DfaoError(f"no transition from state {state!r} on digit {digit}")
        state = nxt
    out = d.outputs.get(state)
    if out is None:
        raise DfaoError(f"no output defined for state {state!r}")
    return out


def _r_prefix_dfao(length: int) -> str:
    return "".join(dfao_eval(R_DFAO, n) for n in range(length))


_R_METHODS = {
    "morphic-phi-tau": _r_prefix_phi_tau,
    "morphic-f-g": _r_prefix_f_g,
    "dfao": _r_prefix_dfao,
}


def word_r(method: str, length: int) -> str:
    """First `length` symbols of the word r, by the named construction."""
    if method not in _R_METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(_R_METHODS)}")
    if length < 1:
        raise ValueError(f"length must be positive, got {length}")
    return _R_METHODS[method](length)


@dataclass
class VerificationReport:
    """Outcome of an identity check; failures carry (identity name, index)."""

    checked: int
    failures: list[tuple[str, int]]

    @property
    def ok(self) -> bool:
        return not self.failures


def _iterates(m: Morphism, seed: str, upto: int) -> list[str]:
    words = [seed]
    for _ in range(upto):
        words.append(m.apply(words[-1]))
    return words


def verify_lemma_identities(max_n: int, f: Morphism = F, g: Morphism = G) -> VerificationReport:
    """Check the two self-similar decompositions of the erasing system.

    For each n in [2, max_n], the coded n-th iterate on '0' must split as
    (coded n-1 on '0')(coded n-2 on '3')(coded n-1 on '0'), and symmetrically
    for '3' with the roles of '0' and '3' swapped.
    """
    if max_n < 2:
        raise ValueError(f"max_n must be at least 2, got {max_n}")
    f0 = _iterates(f, "0", max_n)
    f3 = _iterates(f, "3", max_n)
    g0 = [g.apply(w) for w in f0]
    g3 = [g.apply(w) for w in f3]
    failures = []
    for n in range(2, max_n + 1):
        if g0[n] != g0[n - 1] + g3[n - 2] + g0[n - 1]:
            failures.append(("nest-0", n))
        if g3[n] != g3[n - 1] + g0[n - 2] + g3[n - 1]:
            failures.append(("nest-3", n))
    return VerificationReport(checked=max_n - 1, failures=failures)


def verify_equivalence(
    max_k: int,
    phi: Morphism = PHI,
    tau: Morphism = TAU,
    f: Morphism = F,
    g: Morphism = G,
) -> VerificationReport:
    """Check that the two morphic constructions agree symbol-for-symbol.

    For each k in [1, max_k] and each seed symbol s of the three-letter
    system, tau(phi^k(s)) must equal the matching product of coded iterates
    of the six-letter system.
    """
    if max_k < 1:
        raise ValueError(f"max_k must be at least 1, got {max_k}")
    p0 = _iterates(phi, "0", max_k)
    p1 = _iterates(phi, "1", max_k)
    p2 = _iterates(phi, "2", max_k)
    f0 = _iterates(f, "0", max_k + 1)
    f3 = _iterates(f, "3", max_k + 1)
    g0 = [g.apply(w) for w in f0]
    g3 = [g.apply(w) for w in f3]
    failures = []
    for k in range(1, max_k + 1):
        if tau.apply(p0[k]) != g0[k] + g3[k - 1]:
            failures.append(("seed-0", k))
        if tau.apply(p1[k]) != g0[k] + g3[k]:
            failures.append(("seed-1", k))
        if tau.apply(p2[k]) != g0[k] + g3[k + 1]:
            failures.append(("seed-2", k))
    return VerificationReport(checked=max_k, failures=failures)


@dataclass(frozen=True)
class LengthSequence:
    """Lengths of the coded iterates: 1, 3, then each 2x previous plus the one before."""

    values: tuple[int, ...]


def length_sequence(count: int, direct_check_bound: int = 12) -> LengthSequence:
    """First `count` lengths of tau(phi^i(0)), cross-checked by expansion."""
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    values = [1, 3]
    while len(values) < count:
        values.append(2 * values[-1] + values[-2])
    values = values[:count]
    w = "0"
    for i in range(min(count, direct_check_bound + 1)):
        if len(TAU.apply(w)) != values[i]:
            raise AssertionError(f"length recurrence broke at i={i}")
        w = PHI.apply(w)
    return LengthSequence(tuple(values))
