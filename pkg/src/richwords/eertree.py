"""Online palindromic tree with constant-amortized append and O(1) undo.

One node per distinct palindromic factor of the buffer, plus two roots: the
imaginary palindrome of length -1 and the empty palindrome. Border edges go
from a palindrome to its two-sided single-symbol extension; suffix links go
to the longest proper palindromic suffix. Appends create at most one node,
which makes the structure an exact online richness detector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = [
    "PalNode",
    "Eertree",
    "Antimorphism",
    "PalindromeGraph",
    "is_rich",
    "first_unrich_prefix",
    "rich_factor",
    "defect",
    "export_palindrome_graph",
]

GAMMA = 0  # index of the length -1 root
EPSILON = 1  # index of the empty-word root


class PalNode:
    """One distinct palindrome: its length, suffix link, and border edges."""

    __slots__ = ("length", "suffix_link", "edges", "creation_position")

    def __init__(self, length: int, suffix_link: int, creation_position: int):
        self.length = length
        self.suffix_link = suffix_link
        self.edges: dict[str, int] = {}
        self.creation_position = creation_position


class Eertree:
    """Palindromic tree over an append/undo buffer of symbols."""

    def __init__(self, alphabet: str | None = None):
        self.alphabet = alphabet
        self.nodes: list[PalNode] = [
            PalNode(-1, GAMMA, -1),
            PalNode(0, GAMMA, -1),
        ]
        self.buffer: list[str] = []
        self.last = EPSILON
        self._log: list[tuple[int, bool, int, str]] = []

    def __len__(self) -> int:
        return len(self.buffer)

    def distinct_palindromes(self) -> int:
        """Number of distinct nonempty palindromic factors of the buffer."""
        return len(self.nodes) - 2

    def _suffix_pal_extendable(self, start: int, a: str) -> int:
        """Walk suffix links from `start` to the longest palindromic suffix P
        of the buffer such that a precedes it (so aPa is a suffix)."""
        pos = len(self.buffer) - 1
        cur = start
        while True:
            l = self.nodes[cur].length
            if pos - l - 1 >= 0 and self.buffer[pos - l - 1] == a:
                return cur
            cur = self.nodes[cur].suffix_link

    def append(self, a: str) -> tuple[bool, int]:
        """Extend the buffer by a; return (created_new, node index of the
        longest palindromic suffix of the new buffer)."""
        if self.alphabet is not None and a not in self.alphabet:
            raise ValueError(f"symbol {a!r} outside alphabet {self.alphabet!r}")
        self.buffer.append(a)
        cur = self._suffix_pal_extendable(self.last, a)
        existing = self.nodes[cur].edges.get(a)
        if existing is not None:
            self._log.append((self.last, False, cur, a))
            self.last = existing
            return False, existing
        newlen = self.nodes[cur].length + 2
        if newlen == 1:
            link = EPSILON
        else:
            c2 = self._suffix_pal_extendable(self.nodes[cur].suffix_link, a)
            link = self.nodes[c2].edges[a]
        idx = len(self.nodes)
        self.nodes.append(PalNode(newlen, link, len(self.buffer) - 1))
        self.nodes[cur].edges[a] = idx
        self._log.append((self.last, True, cur, a))
        self.last = idx
        return True, idx

    def undo(self) -> None:
        """Restore the exact state before the matching append."""
        if not self.buffer:
            raise IndexError("undo on empty tree")
        prev_last, created, parent, a = self._log.pop()
        if created:
            self.nodes.pop()
            del self.nodes[parent].edges[a]
        self.last = prev_last
        self.buffer.pop()

    def node_string(self, idx: int) -> str | None:
        """The palindrome at a node; empty string for the empty root, None
        for the length -1 root."""
        node = self.nodes[idx]
        if node.length < 0:
            return None
        end = node.creation_position
        return "".join(self.buffer[end - node.length + 1 : end + 1])


def is_rich(w: str) -> bool:
    """True iff w contains |w| distinct nonempty palindromic factors."""
    return first_unrich_prefix(w) is None


def first_unrich_prefix(w: str) -> int | None:
    """Length of the shortest non-rich prefix of w, or None if w is rich."""
    t = Eertree()
    for i, a in enumerate(w):
        created, _ = t.append(a)
        if not created:
            return i + 1
    return None


def rich_factor(w: str, i: int, n: int) -> bool:
    """True iff the length-n factor of w starting at index i is rich."""
    if i < 0 or n < 0 or i + n > len(w):
        raise IndexError(f"factor [{i}:{i + n}] out of range for length {len(w)}")
    return is_rich(w[i : i + n])


@dataclass(frozen=True)
class Antimorphism:
    """Reversal composed with an involutive letter permutation."""

    letter_map: dict[str, str]

    def __post_init__(self) -> None:
        for a, b in self.letter_map.items():
            if self.letter_map.get(b) != a:
                raise ValueError(f"letter map is not involutive at {a!r} -> {b!r}")

    @classmethod
    def reversal(cls, alphabet: str) -> Antimorphism:
        """Plain reversal: the identity letter permutation."""
        return cls({a: a for a in alphabet})

    def apply(self, w: str) -> str:
        try:
            return "".join(self.letter_map[a] for a in reversed(w))
        except KeyError as exc:
            raise ValueError(f"symbol {exc.args[0]!r} not covered by letter map") from exc

    def is_palindrome(self, w: str) -> bool:
        return w == self.apply(w)


def defect(w: str, theta: Antimorphism) -> int:
    """Palindromic defect of w under theta.

    Counts |w| + 1 minus the number of swapped letter pairs present in w
    minus the number of theta-palindromic factors (the empty word included).
    Zero defect under plain reversal is equivalent to richness.
    """
    gamma_pairs = {
        frozenset((a, theta.letter_map.get(a, a)))
        for a in set(w)
        if theta.letter_map.get(a, a) != a
    }
    pals = {u for u in _all_factors(w) if theta.is_palindrome(u)}
    pals.add("")
    return len(w) + 1 - len(gamma_pairs) - len(pals)


def _all_factors(w: str) -> set[str]:
    return {w[i:j] for i in range(len(w)) for j in range(i + 1, len(w) + 1)}


@dataclass
class PalindromeGraph:
    """Deterministic listing of an eertree: nodes, border edges, suffix edges."""

    nodes: list[tuple[int, int, str | None]] = field(default_factory=list)
    border_edges: list[tuple[int, int, str]] = field(default_factory=list)
    suffix_edges: list[tuple[int, int]] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "nodes": [
                {"id": i, "length": length, "palindrome": s}
                for i, length, s in self.nodes
            ],
            "border_edges": [
                {"from": p, "to": q, "label": a} for p, q, a in self.border_edges
            ],
            "suffix_edges": [{"from": p, "to": q} for p, q in self.suffix_edges],
        }

    def to_dot(self) -> str:
        def label(length: int, s: str | None) -> str:
            if length < 0:
                return "γ"
            if length == 0:
                return "ε"
            return s if s is not None else "?"

        lines = ["digraph palindromes {"]
        for i, length, s in self.nodes:
            lines.append(f'  n{i} [label="{label(length, s)}"];')
        for p, q, a in self.border_edges:
            lines.append(f'  n{p} -> n{q} [label="{a}"];')
        for p, q in self.suffix_edges:
            lines.append(f"  n{p} -> n{q} [style=dashed];")
        lines.append("}")
        return "\n".join(lines)


def export_palindrome_graph(t: Eertree) -> PalindromeGraph:
    """List all nodes and edges of the tree in creation order."""
    g = PalindromeGraph()
    for i, node in enumerate(t.nodes):
        g.nodes.append((i, node.length, t.node_string(i)))
        if i != GAMMA:
            g.suffix_edges.append((i, node.suffix_link))
    for i, node in enumerate(t.nodes):
        for a in sorted(node.edges):
            g.border_edges.append((i, node.edges[a], a))
    return g
