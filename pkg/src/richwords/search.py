"""Backtracking search for long rich words avoiding high-exponent factors.

Words are explored depth-first in canonical form (first symbol 0, new
symbols introduced in increasing order). Richness is maintained online by a
flat-array palindromic tree; forbidden powers by a per-depth table of
longest periodic suffixes. Two engines walk the identical tree: a pure
Python reference and a jitted kernel for exhaustive rational-threshold
runs. Budgets, checkpointing, and static tree partitioning (for worker
parallelism) are all deterministic.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .repetitions import SurdThreshold

__all__ = [
    "SearchConfig",
    "SearchResult",
    "SearchState",
    "CheckpointError",
    "OK",
    "VIOLATES_RICHNESS",
    "VIOLATES_POWER",
    "MODE_EXHAUSTIVE",
    "MODE_LYNDON",
    "canonical_extension_filter",
    "lyndon_prune",
    "run_search",
]

OK = "ok"
VIOLATES_RICHNESS = "violates_richness"
VIOLATES_POWER = "violates_power"

MODE_EXHAUSTIVE = "exhaustive"
MODE_LYNDON = "lyndon"

SYMBOLS = "0123456789"
DEFAULT_DEPTH_CAP = 2048
MAX_DEPTH_LIMIT = 6000
CHECKPOINT_VERSION = 1
_INF = 2**62
_STOP_DESCENT = 127  # trynext sentinel: exceeds every symbol


class CheckpointError(Exception):
    """Unusable checkpoint file: wrong version, config, or content."""


def canonical_extension_filter(w: str, a: str) -> bool:
    """True iff appending a keeps the word canonical: each symbol may appear
    only after all smaller symbols have appeared."""
    top = max((int(c) for c in w), default=-1)
    return int(a) <= top + 1


def lyndon_prune(w: str) -> bool:
    """True iff some proper nonempty suffix of w is lexicographically smaller
    than w. A suffix that coincides with a prefix of w counts as not smaller."""
    for i in range(1, len(w)):
        s = w[i:]
        head = w[: len(s)]
        if s != head and s < head:
            return True
    return False


@dataclass(frozen=True)
class SearchConfig:
    """Problem statement for one search run.

    Forbids every factor with exponent >= threshold. `split_depth` > 0
    statically partitions the tree at that depth; with a node budget, the
    budget is divided over partitions up front, so results depend on
    `split_depth` but never on `workers`.
    """

    alphabet_size: int
    threshold: Fraction | SurdThreshold
    mode: str = MODE_EXHAUSTIVE
    max_depth: int | None = None
    node_budget: int | None = None
    checkpoint_interval: int | None = None
    split_depth: int = 0
    workers: int = 1
    engine: str = "auto"  # auto | python | numba
    debug_validate: bool = False

    def __post_init__(self) -> None:
        if not 2 <= self.alphabet_size <= len(SYMBOLS):
            raise ValueError(f"alphabet size must be in [2, {len(SYMBOLS)}]")
        t = self.threshold
        if isinstance(t, int):
            object.__setattr__(self, "threshold", Fraction(t))
            t = self.threshold
        if isinstance(t, Fraction):
            if t <= 1:
                raise ValueError(f"threshold must exceed 1, got {t}")
        elif isinstance(t, SurdThreshold):
            if t.compare_rational(1) <= 0:
                raise ValueError(f"threshold must exceed 1, got {t}")
            if max(abs(t.a), abs(t.b), t.c) > 10**4:
                raise ValueError("surd threshold components exceed 10^4")
        else:
            raise TypeError(f"threshold must be Fraction or SurdThreshold, got {type(t)}")
        if self.mode not in (MODE_EXHAUSTIVE, MODE_LYNDON):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.engine not in ("auto", "python", "numba"):
            raise ValueError(f"unknown engine {self.engine!r}")
        md = self.effective_max_depth()
        if not 1 <= md <= MAX_DEPTH_LIMIT:
            raise ValueError(f"max_depth must be in [1, {MAX_DEPTH_LIMIT}]")
        if not 0 <= self.split_depth < md:
            raise ValueError("split_depth must be smaller than the depth cap")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        for name in ("node_budget", "checkpoint_interval"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be positive when given")

    def effective_max_depth(self) -> int:
        return self.max_depth if self.max_depth is not None else DEFAULT_DEPTH_CAP

    def identity_dict(self) -> dict:
        """The fields that define which tree is searched (checkpoint guard)."""
        t = self.threshold
        thr = {"rational": str(t)} if isinstance(t, Fraction) else {"surd": [t.a, t.b, t.c]}
        return {
            "alphabet_size": self.alphabet_size,
            "threshold": thr,
            "mode": self.mode,
            "max_depth": self.effective_max_depth(),
            "split_depth": self.split_depth,
        }

    def to_dict(self) -> dict:
        d = self.identity_dict()
        d.update(
            node_budget=self.node_budget,
            checkpoint_interval=self.checkpoint_interval,
            workers=self.workers,
            engine=self.engine,
        )
        return d


@dataclass(frozen=True)
class SearchResult:
    longest_length: int
    witness: str
    nodes_explored: int
    exhausted: bool
    wall_time: float
    config: SearchConfig

    def to_dict(self) -> dict:
        return {
            "longest_length": self.longest_length,
            "witness": self.witness,
            "nodes_explored": self.nodes_explored,
            "exhausted": self.exhausted,
            "wall_time": self.wall_time,
            "config": self.config.to_dict(),
        }


class SearchState:
    """Explicit search state: current word, palindromic tree with per-depth
    undo, periodic-suffix rows, and the DFS branch pointers.

    The state is shared by both engines; everything lives in flat numpy
    arrays so the jitted kernel can resume exactly where Python left off.
    """

    def __init__(self, config: SearchConfig):
        self.config = config
        md = config.effective_max_depth()
        self.MD = md
        k = config.alphabet_size
        self.word = np.zeros(md + 2, dtype=np.int8)
        self.trynext = np.zeros(md + 2, dtype=np.int8)
        self.maxused = np.full(md + 2, -1, dtype=np.int8)
        n_cap = md + 4
        self.node_len = np.zeros(n_cap, dtype=np.int32)
        self.node_link = np.zeros(n_cap, dtype=np.int32)
        self.node_edge = np.full((n_cap, k), -1, dtype=np.int32)
        self.node_len[0] = -1  # length -1 root
        self.node_len[1] = 0  # empty root
        self.u_prevlast = np.zeros(md + 2, dtype=np.int32)
        self.u_parent = np.zeros(md + 2, dtype=np.int32)
        self.S = np.zeros((md + 3, md + 3), dtype=np.int32)
        self._pvals = np.arange(1, md + 3, dtype=np.int64)
        self.best_arr = np.zeros(md + 2, dtype=np.int8)
        self.depth = 0
        self.last = 1
        self.nn = 2
        self.nodes = 0
        self.best_len = 0
        self.cap_hit = False
        # ascending suffix starts still matching the aligned prefix, per depth;
        # valid whenever the Python engine owns the state (the kernel leaves it
        # untouched and realigns by construction when it unwinds to its floor)
        self._active: list[tuple[int, ...]] = [()]
        t = config.threshold
        if isinstance(t, Fraction):
            self._tnum, self._tden = t.numerator, t.denominator
            self._surd = None
        else:
            self._surd = (t.a, t.b, t.c)

    @classmethod
    def from_word(cls, config: SearchConfig, w: str) -> SearchState:
        """Replay w symbol by symbol; raise if it is ever infeasible."""
        st = cls(config)
        if len(w) > st.MD:
            raise ValueError(f"word longer than depth cap {st.MD}")
        for i, ch in enumerate(w):
            res = st.extend_check_int(int(ch))
            if res != OK:
                raise ValueError(f"word infeasible at prefix length {i + 1}: {res}")
        return st

    def word_str(self, length: int | None = None) -> str:
        n = self.depth if length is None else length
        return "".join(SYMBOLS[x] for x in self.word[:n])

    def best_word_str(self) -> str:
        return "".join(SYMBOLS[x] for x in self.best_arr[: self.best_len])

    def distinct_palindromes(self) -> int:
        return self.nn - 2

    def extend_check(self, a: str) -> str:
        """Feasibility of appending symbol a: OK (state advanced) or a
        violation (state untouched)."""
        return self.extend_check_int(int(a))

    def extend_check_int(self, a: int) -> str:
        d = self.depth
        if d > self.MD:
            raise ValueError("state already at the depth cap")
        if not 0 <= a < self.config.alphabet_size:
            raise ValueError(f"symbol {a} outside alphabet")
        word = self.word
        word[d] = a
        node_len = self.node_len
        node_link = self.node_link
        cur = self.last
        while True:
            l = node_len[cur]
            if d - l - 1 >= 0 and word[d - l - 1] == a:
                break
            cur = node_link[cur]
        if self.node_edge[cur, a] >= 0:
            return VIOLATES_RICHNESS
        l = int(node_len[cur])
        if l + 2 == 1:
            lnk = 1
        else:
            c2 = node_link[cur]
            while True:
                l2 = node_len[c2]
                if d - l2 - 1 >= 0 and word[d - l2 - 1] == a:
                    break
                c2 = node_link[c2]
            lnk = int(self.node_edge[c2, a])
        if self._update_power_row(a):
            return VIOLATES_POWER
        nn = self.nn
        node_len[nn] = l + 2
        node_link[nn] = lnk
        self.node_edge[cur, a] = nn
        self.u_prevlast[d] = self.last
        self.u_parent[d] = cur
        self.last = nn
        self.nn = nn + 1
        self.maxused[d + 1] = max(int(self.maxused[d]), a)
        self._active.append(self._next_active(a))
        self.depth = d + 1
        return OK

    def retract(self) -> None:
        """Undo the last accepted extension."""
        if self.depth == 0:
            raise IndexError("retract on the empty word")
        self.depth -= 1
        d = self.depth
        self.last = int(self.u_prevlast[d])
        self.nn -= 1
        self.node_edge[self.u_parent[d], self.word[d]] = -1
        self._active.pop()

    def _update_power_row(self, a: int) -> bool:
        d = self.depth
        S = self.S
        if d > 0:
            rev = self.word[d - 1 :: -1][:d]
            pvals = self._pvals[:d]
            row = np.where(rev == a, S[d, :d] + 1, pvals).astype(np.int64)
            if self._surd is None:
                if (self._tden * row >= self._tnum * pvals).any():
                    return True
            else:
                sa, sb, sc = self._surd
                x = sc * row - sa * pvals
                rhs = 2 * (sb * pvals) ** 2
                if sb >= 0:
                    hit = (x >= 0) & (x * x >= rhs)
                else:
                    hit = (x >= 0) | (x * x <= rhs)
                if hit.any():
                    return True
            S[d + 1, :d] = row
        S[d + 1, d] = d + 1
        return False

    def _next_active(self, a: int) -> tuple[int, ...]:
        d = self.depth
        word = self.word
        new = tuple(i for i in self._active[-1] if word[d - i] == a)
        if d >= 1 and word[0] == a:
            new += (d,)
        return new

    def lyndon_extension_pruned(self, a: int) -> bool:
        """Would appending a make some proper suffix smaller than the word?

        Assumes the current word is itself unpruned, which holds along any
        search path because pruned extensions are never taken."""
        d = self.depth
        word = self.word
        for i in self._active[-1]:
            if a < word[d - i]:
                return True
        return d >= 1 and a < int(word[0])

    def validate(self) -> None:
        """Debug check of every incremental structure against brute force."""
        d = self.depth
        w = [int(x) for x in self.word[:d]]
        if self.distinct_palindromes() != d:
            raise AssertionError("palindrome count does not match depth")
        for p in range(1, d + 1):
            # longest suffix with period p: any suffix of length <= p
            # qualifies vacuously, then grow while new pairs agree
            s = min(p, d)
            while s < d and w[d - s - 1] == w[d - s - 1 + p]:
                s += 1
            if int(self.S[d, p - 1]) != s:
                raise AssertionError(f"period table wrong at p={p}: {self.S[d, p-1]} != {s}")
        expect = tuple(
            i for i in range(1, d) if w[i:] == w[: d - i]
        )
        if self._active[-1] != expect:
            raise AssertionError(f"active suffix set wrong: {self._active[-1]} != {expect}")


def _kernel_available() -> bool:
    try:
        from . import _kernel  # noqa: F401
    except Exception:
        return False
    return True


def _select_engine(config: SearchConfig) -> str:
    jitable = (
        config.mode == MODE_EXHAUSTIVE
        and isinstance(config.threshold, Fraction)
        and not config.debug_validate
    )
    if config.engine == "python":
        return "python"
    if config.engine == "numba":
        if not jitable:
            raise ValueError("the jitted engine only covers exhaustive mode with a rational threshold")
        if not _kernel_available():
            raise RuntimeError("numba engine requested but numba is unavailable")
        return "numba"
    return "numba" if jitable and _kernel_available() else "python"


def _run_python(st: SearchState, floor: int, node_limit: int,
                collect_depth: int | None = None,
                collector: list[str] | None = None) -> str:
    cfg = st.config
    K = cfg.alphabet_size
    MD = st.MD
    lyndon = cfg.mode == MODE_LYNDON
    debug = cfg.debug_validate
    word = st.word
    trynext = st.trynext
    maxused = st.maxused
    while True:
        if st.nodes >= node_limit:
            return "limit"
        d = st.depth
        a = -1
        if d >= MD:
            st.cap_hit = True
        else:
            a = int(trynext[d])
            cap = int(maxused[d]) + 1
            if cap > K - 1:
                cap = K - 1
            if a > cap:
                a = -1
        if a < 0:
            if d == floor:
                return "done"
            st.retract()
            continue
        trynext[d] = a + 1
        if lyndon and st.lyndon_extension_pruned(a):
            continue
        if st.extend_check_int(a) != OK:
            continue
        d = st.depth
        trynext[d] = 0
        st.nodes += 1
        if d > st.best_len:
            st.best_len = d
            st.best_arr[:d] = word[:d]
        if debug:
            st.validate()
        if collect_depth is not None and d == collect_depth:
            collector.append(st.word_str())
            trynext[d] = _STOP_DESCENT


def _run_numba(st: SearchState, floor: int, node_limit: int) -> str:
    from ._kernel import dfs_kernel

    t = st.config.threshold
    ctl = np.zeros(8, dtype=np.int64)
    ctl[0] = st.depth
    ctl[1] = st.last
    ctl[2] = st.nn
    ctl[3] = st.nodes
    ctl[4] = st.best_len
    ctl[5] = 1 if st.cap_hit else 0
    done = dfs_kernel(
        st.config.alphabet_size, t.numerator, t.denominator, st.MD, floor,
        st.word, st.trynext, st.maxused, st.node_len, st.node_link,
        st.node_edge, st.u_prevlast, st.u_parent, st.S, st.best_arr,
        ctl, node_limit,
    )
    st.depth = int(ctl[0])
    st.last = int(ctl[1])
    st.nn = int(ctl[2])
    st.nodes = int(ctl[3])
    st.best_len = int(ctl[4])
    st.cap_hit = bool(ctl[5])
    return "done" if done else "limit"


def _dispatch(st: SearchState, floor: int, node_limit: int) -> str:
    if _select_engine(st.config) == "numba":
        return _run_numba(st, floor, node_limit)
    return _run_python(st, floor, node_limit)


def _write_checkpoint(path: str, st: SearchState) -> None:
    data = {
        "version": CHECKPOINT_VERSION,
        "config": st.config.identity_dict(),
        "depth": st.depth,
        "word": st.word_str(),
        "trynext": [int(x) for x in st.trynext[: st.depth + 1]],
        "nodes": st.nodes,
        "best_len": st.best_len,
        "best_word": st.best_word_str(),
        "cap_hit": st.cap_hit,
    }
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(data, fh)
    os.replace(tmp, path)


def _load_checkpoint(path: str, config: SearchConfig) -> SearchState:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"cannot read checkpoint {path!r}: {exc}") from exc
    if data.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(f"checkpoint version {data.get('version')} not supported")
    if data.get("config") != config.identity_dict():
        raise CheckpointError("checkpoint was written for a different search")
    try:
        st = SearchState.from_word(config, data["word"])
        if len(data["trynext"]) != st.depth + 1:
            raise CheckpointError("trynext length does not match word")
        st.trynext[: st.depth + 1] = data["trynext"]
        st.nodes = int(data["nodes"])
        st.best_len = int(data["best_len"])
        best = data["best_word"]
        if len(best) != st.best_len:
            raise CheckpointError("best word length mismatch")
        for i, ch in enumerate(best):
            st.best_arr[i] = int(ch)
        st.cap_hit = bool(data["cap_hit"])
    except (KeyError, ValueError) as exc:
        raise CheckpointError(f"corrupt checkpoint: {exc}") from exc
    return st


def _finish(st: SearchState, status: str, t0: float) -> SearchResult:
    exhausted = status == "done" and not st.cap_hit
    return SearchResult(
        longest_length=st.best_len,
        witness=st.best_word_str(),
        nodes_explored=st.nodes,
        exhausted=exhausted,
        wall_time=time.perf_counter() - t0,
        config=st.config,
    )


def _run_single(config: SearchConfig, st: SearchState, t0: float,
                checkpoint_path: str | None) -> SearchResult:
    if st.nodes == 0 and st.depth == 0:
        st.nodes = 1  # the empty word is the root of the tree
    budget = config.node_budget if config.node_budget is not None else _INF
    interval = config.checkpoint_interval
    while True:
        limit = budget if interval is None else min(budget, st.nodes + interval)
        status = _dispatch(st, 0, limit)
        if checkpoint_path is not None:
            _write_checkpoint(checkpoint_path, st)
        if status == "done" or st.nodes >= budget:
            return _finish(st, status, t0)


def _partition_job(args: tuple[SearchConfig, str, int | None]) -> dict:
    config, prefix, budget = args
    st = SearchState.from_word(config, prefix)
    st.nodes = 0
    floor = st.depth
    st.trynext[floor] = 0
    limit = budget if budget is not None else _INF
    status = _dispatch(st, floor, limit)
    return {
        "nodes": st.nodes,
        "best_len": st.best_len,
        "best_word": st.best_word_str(),
        "done": status == "done",
        "cap_hit": st.cap_hit,
    }


def _run_partitioned(config: SearchConfig, t0: float) -> SearchResult:
    frontier = SearchState(config)
    frontier.nodes = 1
    prefixes: list[str] = []
    status = _run_python(frontier, 0, _INF,
                         collect_depth=config.split_depth, collector=prefixes)
    assert status == "done"
    if not prefixes:
        return _finish(frontier, "done", t0)
    budgets: list[int | None] = [None] * len(prefixes)
    if config.node_budget is not None:
        remaining = max(0, config.node_budget - frontier.nodes)
        base, extra = divmod(remaining, len(prefixes))
        budgets = [base + (1 if i < extra else 0) for i in range(len(prefixes))]
    jobs = [(config, p, budgets[i]) for i, p in enumerate(prefixes)]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(_partition_job, jobs))
    else:
        parts = [_partition_job(j) for j in jobs]
    nodes = frontier.nodes + sum(p["nodes"] for p in parts)
    best_len = frontier.best_len
    witness = frontier.best_word_str()
    for p in parts:
        if p["best_len"] > best_len:
            best_len = p["best_len"]
            witness = p["best_word"]
    exhausted = all(p["done"] for p in parts) and not any(p["cap_hit"] for p in parts)
    return SearchResult(
        longest_length=best_len,
        witness=witness,
        nodes_explored=nodes,
        exhausted=exhausted,
        wall_time=time.perf_counter() - t0,
        config=config,
    )


def run_search(config: SearchConfig, resume_path: str | None = None,
               checkpoint_path: str | None = None) -> SearchResult:
    """Explore the tree described by config and report the longest word.

    `exhausted` is True only when the full tree was searched: no node budget
    ran out and the depth cap was never reached.
    """
    t0 = time.perf_counter()
    if checkpoint_path is not None and config.checkpoint_interval is None:
        config = replace(config, checkpoint_interval=10**6)
    if config.split_depth != 0 and (resume_path is not None or checkpoint_path is not None):
        raise ValueError("checkpointing is only supported for unpartitioned runs")
    if resume_path is not None:
        st = _load_checkpoint(resume_path, config)
        return _run_single(config, st, t0, checkpoint_path)
    if config.split_depth > 0:
        return _run_partitioned(config, t0)
    return _run_single(config, SearchState(config), t0, checkpoint_path)
