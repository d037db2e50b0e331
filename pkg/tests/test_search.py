from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

import oracles
from richwords.eertree import is_rich
from richwords.repetitions import SurdThreshold, critical_exponent
from richwords.search import (
    OK,
    VIOLATES_POWER,
    VIOLATES_RICHNESS,
    CheckpointError,
    SearchConfig,
    SearchState,
    canonical_extension_filter,
    lyndon_prune,
    run_search,
)

LOOSE = Fraction(100)  # effectively no power restriction


def result_key(res):
    return (res.longest_length, res.witness, res.nodes_explored, res.exhausted)


def test_canonical_extension_filter_examples():
    assert not canonical_extension_filter("", "1")
    assert canonical_extension_filter("", "0")
    assert canonical_extension_filter("0", "1")
    assert not canonical_extension_filter("0", "2")
    assert canonical_extension_filter("01", "2")


def test_lyndon_prune_examples():
    assert not lyndon_prune("010")
    assert lyndon_prune("10")
    assert not lyndon_prune("0011")


def test_lyndon_prune_matches_oracle():
    rng = random.Random(3)
    for _ in range(2000):
        w = "".join(rng.choice("012") for _ in range(rng.randint(1, 14)))
        assert lyndon_prune(w) == oracles.lyndon_prune(w), w


def test_incremental_lyndon_matches_word_level():
    # mirror the engine's call pattern: pruned extensions are never taken,
    # so the state always holds an unpruned word
    rng = random.Random(8)
    cfg = SearchConfig(3, LOOSE, max_depth=64)
    for _ in range(300):
        st = SearchState(cfg)
        w = ""
        for _ in range(rng.randint(1, 24)):
            a = rng.randint(0, 2)
            pruned = st.lyndon_extension_pruned(a)
            assert pruned == lyndon_prune(w + str(a)), (w, a)
            if not pruned and st.extend_check_int(a) == OK:
                w += str(a)


def test_extend_check_examples():
    cfg = SearchConfig(2, Fraction(27, 10))
    st = SearchState.from_word(cfg, "0")
    assert st.extend_check("0") == OK  # "00" is rich, exponent 2 < 27/10
    assert st.extend_check("0") == VIOLATES_POWER  # "000" has exponent 3
    assert st.word_str() == "00"
    st.retract()
    assert st.word_str() == "0"


def test_extend_check_richness_matches_module_oracle():
    st = SearchState.from_word(SearchConfig(2, LOOSE), "001011")
    for a in "01":
        res = st.extend_check(a)
        expected_rich = is_rich("001011" + a)
        assert (res != VIOLATES_RICHNESS) == expected_rich
        if res == OK:
            st.retract()


def test_extend_check_rejects_bad_symbols():
    st = SearchState(SearchConfig(2, Fraction(2)))
    with pytest.raises(ValueError):
        st.extend_check("5")


def test_state_rejects_infeasible_replay():
    with pytest.raises(ValueError, match="prefix length 2.*power"):
        SearchState.from_word(SearchConfig(2, Fraction(2)), "000")
    with pytest.raises(ValueError, match="prefix length 8.*richness"):
        SearchState.from_word(SearchConfig(2, LOOSE), "00101100")


def test_period_table_and_structures_validate_deep():
    rng = random.Random(12)
    cfg = SearchConfig(2, Fraction(27, 10), max_depth=64)
    st = SearchState(cfg)
    for _ in range(300):
        if st.depth and rng.random() < 0.35:
            st.retract()
        else:
            if st.extend_check_int(rng.randint(0, 1)) != OK and st.depth:
                st.retract()
        st.validate()


def test_run_search_matches_brute_force():
    for k, t in [(2, Fraction(2)), (3, Fraction(2)), (2, Fraction(5, 2))]:
        longest, witness, visited = oracles.search_longest(k, t)
        res = run_search(SearchConfig(k, t, max_depth=80, engine="python"))
        assert res.longest_length == longest
        assert res.witness == witness  # same DFS order: first witness agrees
        assert res.nodes_explored == visited
        assert res.exhausted


def test_engines_walk_identical_trees():
    for k, t in [(2, Fraction(5, 2)), (3, Fraction(2)), (2, Fraction(7, 3))]:
        rp = run_search(SearchConfig(k, t, max_depth=100, engine="python"))
        rn = run_search(SearchConfig(k, t, max_depth=100, engine="numba"))
        assert result_key(rp) == result_key(rn)


def test_witness_satisfies_all_constraints():
    t = Fraction(5, 2)
    res = run_search(SearchConfig(2, t, max_depth=100))
    w = res.witness
    assert len(w) == res.longest_length
    assert is_rich(w)
    assert critical_exponent(w) < t
    assert w[0] == "0"
    seen = -1
    for c in w:  # canonical form: new symbols in increasing order
        assert int(c) <= seen + 1
        seen = max(seen, int(c))


def test_mode_soundness_symmetry_breaking():
    # every feasible word has a canonical relabeling of equal length that the
    # exhaustive search covers
    t = Fraction(2)
    res = run_search(SearchConfig(3, t, max_depth=40))
    for w in oracles.enumerate_feasible(3, t, 8):
        order: dict[str, str] = {}
        for c in w:
            order.setdefault(c, str(len(order)))
        canon = "".join(order[c] for c in w)
        assert oracles.is_rich(canon)
        assert oracles.critical_exponent(canon) == oracles.critical_exponent(w)
        assert len(canon) <= res.longest_length
        SearchState.from_word(SearchConfig(3, t, max_depth=40), canon)  # feasible


def test_lyndon_mode_never_beats_exhaustive():
    for k, t in [(2, Fraction(5, 2)), (3, Fraction(2)), (2, Fraction(27, 10))]:
        cfg = dict(max_depth=90, node_budget=50_000, engine="python")
        re_ = run_search(SearchConfig(k, t, mode="exhaustive", **cfg))
        rl = run_search(SearchConfig(k, t, mode="lyndon", **cfg))
        assert rl.longest_length <= re_.longest_length
        assert rl.nodes_explored <= re_.nodes_explored


def test_debug_validation_mode():
    res = run_search(SearchConfig(2, Fraction(5, 2), max_depth=30,
                                  engine="python", debug_validate=True))
    assert res.longest_length == 30  # depth-capped
    assert not res.exhausted


def test_depth_cap_reported_as_not_exhausted():
    res = run_search(SearchConfig(2, Fraction(5, 2), max_depth=10))
    assert res.longest_length == 10 and not res.exhausted
    res = run_search(SearchConfig(2, Fraction(5, 2), max_depth=100))
    assert res.longest_length == 33 and res.exhausted


def test_node_budget_reported_as_not_exhausted():
    full = run_search(SearchConfig(2, Fraction(5, 2), max_depth=100))
    res = run_search(SearchConfig(2, Fraction(5, 2), max_depth=100, node_budget=100))
    assert res.nodes_explored == 100 and not res.exhausted
    assert full.nodes_explored > 100


def test_same_config_is_deterministic():
    cfg = SearchConfig(3, Fraction(9, 4), max_depth=150, node_budget=20_000)
    a = run_search(cfg)
    b = run_search(cfg)
    assert result_key(a) == result_key(b)


def test_partitioned_run_equals_plain_run():
    plain = run_search(SearchConfig(3, Fraction(2), max_depth=40))
    split = run_search(SearchConfig(3, Fraction(2), max_depth=40, split_depth=3,
                                    workers=2))
    assert result_key(plain) == result_key(split)


def test_workers_do_not_change_budgeted_results():
    base = dict(alphabet_size=3, threshold=Fraction(9, 4), max_depth=150,
                node_budget=30_000, split_depth=6)
    r1 = run_search(SearchConfig(workers=1, **base))
    r4 = run_search(SearchConfig(workers=4, **base))
    assert result_key(r1) == result_key(r4)


def test_split_deeper_than_tree_degenerates_to_plain_run():
    plain = run_search(SearchConfig(2, Fraction(2), max_depth=40))
    split = run_search(SearchConfig(2, Fraction(2), max_depth=40, split_depth=10,
                                    workers=2))
    assert result_key(plain) == result_key(split)


def test_partitioned_budget_smaller_than_frontier():
    # the frontier enumeration is unbudgeted; partitions then get nothing
    res = run_search(SearchConfig(3, Fraction(2), max_depth=40, split_depth=3,
                                  node_budget=2))
    assert not res.exhausted
    assert res.longest_length >= 3  # frontier itself reaches the split depth


def test_surd_threshold_search():
    # with the threshold at the critical exponent of r, the tree is infinite:
    # a budgeted run keeps deepening and never exhausts
    cfg = SearchConfig(2, SurdThreshold(4, 1, 2), max_depth=300, node_budget=50_000)
    res = run_search(cfg)
    assert not res.exhausted
    assert res.longest_length >= 250
    assert critical_exponent(res.witness) < Fraction(2) + Fraction(408, 577)


def test_surd_and_rational_lyndon_paths_agree_where_equivalent():
    # 5/2 as a surd equals 5/2 as a rational: identical trees
    rs = run_search(SearchConfig(2, SurdThreshold(5, 0, 2), max_depth=100, engine="python"))
    rr = run_search(SearchConfig(2, Fraction(5, 2), max_depth=100, engine="python"))
    assert result_key(rs) == result_key(rr)


def test_checkpoint_resume_equals_uninterrupted(tmp_path):
    ck = str(tmp_path / "state.json")
    cfg = SearchConfig(3, Fraction(9, 4), max_depth=150)
    full = run_search(cfg)
    partial = run_search(
        SearchConfig(3, Fraction(9, 4), max_depth=150, node_budget=50_000),
        checkpoint_path=ck,
    )
    assert not partial.exhausted
    resumed = run_search(cfg, resume_path=ck)
    assert result_key(resumed) == result_key(full)


def test_resume_after_completion_returns_same_result(tmp_path):
    ck = str(tmp_path / "done.json")
    cfg = SearchConfig(2, Fraction(5, 2), max_depth=100, checkpoint_interval=100)
    full = run_search(cfg, checkpoint_path=ck)
    assert full.exhausted
    resumed = run_search(SearchConfig(2, Fraction(5, 2), max_depth=100),
                         resume_path=ck)
    assert result_key(resumed) == result_key(full)


def test_checkpoint_at_depth_zero_is_fresh_start(tmp_path):
    ck = str(tmp_path / "zero.json")
    cfg_budget = SearchConfig(2, Fraction(5, 2), max_depth=100, node_budget=1)
    run_search(cfg_budget, checkpoint_path=ck)  # only the root is visited
    cfg = SearchConfig(2, Fraction(5, 2), max_depth=100)
    resumed = run_search(cfg, resume_path=ck)
    fresh = run_search(cfg)
    assert result_key(resumed) == result_key(fresh)


def test_resume_with_wrong_config_rejected(tmp_path):
    ck = str(tmp_path / "state.json")
    run_search(SearchConfig(3, Fraction(9, 4), max_depth=150, node_budget=1000),
               checkpoint_path=ck)
    with pytest.raises(CheckpointError):
        run_search(SearchConfig(2, Fraction(9, 4), max_depth=150), resume_path=ck)
    with pytest.raises(CheckpointError):
        run_search(SearchConfig(3, Fraction(5, 2), max_depth=150), resume_path=ck)


def test_resume_rejects_corrupt_or_versioned_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    cfg = SearchConfig(3, Fraction(9, 4), max_depth=150)
    with pytest.raises(CheckpointError):
        run_search(cfg, resume_path=str(bad))
    ck = tmp_path / "versioned.json"
    run_search(SearchConfig(3, Fraction(9, 4), max_depth=150, node_budget=1000),
               checkpoint_path=str(ck))
    data = json.loads(ck.read_text())
    data["version"] = 99
    ck.write_text(json.dumps(data))
    with pytest.raises(CheckpointError):
        run_search(cfg, resume_path=str(ck))


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(1, Fraction(2))
    with pytest.raises(ValueError):
        SearchConfig(2, Fraction(1))
    with pytest.raises(ValueError):
        SearchConfig(2, Fraction(2), mode="bogus")
    with pytest.raises(ValueError):
        SearchConfig(2, Fraction(2), max_depth=0)
    with pytest.raises(ValueError):
        SearchConfig(2, Fraction(2), max_depth=100, split_depth=100)
    with pytest.raises(ValueError):
        SearchConfig(2, SurdThreshold(1, -1, 1))  # 1 - sqrt2 < 1
    with pytest.raises(ValueError):
        run_search(SearchConfig(2, Fraction(2), split_depth=1), resume_path="x")
    with pytest.raises(ValueError):
        run_search(SearchConfig(2, Fraction(2), split_depth=1), checkpoint_path="x")
    with pytest.raises(ValueError):
        run_search(SearchConfig(2, Fraction(2), engine="numba", mode="lyndon"))


def test_squares_are_unavoidable_in_rich_words():
    r2 = run_search(SearchConfig(2, Fraction(2), max_depth=80))
    r3 = run_search(SearchConfig(3, Fraction(2), max_depth=80))
    assert r2.exhausted and r2.longest_length == 3
    assert r3.exhausted and r3.longest_length == 7
