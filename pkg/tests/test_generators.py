from __future__ import annotations

import pytest

from richwords.generators import (
    F,
    G,
    PHI,
    R_DFAO,
    TAU,
    Dfao,
    DfaoError,
    Morphism,
    apply_morphism,
    dfao_eval,
    fixed_point_prefix,
    length_sequence,
    verify_equivalence,
    verify_lemma_identities,
    word_r,
)

R_PREFIX_15 = "001001100100110"


def naive_iterate(m: Morphism, seed: str, times: int) -> str:
    w = seed
    for _ in range(times):
        w = "".join(m.images[a] for a in w)
    return w


def test_apply_morphism_examples():
    assert apply_morphism(PHI, "0") == "01"
    assert apply_morphism(TAU, "012") == "001011"
    assert apply_morphism(G, "2") == ""


def test_apply_morphism_unknown_symbol_named():
    with pytest.raises(ValueError, match="'3'"):
        apply_morphism(PHI, "03")


def test_morphism_requires_complete_image_table():
    with pytest.raises(ValueError):
        Morphism(("0", "1"), {"0": "01"})


def test_morphism_images_must_stay_in_target_alphabet():
    with pytest.raises(ValueError, match="target"):
        Morphism(("0", "1"), {"0": "01", "1": "2"})
    with pytest.raises(ValueError, match="target"):
        Morphism(("0", "1"), {"0": "0", "1": "1"}, target_alphabet=("0",))
    m = Morphism(("0", "1"), {"0": "a", "1": ""}, target_alphabet=("a",))
    assert m.apply("10") == "a"


def test_fixed_point_prefix_examples():
    assert fixed_point_prefix(PHI, "0", 9) == "010201022"
    assert fixed_point_prefix(PHI, "0", 1) == "0"
    assert fixed_point_prefix(F, "0", 3) == "012"


def test_fixed_point_prefix_matches_naive_iteration():
    for m in (PHI, F):
        expect = naive_iterate(m, "0", 8)
        assert fixed_point_prefix(m, "0", 500) == expect[:500]


def test_fixed_point_requires_prolongable_seed():
    with pytest.raises(ValueError):
        fixed_point_prefix(TAU, "0", 10)  # image of 0 is just "0"
    with pytest.raises(ValueError):
        fixed_point_prefix(PHI, "1", 10)  # image of 1 does not start with 1


def test_word_r_examples():
    assert word_r("morphic-phi-tau", 15) == R_PREFIX_15
    assert word_r("morphic-f-g", 5) == "00100"
    assert word_r("dfao", 15) == R_PREFIX_15


def test_word_r_rejects_bad_arguments():
    with pytest.raises(ValueError):
        word_r("nope", 5)
    with pytest.raises(ValueError):
        word_r("dfao", 0)


def test_three_way_agreement_10k():
    n = 10_000
    assert word_r("morphic-phi-tau", n) == word_r("morphic-f-g", n) == word_r("dfao", n)


def test_dfao_eval_examples():
    assert dfao_eval(R_DFAO, 0) == "0"
    assert dfao_eval(R_DFAO, 2) == "1"
    assert dfao_eval(R_DFAO, 7) == R_PREFIX_15[7]


def test_dfao_eval_structural_errors():
    broken = Dfao(states=("0",), start="0", transitions={}, outputs={})
    with pytest.raises(DfaoError):
        dfao_eval(broken, 1)  # missing transition
    with pytest.raises(DfaoError):
        dfao_eval(broken, 0)  # missing output on the start state


def test_canonical_inputs_never_leave_defined_region():
    # erasing-coded states are only reachable on non-final prefixes
    for n in range(20_000):
        assert dfao_eval(R_DFAO, n) in "01"


def test_lemma_identities_base_values():
    assert G.apply(naive_iterate(F, "0", 2)) == "00100"
    assert G.apply(naive_iterate(F, "3", 2)) == "11011"
    report = verify_lemma_identities(2)
    assert report.ok and report.checked == 1


def test_lemma_identities_up_to_12():
    report = verify_lemma_identities(12)
    assert report.ok, report.failures


def test_lemma_identities_negative_control():
    f_bad = Morphism(F.alphabet, {**F.images, "4": "5"})
    report = verify_lemma_identities(6, f=f_bad, g=G)
    assert not report.ok and report.failures


def test_equivalence_base_case_by_hand():
    assert TAU.apply(PHI.apply("0")) == G.apply(F.apply("0")) + G.apply("3")
    assert TAU.apply(PHI.apply("1")) == G.apply(F.apply("0")) + G.apply(F.apply("3"))
    assert TAU.apply(PHI.apply("2")) == G.apply(F.apply("0")) + G.apply(naive_iterate(F, "3", 2))
    report = verify_equivalence(1)
    assert report.ok


def test_equivalence_up_to_12():
    report = verify_equivalence(12)
    assert report.ok, report.failures


def test_equivalence_negative_control():
    tau_bad = Morphism(TAU.alphabet, {**TAU.images, "2": "010"})
    report = verify_equivalence(4, tau=tau_bad)
    assert not report.ok


def test_length_sequence_examples():
    assert length_sequence(3).values == (1, 3, 7)
    assert length_sequence(2).values == (1, 3)
    vals = length_sequence(10).values
    assert vals[5] == 2 * vals[4] + vals[3]


def test_length_sequence_matches_literal_expansion():
    vals = length_sequence(13, direct_check_bound=12).values  # checked internally
    w = "0"
    for i in range(13):
        assert len(TAU.apply(w)) == vals[i]
        w = PHI.apply(w)


def test_erasing_coded_iterates_are_nested_prefixes():
    prev = G.apply("0")
    w = "0"
    for _ in range(10):
        w = F.apply(w)
        cur = G.apply(w)
        assert len(cur) > len(prev)
        assert cur.startswith(prev)
        prev = cur


def test_r_prefixes_are_consistent_across_lengths(r100k):
    for n in (1, 17, 256, 9999):
        assert word_r("morphic-phi-tau", n) == r100k[:n]
