from __future__ import annotations

import pytest

from richwords.numeration import (
    PellRep,
    decode,
    encode,
    is_canonical,
    is_high_power_period,
    pell,
)


def test_pell_values():
    assert [pell(i) for i in range(8)] == [0, 1, 2, 5, 12, 29, 70, 169]
    assert pell(5) == 29


def test_pell_negative_index_rejected():
    with pytest.raises(ValueError):
        pell(-1)


def test_pell_exceeds_machine_width_exactly():
    # far beyond 32- and 64-bit; Python ints carry these exactly
    assert pell(40) == 723_573_111_879_672
    assert pell(90) == 9_960_168_529_794_442_859_224_531_878_561_050


def test_encode_examples():
    assert str(encode(7)) == "110"
    assert str(encode(11)) == "201"
    assert encode(0).digits == ()
    assert str(encode(0)) == "0"


def test_decode_examples():
    assert decode(PellRep.from_string("110")) == 7
    assert decode(PellRep(())) == 0
    assert decode(PellRep.from_string("201")) == 11


def test_decode_accepts_non_canonical_digits():
    # digit-range invariants only; (12)_P = 1*P_2 + 2*P_1 = 4
    assert decode(PellRep((2, 1))) == 4


def test_digit_range_enforced():
    with pytest.raises(ValueError):
        PellRep((3,))
    with pytest.raises(ValueError):
        PellRep.from_string("103x")


def test_is_canonical_examples():
    assert is_canonical(PellRep.from_string("110"))
    assert not is_canonical(PellRep((2, 1)))  # msd 12: lsd digit is 2
    assert not is_canonical(PellRep((1, 2)))  # msd 21: 2 followed by nonzero
    assert not is_canonical(PellRep((1, 0)))  # trailing msd zero
    assert is_canonical(PellRep(()))


def test_round_trip_dense():
    for n in range(1_000_000):
        r = encode(n)
        assert decode(r) == n
    # canonicality spot-checked densely at the low end, sampled high
    for n in range(100_000):
        assert is_canonical(encode(n))
    for n in range(10**17, 10**17 + 50):
        assert decode(encode(n)) == n and is_canonical(encode(n))


def test_encoding_is_order_isomorphic():
    def key(n):
        d = encode(n).digits
        return (len(d), tuple(reversed(d)))

    prev = key(0)
    for n in range(1, 20_000):
        cur = key(n)
        assert prev < cur
        prev = cur


def test_high_power_period_examples():
    assert is_high_power_period(7)
    assert is_high_power_period(17)
    assert not is_high_power_period(6)
    with pytest.raises(ValueError):
        is_high_power_period(0)


def test_high_power_period_family_below_10k():
    family = set()
    n = 3
    while pell(n) + pell(n - 1) <= 10_000:
        family.add(pell(n) + pell(n - 1))
        n += 1
    assert family == {7, 17, 41, 99, 239, 577, 1393, 3363, 8119}
    scanned = {p for p in range(1, 10_001) if is_high_power_period(p)}
    assert scanned == family
