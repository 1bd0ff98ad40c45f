import numpy as np
from hypothesis import given, settings, strategies as st

from fmagap.bitvector import PrefixRank, RankBitVector


@given(st.lists(st.booleans(), max_size=1500))
@settings(max_examples=150)
def test_packed_matches_prefix_sums(bits):
    fast, ref = RankBitVector(bits), PrefixRank(bits)
    assert fast.ones == ref.ones and len(fast) == len(ref)
    for i in range(len(bits) + 2):
        assert fast.rank1(i) == ref.rank1(i)
    for k in range(1, ref.ones + 1):
        assert fast.select1(k) == ref.select1(k)
    for i, b in enumerate(bits):
        assert fast[i] == b
    if bits:
        lo, hi = len(bits) // 3, len(bits) - len(bits) // 4
        assert fast.ones_between(lo, hi) == ref.ones_between(lo, hi)
    assert fast.to_numpy().tolist() == list(bits)


def test_word_round_trip():
    rng = np.random.default_rng(3)
    bits = rng.random(5000) < 0.3
    bv = RankBitVector(bits)
    again = RankBitVector.from_words(bv.words.copy(), bv.size)
    assert again == bv
    assert again.rank1(4097) == int(bits[:4097].sum())
