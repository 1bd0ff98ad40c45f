import random

import pytest

from fmagap.errors import UndefinedPairError
from fmagap.fma import FMIndex, Occurrence
from fmagap.oracle import naive_locate, random_patterns

from golden import FOUR_STRINGS, TABLE


def test_occ_columns(four_fm):
    for i, row in TABLE.items():
        assert (four_fm.occ("a", i), four_fm.occ("c", i), four_fm.occ("t", i)) == row[4:7], i
    assert all(four_fm.occ(s, 0) == 0 for s in "$#act")
    assert four_fm.occ("q", 10) == 0


def test_lf_values(four_fm):
    assert four_fm.lf("a", 10) == 6
    assert four_fm.lf("c", 10) == 13
    assert four_fm.lf("a", 6) == four_fm.lf("a", 7) == four_fm.lf("a", 8) == 5
    assert {four_fm.lf("c", i) for i in (16, 17, 18, 19)} == {15}
    with pytest.raises(UndefinedPairError):
        four_fm.lf("t", 10)


def test_aaacc_trace(four_fm):
    steps = {k: (s.first, s.last, set(s.z)) for k, s in four_fm.search_steps("aaacc")}
    assert steps[4][:2] == (13, 15)
    assert steps[3] == (8, 8, {1, 2, 3, 4})
    assert steps[2] == (5, 5, {1, 4})
    assert steps[1] == (4, 4, {1})
    assert four_fm.locate("aaacc") == [Occurrence(1, 6)]
    assert four_fm.count("aaacc") == 1


def test_eager_z_narrows_earlier(four_fm):
    steps = {k: set(s.z) for k, s in four_fm.search_steps("aaacc", eager=True)}
    assert steps[3] == {1, 4} and steps[1] == {1}


@pytest.mark.parametrize("pattern", ["cct", "ac", "cctccaaaca", "a", "tata", "ccc", "g", "aaaa"])
def test_four_locate_matches_scan(four_fm, pattern):
    assert four_fm.locate(pattern) == naive_locate(FOUR_STRINGS, pattern)
    assert four_fm.count(pattern) == len(naive_locate(FOUR_STRINGS, pattern))


def test_ac_count_from_scan(four_fm):
    assert four_fm.count("ac") == 4
    assert four_fm.locate("cct") == [Occurrence(j, 2) for j in (1, 2, 3, 4)]


@pytest.mark.parametrize("bad", ["", "$", "a#c"])
def test_rejected_patterns(four_fm, bad):
    with pytest.raises(ValueError):
        four_fm.locate(bad)


def test_absent_symbol(four_fm):
    st = four_fm.backward_search("q")
    assert st.empty and four_fm.locate("aqa") == []


def test_resolve_entry(four_fm):
    assert four_fm.resolve_entry(22) == ([1], {1: 4})
    assert four_fm.resolve_entry(8) == ([1, 4], {1: 8, 4: 6})
    for i, (strs, *_rest) in TABLE.items():
        assert four_fm.resolve_entry(i)[0] == list(strs)


def test_extract(four_fm):
    assert four_fm.extract(4, 1, 8) == "$cctaacc"
    assert four_fm.extract(3, 5, 9) == "tataa"
    assert four_fm.extract(1, 6, 10) == "aaacc"
    assert [four_fm.string(j) for j in range(1, 5)] == list(FOUR_STRINGS)
    for args in [(0, 1, 1), (1, 0, 2), (1, 5, 4), (4, 1, 10)]:
        with pytest.raises(ValueError):
            four_fm.extract(*args)


def test_random_instances_match_oracle(instances):
    rng = random.Random(5)
    for inst in instances:
        fm = FMIndex.build(inst.strings, inst.segmentation, d=rng.choice([1, 3, 8, 32]))
        for p in random_patterns(rng, inst.strings, 20):
            assert fm.locate(p) == naive_locate(inst.strings, p), p
            lazy = [(k, s.first, s.last) for k, s in fm.search_steps(p)]
            eager = [(k, s.first, s.last) for k, s in fm.search_steps(p, eager=True)]
            assert lazy == eager
            assert fm.backward_search(p, eager=True).empty == fm.backward_search(p).empty or not fm.locate(p)


def test_ranges_shrink_and_membership(instances):
    rng = random.Random(9)
    for inst in instances[:25]:
        fm = FMIndex.build(inst.strings, inst.segmentation, d=4)
        table = {i: fm.resolve_entry(i) for i in range(1, fm.entries + 1)}
        texts = inst.strings.strings
        for p in random_patterns(rng, inst.strings, 10):
            sizes = []
            for k, st in fm.search_steps(p, eager=True):
                sizes.append(st.last - st.first + 1)
                suffix = p[k - 1:]
                inside = {(j, q) for i in range(st.first, st.last + 1)
                          for j, q in table[i][1].items() if j in st.z}
                truth = {(o.string_id, o.position) for o in naive_locate(texts, suffix)}
                assert inside == truth, (p, k)
            assert all(a >= b for a, b in zip(sizes, sizes[1:]))


def test_extraction_totality(instances):
    for inst in instances:
        fm = FMIndex.build(inst.strings, inst.segmentation, d=5)
        for j in range(1, fm.m + 1):
            assert fm.string(j) == inst.strings[j]
        s = inst.strings[1]
        if len(s) > 4:
            assert fm.extract(1, 2, len(s) - 2) == s[1:len(s) - 2]
