import numpy as np
import pytest

from fmagap.alignment import SimilarStrings, Segmentation, ids_of, segment, transform
from fmagap.saa import build_saa, classify_and_mark, enumerate_asuffixes, irregular, sample

from golden import TABLE, TABLE_C


@pytest.fixture(scope="module")
def four_ta(four):
    return transform(segment(*four))


@pytest.fixture(scope="module")
def table(four_ta):
    return classify_and_mark(build_saa(four_ta))


def test_asuffixes_at_columns_8_and_9(four_ta):
    by_col = {}
    for a in enumerate_asuffixes(four_ta):
        by_col.setdefault(a.pos, []).append(a)
    assert [a.members for a in by_col[8]] == [[1, 2, 3, 4]]
    assert sorted(tuple(a.members) for a in by_col[9]) == [(1, 4), (2,)]
    texts = {a.text(four_ta.strings) for a in by_col[9]}
    assert texts == {"acc#", "aca#"}


def test_asuffixes_cover_every_suffix_once(four_ta):
    cells = [(j, a.pos) for a in enumerate_asuffixes(four_ta) for j in a.members]
    assert len(cells) == len(set(cells)) == sum(len(s) for s in four_ta.strings.strings)
    assert all(not four_ta.gaps[j - 1].is_gap(q) for j, q in cells)


def test_gapless_single_string():
    s = SimilarStrings.from_raw(["abcab"])
    ta = transform(segment(s, Segmentation((s[1],), ((),))))
    assert [a.members for a in enumerate_asuffixes(ta)] == [[1]] * 7


def test_table_rows(table):
    assert len(table) == 24
    for i, (strs, pos, f, l, *_rest) in TABLE.items():
        assert table.entry(i) == (list(strs), pos), i
        assert table.f(i) == f, i
        assert "".join(table.l_symbols(i)) == l, i


def test_table_bits_and_c(table):
    assert table.C.tolist() == TABLE_C
    for i, row in TABLE.items():
        b_sym = row[7]
        for sym in "$#act":
            assert table.b(sym, i) == (sym == b_sym), (sym, i)
    assert [i for i in (6, 7, 8) if table.is_counted("a", i)] == [6]
    assert [i for i in (16, 17, 18, 19) if table.is_counted("c", i)] == [16]


def test_table_l_partitions(table):
    assert table.l(10) == {"a": [3], "c": [1, 4]}
    assert table.l(5) == {"a": [1, 2], "t": [3, 4]}
    assert table.l(17) == {"c": [1]}
    assert table.l(1) == {"#": [1, 2, 3, 4]}


def test_irregular_entries(table):
    assert (np.flatnonzero(irregular(table)) + 1).tolist() == [2, 5, 6, 7, 8, 10, 12, 16, 17, 18, 19, 20]


def test_sampling_d4(table, four_ta):
    ssa, isaa = sample(table, four_ta, 4)
    marked = set((np.flatnonzero(ssa.marked) + 1).tolist())
    assert {2, 5, 6, 7, 8, 10, 12, 16, 17, 18, 19, 20} <= marked
    assert all(table.pos[i - 1] % 4 != 0 or i in marked for i in range(1, 25))
    # column 4 is a gap of string 4, so column 6 stands in for it
    assert 4 not in isaa.samples[3] and 6 in isaa.samples[3]
    assert isaa.samples[3][6] == 16
    assert 4 in isaa.samples[0]


def test_sampling_d1_covers_everything(table, four_ta):
    ssa, isaa = sample(table, four_ta, 1)
    assert ssa.marked.all()
    for j in range(1, 5):
        assert sorted(isaa.samples[j - 1]) == four_ta.gaps[j - 1].columns().tolist()


def test_lf_properties_on_random_instances(instances):
    for inst in instances:
        idx = classify_and_mark(build_saa(transform(segment(inst.strings, inst.segmentation))))
        for i in range(1, len(idx) + 1):
            syms = idx.l_symbols(i)
            if any(idx.b(s, i) for s in syms):
                assert len(syms) == 1
            part = idx.l(i)
            assert sorted(j for ids in part.values() for j in ids) == ids_of(idx.strs[i - 1])
        assert int(idx.C[-1]) == len(idx)
        assert sum(len(ids_of(x)) for x in idx.strs) == sum(map(len, inst.strings.strings))
