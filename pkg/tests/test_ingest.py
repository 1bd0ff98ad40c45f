import random

import pytest

from fmagap.errors import IngestError, ParseError
from fmagap.ingest import (Variant, VariantSet, format_alignment, from_variants, parse_alignment,
                           parse_variants, read_reference, read_variant_set, write_variants)
from fmagap.oracle import random_variants

from golden import FOUR_STRINGS


def test_parse_four_strings(four):
    strings, seg = four
    assert strings.strings == FOUR_STRINGS
    assert seg.r == 2 and seg.alpha == ("$cct", "aac", "#")
    assert seg.delta[3][0] == ""
    assert strings.alphabet == "$#act"


def test_format_round_trip(four):
    text = format_alignment(*four)
    assert parse_alignment(text) == four


def test_sentinels_added_when_absent():
    strings, seg = parse_alignment("#FMA-ALIGN 1\nALPHABET ab\nR 0\nA abba\nM 2\n")
    assert strings.strings == ("$abba#", "$abba#") and seg.alpha == ("$abba#",)


BASE = ["#FMA-ALIGN 1", "ALPHABET act", "R 1", "A $cc", "A t#", "M 1", "D 1 1 a"]


@pytest.mark.parametrize("edit, line", [
    ((0, "#FMA-ALIGN 2"), 1),
    ((4, "A ."), 5),
    ((4, "A "), 5),
    ((6, "D 1 1 g"), 7),
    ((6, "D 1 2 a"), 7),
    ((2, "R x"), 3),
    ((5, "N 1"), 6),
])
def test_parse_errors_carry_line(edit, line):
    lines = list(BASE)
    lines[edit[0]] = edit[1]
    with pytest.raises(ParseError) as err:
        parse_alignment("\n".join(lines))
    assert err.value.line == line
    assert str(err.value).startswith(f"line {line}:")


def test_missing_and_extra_records():
    with pytest.raises(ParseError, match="end of input"):
        parse_alignment("\n".join(BASE[:-1]))
    with pytest.raises(ParseError, match="trailing"):
        parse_alignment("\n".join(BASE + ["D 1 2 a"]))


def test_deletion_variant():
    vs = VariantSet("ACGT", (("A", (Variant(2, "C", ""),)), ("B", ())))
    strings, seg = from_variants(vs)
    assert seg.alpha == ("$A", "GT#")
    assert seg.delta == (("",), ("C",))
    assert strings.strings == ("$AGT#", "$ACGT#")


def test_no_variants():
    strings, seg = from_variants(VariantSet("AT", (("A", ()), ("B", ()))))
    assert seg.r == 0 and seg.alpha == ("$AT#",)


def test_adjacent_intervals_merge():
    vs = VariantSet("ACGT", (("A", (Variant(2, "C", "CT"),)), ("B", (Variant(3, "G", "A"),))))
    _, seg = from_variants(vs)
    assert seg.alpha == ("$A", "T#")
    assert seg.delta == (("CTG",), ("CA",))


@pytest.mark.parametrize("variants, message", [
    ((Variant(2, "G", "A"),), "does not match"),
    ((Variant(2, "CG", ""), Variant(3, "G", "T")), "overlaps"),
    ((Variant(5, "T", "A"),), "outside"),
    ((Variant(2, "C", "#"),), "sentinel"),
])
def test_ingest_errors_name_sample_and_position(variants, message):
    with pytest.raises(IngestError, match=message) as err:
        from_variants(VariantSet("ACGT", (("s7", variants),)))
    assert "s7" in str(err.value)


def test_direct_edit_agrees_with_segments():
    rng = random.Random(11)
    for _ in range(200):
        ref = "".join(rng.choice("acgt") for _ in range(rng.randint(1, 120)))
        samples = tuple((f"s{k}", random_variants(rng, ref, 0.05, 0.03, 0.03, margin=0))
                        for k in range(rng.randint(1, 6)))
        vs = VariantSet(ref, samples)
        strings, seg = from_variants(vs)
        for k in range(len(samples)):
            assert seg.spell(k + 1) == "$" + vs.apply(k) + "#"


def test_variant_files(tmp_path):
    (tmp_path / "ref.fa").write_text(">chr\nACG\nT\n")
    vdir = tmp_path / "vars"
    vdir.mkdir()
    (vdir / "a.tsv").write_text("# comment\n2\tC\t.\n")
    (vdir / "b.tsv").write_text(write_variants([Variant(3, "G", "GA")]))
    vs = read_variant_set(tmp_path / "ref.fa", vdir)
    assert read_reference(tmp_path / "ref.fa") == "ACGT"
    assert vs.samples == (("a", (Variant(2, "C", ""),)), ("b", (Variant(3, "G", "GA"),)))
    with pytest.raises(ParseError):
        parse_variants(["2 C A"])
