import random
import struct

import pytest

from fmagap.errors import BadMagicError, ChecksumError, VersionMismatchError
from fmagap.fma import FMIndex
from fmagap.image import from_bytes, load_index, save_index, size_report, to_bytes
from fmagap.oracle import random_patterns, validate


def test_second_save_is_byte_identical(four_fm, tmp_path):
    path = tmp_path / "four.idx"
    save_index(four_fm, path)
    again = load_index(path)
    save_index(again, tmp_path / "again.idx")
    assert path.read_bytes() == (tmp_path / "again.idx").read_bytes()


def test_loaded_index_answers_alike(four, four_fm):
    loaded = from_bytes(to_bytes(four_fm))
    for p in ["aaacc", "cct", "ac", "c", "tat"]:
        assert loaded.locate(p) == four_fm.locate(p)
    assert [loaded.string(j) for j in range(1, 5)] == list(four[0].strings)
    assert validate(loaded, four[0]).ok


def test_truncated_image(four_fm):
    data = to_bytes(four_fm)
    with pytest.raises(ChecksumError):
        from_bytes(data[:-7])
    with pytest.raises(ChecksumError):
        from_bytes(data[:10])


def test_corrupted_payload(four_fm):
    data = bytearray(to_bytes(four_fm))
    data[-3] ^= 0x40
    with pytest.raises(ChecksumError):
        from_bytes(bytes(data))


def test_version_bump(four_fm):
    data = bytearray(to_bytes(four_fm))
    struct.pack_into("<I", data, 4, 2)
    with pytest.raises(VersionMismatchError):
        from_bytes(bytes(data))


def test_bad_magic(four_fm):
    with pytest.raises(BadMagicError):
        from_bytes(b"GAMF" + to_bytes(four_fm)[4:])


def test_size_partition(four_fm):
    sizes = size_report(four_fm)
    assert sizes.total == len(to_bytes(four_fm))
    assert min(sizes.core, sizes.gap, sizes.sampling) > 0


def test_random_round_trips(instances):
    rng = random.Random(2)
    for inst in instances[:20]:
        fm = FMIndex.build(inst.strings, inst.segmentation, d=rng.choice([1, 4, 16]))
        back = from_bytes(to_bytes(fm))
        assert to_bytes(back) == to_bytes(fm)
        for p in random_patterns(rng, inst.strings, 10):
            assert back.locate(p) == fm.locate(p)
