"""Binary index image.

Layout, all integers little-endian::

    b"FMAG" | u32 version | u32 crc32(payload) | u64 len(payload) | payload

The payload is a run of sections, each ``4-byte tag | u64 length | body``:
``HEAD`` (sizes, alphabet), ``CORE`` (C and the per-symbol counted/B
bitmaps), ``GAPS`` (gap intervals per string), ``SAMP`` (sampled SAA with L
partitions) and ``ISAM`` (sampled inverse SAA). Bitmaps are a u64 bit count
followed by the raw 64-bit words.
"""
from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .alignment import GapMap
from .bitvector import RankBitVector
from .errors import BadMagicError, ChecksumError, ImageError, VersionMismatchError
from .fma import FMIndex

MAGIC = b"FMAG"
VERSION = 1
PREAMBLE = struct.Struct("<4sIIQ")
SECTION = struct.Struct("<4sQ")
ORDER = (b"HEAD", b"CORE", b"GAPS", b"SAMP", b"ISAM")
U32_MAX = 2**32 - 1


def _u32s(values) -> bytes:
    arr = np.asarray(values, dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() > U32_MAX):
        raise ImageError("value does not fit in 32 bits")
    return arr.astype("<u4").tobytes()


def _bitmap(bv: RankBitVector) -> bytes:
    return struct.pack("<Q", bv.size) + np.asarray(bv.words, dtype="<u8").tobytes()


def _mask_bytes(m: int) -> int:
    return (m + 7) // 8


def _sections(fm: FMIndex) -> list[tuple[bytes, bytes]]:
    sigma = len(fm.alphabet)
    nb = _mask_bytes(fm.m)
    alpha = fm.alphabet.encode("latin-1")
    head = struct.pack("<IIIIB", fm.m, fm.n, fm.d, fm.entries, sigma) + alpha

    core = [np.asarray(fm.C, dtype="<u8").tobytes()]
    for r in range(sigma):
        core.append(_bitmap(fm.counted[r]))
        core.append(_bitmap(fm.mm[r]))

    gaps = []
    for g in fm.gaps:
        gaps.append(struct.pack("<I", len(g.intervals)))
        gaps.append(_u32s([x for iv in g.intervals for x in iv]))

    samp = [_bitmap(fm.marked), struct.pack("<I", len(fm.sample_pos)), _u32s(fm.sample_pos)]
    samp.append(b"".join(mk.to_bytes(nb, "little") for mk in fm.sample_strs))
    samp.append(struct.pack("<I", len(fm.partitions)))
    for e in sorted(fm.partitions):
        part = fm.partitions[e]
        samp.append(struct.pack("<IB", e, len(part)))
        for r in sorted(part):
            samp.append(struct.pack("<B", r) + part[r].to_bytes(nb, "little"))

    isam = []
    for cols, ents in fm.isa:
        isam.append(struct.pack("<I", len(cols)))
        isam.append(_u32s(cols))
        isam.append(_u32s(ents))

    return [(b"HEAD", head), (b"CORE", b"".join(core)), (b"GAPS", b"".join(gaps)),
            (b"SAMP", b"".join(samp)), (b"ISAM", b"".join(isam))]


def to_bytes(fm: FMIndex) -> bytes:
    payload = b"".join(SECTION.pack(tag, len(body)) + body for tag, body in _sections(fm))
    return PREAMBLE.pack(MAGIC, VERSION, zlib.crc32(payload), len(payload)) + payload


@dataclass(frozen=True)
class SizeReport:
    core: int
    gap: int
    sampling: int

    @property
    def total(self) -> int:
        return self.core + self.gap + self.sampling


def size_report(fm: FMIndex) -> SizeReport:
    """Image bytes split three ways; preamble and HEAD count toward core."""
    sizes = {tag: SECTION.size + len(body) for tag, body in _sections(fm)}
    return SizeReport(
        core=PREAMBLE.size + sizes[b"HEAD"] + sizes[b"CORE"],
        gap=sizes[b"GAPS"],
        sampling=sizes[b"SAMP"] + sizes[b"ISAM"],
    )


def save_index(fm: FMIndex, path) -> None:
    Path(path).write_bytes(to_bytes(fm))


class _Reader:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.at = 0

    def take(self, n: int) -> bytes:
        if self.at + n > len(self.buf):
            raise ImageError("section body ends early")
        out = self.buf[self.at:self.at + n]
        self.at += n
        return out

    def unpack(self, fmt: str):
        s = struct.Struct("<" + fmt)
        return s.unpack(self.take(s.size))

    def u32s(self, k: int) -> list[int]:
        return np.frombuffer(self.take(4 * k), dtype="<u4").astype(np.int64).tolist()

    def bitmap(self) -> RankBitVector:
        (size,) = self.unpack("Q")
        nwords = (size + 63) // 64
        words = np.frombuffer(self.take(8 * nwords), dtype="<u8").copy()
        return RankBitVector.from_words(words, size)

    def done(self) -> None:
        if self.at != len(self.buf):
            raise ImageError("trailing bytes in section")


def from_bytes(data: bytes) -> FMIndex:
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagicError("not an index image (bad magic)")
    if len(data) < PREAMBLE.size:
        raise ChecksumError("image truncated inside the preamble")
    _, version, crc, length = PREAMBLE.unpack_from(data)
    if version != VERSION:
        raise VersionMismatchError(f"image version {version}, this build reads version {VERSION}")
    payload = data[PREAMBLE.size:]
    if len(payload) != length or zlib.crc32(payload) != crc:
        raise ChecksumError("payload checksum mismatch (truncated or corrupted image)")

    bodies = {}
    top = _Reader(payload)
    for expect in ORDER:
        tag, size = top.unpack("4sQ")
        if tag != expect:
            raise ImageError(f"expected section {expect!r}, found {tag!r}")
        bodies[tag] = _Reader(top.take(size))
    top.done()

    h = bodies[b"HEAD"]
    m, n, d, entries, sigma = h.unpack("IIIIB")
    alphabet = h.take(sigma).decode("latin-1")
    h.done()
    nb = _mask_bytes(m)

    c = bodies[b"CORE"]
    C = np.frombuffer(c.take(8 * (sigma + 1)), dtype="<u8").astype(np.int64).tolist()
    counted, mm = [], []
    for _ in range(sigma):
        counted.append(c.bitmap())
        mm.append(c.bitmap())
    c.done()

    g = bodies[b"GAPS"]
    gaps = []
    for _ in range(m):
        (k,) = g.unpack("I")
        flat = g.u32s(2 * k)
        gaps.append(GapMap(list(zip(flat[0::2], flat[1::2])), n))
    g.done()

    s = bodies[b"SAMP"]
    marked = s.bitmap()
    (k,) = s.unpack("I")
    sample_pos = s.u32s(k)
    raw = s.take(k * nb)
    sample_strs = [int.from_bytes(raw[t * nb:(t + 1) * nb], "little") for t in range(k)]
    (np_,) = s.unpack("I")
    partitions = {}
    for _ in range(np_):
        e, cnt = s.unpack("IB")
        part = {}
        for _ in range(cnt):
            (r,) = s.unpack("B")
            part[r] = int.from_bytes(s.take(nb), "little")
        partitions[e] = part
    s.done()

    i = bodies[b"ISAM"]
    isa = []
    for _ in range(m):
        (k,) = i.unpack("I")
        isa.append((i.u32s(k), i.u32s(k)))
    i.done()

    if C[-1] != entries:
        raise ImageError("entry count disagrees with C")
    return FMIndex(alphabet=alphabet, m=m, n=n, d=d, C=C, counted=counted, mm=mm, marked=marked,
                   sample_strs=sample_strs, sample_pos=sample_pos, partitions=partitions,
                   isa=isa, gaps=gaps)


def load_index(path) -> FMIndex:
    return from_bytes(Path(path).read_bytes())
