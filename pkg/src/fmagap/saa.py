"""Suffix array of alignment: a-suffixes, F/L columns, LF classification, sampling.

Entries are stored 0-based in arrays; accessors taking an entry index use the
1-based numbering of the SAA rows.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .alignment import TransformedAlignment, ids_of
from .errors import LemmaViolationError, ModelViolationError
from .suffix_array import doubling_order, encode


@dataclass(frozen=True)
class ASuffix:
    pos: int
    strs: int  # bitmask over string ids, bit j-1 for string j
    rep: tuple[int, int]  # (string id, original start) of one member suffix

    @property
    def members(self) -> list[int]:
        return ids_of(self.strs)

    def text(self, strings) -> str:
        j, p = self.rep
        return strings[j][p - 1:]


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length()


def _enumerate(ta: TransformedAlignment) -> tuple[list[ASuffix], np.ndarray]:
    """A-suffixes in column order plus the a-suffix id of every (string, position)."""
    model = ta.model
    strings = ta.strings
    m = ta.m
    lens = [len(s) for s in strings.strings]
    off = np.concatenate([[0], np.cumsum(lens)[:-1]]).astype(np.int64)
    aid = np.empty(sum(lens), dtype=np.int64)
    cursor = [0] * m
    out: list[ASuffix] = []
    everyone = strings.all_mask

    for reg in ta.regions:
        if reg.kind == "cs":
            first = len(out)
            w = reg.width
            out.extend(ASuffix(reg.start + t, everyone, (1, cursor[0] + t + 1)) for t in range(w))
            ids = np.arange(first, first + w)
            for j in range(m):
                aid[off[j] + cursor[j]: off[j] + cursor[j] + w] = ids
                cursor[j] += w
            continue

        contents: dict[str, int] = {}
        for j in range(1, m + 1):
            c = model.ps_content(j, reg.index)
            contents[c] = contents.get(c, 0) | (1 << (j - 1))
        masks: dict[str, int] = {}
        for c, mk in contents.items():
            for t in range(len(c)):
                masks[c[t:]] = masks.get(c[t:], 0) | mk
        ids: dict[str, int] = {}
        for key in sorted(masks, key=lambda s: (-len(s), s)):
            mk = masks[key]
            jr = _lowest(mk)
            start = cursor[jr - 1] + len(model.ps_content(jr, reg.index)) - len(key) + 1
            ids[key] = len(out)
            out.append(ASuffix(reg.end - len(key) + 1, mk, (jr, start)))
        for c, mk in contents.items():
            row = np.fromiter((ids[c[t:]] for t in range(len(c))), dtype=np.int64, count=len(c))
            for j in ids_of(mk):
                aid[off[j - 1] + cursor[j - 1]: off[j - 1] + cursor[j - 1] + len(c)] = row
                cursor[j - 1] += len(c)
    return out, aid


def enumerate_asuffixes(ta: TransformedAlignment) -> list[ASuffix]:
    return _enumerate(ta)[0]


@dataclass(frozen=True, eq=False)
class BuildTables:
    """Per-suffix arrays kept from construction (global index = string offset + p - 1)."""

    codes: np.ndarray
    offsets: np.ndarray
    lengths: np.ndarray
    order: np.ndarray  # global suffix indices in SAA order
    starts: np.ndarray  # first slot of each entry within ``order``
    entry_of: np.ndarray  # 0-based entry of every global suffix
    prev: np.ndarray  # global index of the cyclically preceding character
    string_of: np.ndarray  # 1-based string id of every global suffix

    def global_index(self, j: int, p: int) -> int:
        return int(self.offsets[j - 1]) + p - 1

    def entry_at(self, j: int, p: int) -> int:
        """1-based entry holding suffix (j, original position p)."""
        return int(self.entry_of[self.global_index(j, p)]) + 1


@dataclass(frozen=True, eq=False)
class SAAIndex:
    alphabet: str
    m: int
    pos: np.ndarray
    strs: list[int]
    F: np.ndarray
    l_single: np.ndarray  # symbol rank, or -1 when L[i] has several symbols
    l_partition: dict[int, dict[int, int]]  # 0-based entry -> symbol rank -> string mask
    tables: BuildTables
    C: np.ndarray | None = None
    counted: np.ndarray | None = None  # bool (|alphabet|, entries)
    B: np.ndarray | None = None  # bool (|alphabet|, entries)
    pairs: tuple[np.ndarray, np.ndarray, np.ndarray] | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.pos)

    def entry(self, i: int) -> tuple[list[int], int]:
        return ids_of(self.strs[i - 1]), int(self.pos[i - 1])

    def f(self, i: int) -> str:
        return self.alphabet[self.F[i - 1]]

    def l(self, i: int) -> dict[str, list[int]]:
        """L[i] as symbol -> string ids whose preceding character it is."""
        s = int(self.l_single[i - 1])
        if s >= 0:
            return {self.alphabet[s]: ids_of(self.strs[i - 1])}
        part = self.l_partition[i - 1]
        return {self.alphabet[c]: ids_of(mk) for c, mk in sorted(part.items())}

    def l_symbols(self, i: int) -> list[str]:
        return list(self.l(i))

    def b(self, sym: str, i: int) -> bool:
        return bool(self.B[self.alphabet.index(sym), i - 1])

    def is_counted(self, sym: str, i: int) -> bool:
        return bool(self.counted[self.alphabet.index(sym), i - 1])


def build_saa(ta: TransformedAlignment) -> SAAIndex:
    """Sort all suffixes, collapse them into a-suffix blocks and read off F and L."""
    strings = ta.strings
    alphabet = strings.alphabet
    asfx, aid = _enumerate(ta)
    codes, ends = encode(strings.strings, alphabet)
    order = doubling_order(codes, ends, aid)

    a = aid[order]
    starts = np.concatenate([[0], np.flatnonzero(a[1:] != a[:-1]) + 1])
    if len(starts) != len(asfx):
        raise ModelViolationError(
            f"{len(starts)} suffix runs for {len(asfx)} a-suffixes: some a-suffix is not consecutive")
    run_aid = a[starts]
    entry_of_aid = np.empty(len(asfx), dtype=np.int64)
    entry_of_aid[run_aid] = np.arange(len(asfx))

    lengths = np.array([len(s) for s in strings.strings], dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(lengths)[:-1]]).astype(np.int64)
    n_total = len(codes)
    prev = np.arange(n_total, dtype=np.int64) - 1
    prev[offsets] = offsets + lengths - 1
    string_of = np.repeat(np.arange(1, strings.m + 1), lengths)

    pc = codes[prev][order]
    lo = np.minimum.reduceat(pc, starts)
    hi = np.maximum.reduceat(pc, starts)
    l_single = np.where(lo == hi, lo, -1)
    bounds = np.append(starts, n_total)
    partition: dict[int, dict[int, int]] = {}
    for e in np.flatnonzero(l_single < 0):
        part: dict[int, int] = {}
        for g in order[bounds[e]:bounds[e + 1]]:
            c = int(codes[prev[g]])
            part[c] = part.get(c, 0) | (1 << (int(string_of[g]) - 1))
        partition[int(e)] = part

    tables = BuildTables(codes, offsets, lengths, order, starts, entry_of_aid[aid], prev, string_of)
    return SAAIndex(
        alphabet=alphabet,
        m=strings.m,
        pos=np.array([asfx[x].pos for x in run_aid], dtype=np.int64),
        strs=[asfx[x].strs for x in run_aid],
        F=codes[order[starts]],
        l_single=l_single,
        l_partition=partition,
        tables=tables,
    )


def classify_and_mark(idx: SAAIndex) -> SAAIndex:
    """Compute every LF target by stepping member suffixes back, then B, counted and C."""
    t = idx.tables
    sigma = len(idx.alphabet)
    entries = len(idx)
    runlens = np.diff(np.append(t.starts, len(t.order)))
    member_entry = np.repeat(np.arange(entries, dtype=np.int64), runlens)
    pc = t.codes[t.prev[t.order]]
    target = t.entry_of[t.prev[t.order]]

    key = member_entry * sigma + pc
    srt = np.argsort(key, kind="stable")
    key, target = key[srt], target[srt]
    uk, first = np.unique(key, return_index=True)
    tmin = np.minimum.reduceat(target, first)
    tmax = np.maximum.reduceat(target, first)
    bad = np.flatnonzero(tmin != tmax)
    if len(bad):
        e, c = divmod(int(uk[bad[0]]), sigma)
        raise LemmaViolationError(
            f"L[{e + 1}] symbol {idx.alphabet[c]!r} maps to entries {tmin[bad[0]] + 1} and {tmax[bad[0]] + 1}")
    pair_entry, pair_sym = np.divmod(uk, sigma)
    pair_tgt = tmin

    shared = np.bincount(pair_tgt, minlength=entries)[pair_tgt] >= 2
    B = np.zeros((sigma, entries), dtype=bool)
    B[pair_sym[shared], pair_entry[shared]] = True
    _, smallest = np.unique(pair_tgt, return_index=True)
    counted = np.zeros((sigma, entries), dtype=bool)
    counted[pair_sym[smallest], pair_entry[smallest]] = True

    C = np.concatenate([[0], np.cumsum(np.bincount(idx.F, minlength=sigma))]).astype(np.int64)
    return replace(idx, C=C, counted=counted, B=B, pairs=(pair_sym, pair_entry, pair_tgt))


@dataclass(frozen=True, eq=False)
class SampledSAA:
    d: int
    marked: np.ndarray  # bool per entry
    strs: list[int]  # string masks of marked entries, in entry order
    pos: np.ndarray  # transformed positions of marked entries


@dataclass(frozen=True, eq=False)
class SampledISAA:
    d: int
    samples: tuple[dict[int, int], ...]  # per string: transformed column -> 1-based entry


def irregular(idx: SAAIndex) -> np.ndarray:
    return (idx.l_single < 0) | idx.B.any(axis=0)


def sample(idx: SAAIndex, ta: TransformedAlignment, d: int) -> tuple[SampledSAA, SampledISAA]:
    """Regular samples every d-th column plus the irregular entries LF walks cannot cross.

    The entry at column 1 is also kept so that no walk wraps through the
    sentinels, and every string samples its last column as an extraction anchor.
    """
    if d < 1:
        raise ValueError("sampling rate must be positive")
    marked = (idx.pos % d == 0) | irregular(idx) | (idx.pos == 1)
    keep = np.flatnonzero(marked)
    ssa = SampledSAA(d, marked, [idx.strs[e] for e in keep], idx.pos[keep].copy())

    t = idx.tables
    per_string = []
    for j in range(1, ta.m + 1):
        g = ta.gaps[j - 1]
        cols = sorted({g.next_free(q) for q in range(d, ta.n + 1, d)} | {ta.n})
        per_string.append({q: t.entry_at(j, g.to_original(q)) for q in cols})
    return ssa, SampledISAA(d, tuple(per_string))
