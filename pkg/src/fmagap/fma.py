"""Query engine: occ, LF, backward search, locate, count and extract."""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterator

from .alignment import (SENTINELS, GapMap, Segmentation, SimilarStrings, TransformedAlignment,
                        ids_of, segment, transform)
from .bitvector import RankBitVector
from .errors import CorruptIndexError, UndefinedPairError
from .saa import SAAIndex, SampledISAA, SampledSAA, build_saa, classify_and_mark, sample


@dataclass(frozen=True)
class SearchState:
    first: int
    last: int
    mask: int  # bitmask of Z

    @property
    def z(self) -> frozenset[int]:
        return frozenset(ids_of(self.mask))

    @property
    def empty(self) -> bool:
        return self.first > self.last or not self.mask


@dataclass(frozen=True, order=True)
class Occurrence:
    string_id: int
    position: int


class FMIndex:
    """Compressed index over m similar strings.

    Holds only the compressed structures: C, one counted-occurrence and one
    (m:1) bit vector per symbol, the sampled SAA with its L partitions, the
    sampled inverse SAA and per-string gap maps. ``saa`` and ``alignment`` are
    kept after an in-memory build for validation and are absent after loading.
    """

    def __init__(self, *, alphabet: str, m: int, n: int, d: int, C, counted, mm, marked,
                 sample_strs, sample_pos, partitions, isa, gaps,
                 saa: SAAIndex | None = None, alignment: TransformedAlignment | None = None):
        self.alphabet = alphabet
        self.m = m
        self.n = n
        self.d = d
        self.C = [int(c) for c in C]
        self.counted: list[RankBitVector] = list(counted)
        self.mm: list[RankBitVector] = list(mm)
        self.marked: RankBitVector = marked
        self.sample_strs: list[int] = list(sample_strs)
        self.sample_pos: list[int] = [int(p) for p in sample_pos]
        self.partitions: dict[int, dict[int, int]] = partitions
        self.isa: tuple[tuple[list[int], list[int]], ...] = tuple(isa)
        self.gaps: tuple[GapMap, ...] = tuple(gaps)
        self.saa = saa
        self.alignment = alignment
        self._rank = {ch: r for r, ch in enumerate(alphabet)}
        self.all_mask = (1 << m) - 1

    # construction -----------------------------------------------------

    @classmethod
    def from_parts(cls, idx: SAAIndex, ssa: SampledSAA, isaa: SampledISAA,
                   ta: TransformedAlignment) -> "FMIndex":
        partitions = {e + 1: dict(part) for e, part in idx.l_partition.items()}
        isa = []
        for per in isaa.samples:
            cols = sorted(per)
            isa.append((cols, [per[q] for q in cols]))
        return cls(
            alphabet=idx.alphabet, m=idx.m, n=ta.n, d=ssa.d, C=idx.C,
            counted=[RankBitVector(row) for row in idx.counted],
            mm=[RankBitVector(row) for row in idx.B],
            marked=RankBitVector(ssa.marked),
            sample_strs=ssa.strs, sample_pos=ssa.pos,
            partitions=partitions, isa=isa, gaps=ta.gaps, saa=idx, alignment=ta,
        )

    @classmethod
    def build(cls, strings: SimilarStrings, seg: Segmentation, d: int = 32) -> "FMIndex":
        ta = transform(segment(strings, seg))
        idx = classify_and_mark(build_saa(ta))
        ssa, isaa = sample(idx, ta, d)
        return cls.from_parts(idx, ssa, isaa, ta)

    # basic structure --------------------------------------------------

    @property
    def entries(self) -> int:
        return self.C[-1]

    def length(self, j: int) -> int:
        return self.gaps[j - 1].length

    def f(self, i: int) -> str:
        return self.alphabet[bisect.bisect_right(self.C, i - 1) - 1]

    def l_symbols(self, i: int) -> list[str]:
        return [ch for r, ch in enumerate(self.alphabet)
                if self.counted[r][i - 1] or self.mm[r][i - 1]]

    def occ(self, sym: str, i: int) -> int:
        r = self._rank.get(sym)
        if r is None:
            return 0
        return self.counted[r].rank1(i)

    def lf(self, sym: str, i: int) -> int:
        r = self._rank.get(sym)
        if r is None or not 1 <= i <= self.entries or not (self.counted[r][i - 1] or self.mm[r][i - 1]):
            raise UndefinedPairError(f"({sym!r}, {i}) is not an L pair")
        return self.C[r] + self.counted[r].rank1(i)

    def _single_l(self, i: int) -> int:
        for r in range(len(self.alphabet)):
            if self.counted[r][i - 1]:
                return r
        raise CorruptIndexError(f"entry {i} is unsampled but has no counted L symbol")

    def _prev_symbol(self, i: int, j: int) -> int:
        part = self.partitions.get(i)
        if part is None:
            for r in range(len(self.alphabet)):
                if self.counted[r][i - 1] or self.mm[r][i - 1]:
                    return r
            raise CorruptIndexError(f"entry {i} has an empty L")
        bit = 1 << (j - 1)
        for r, mk in part.items():
            if mk & bit:
                return r
        raise CorruptIndexError(f"string {j} missing from the L partition of entry {i}")

    def _sampled(self, i: int) -> tuple[int, int]:
        k = self.marked.rank1(i - 1)
        return self.sample_strs[k], self.sample_pos[k]

    def _resolve(self, i: int) -> tuple[int, int, int]:
        """(string mask, transformed pos of the sample, LF steps taken) for entry i."""
        steps = 0
        while not self.marked[i - 1]:
            r = self._single_l(i)
            i = self.C[r] + self.counted[r].rank1(i)
            steps += 1
            if steps > self.n:
                raise CorruptIndexError("LF walk did not reach a sampled entry")
        mask, q = self._sampled(i)
        return mask, q, steps

    def resolve_entry(self, i: int) -> tuple[list[int], dict[int, int]]:
        """String ids of SAA[i] and the original start of each member suffix."""
        if not 1 <= i <= self.entries:
            raise IndexError(i)
        mask, q, steps = self._resolve(i)
        return ids_of(mask), {j: self.gaps[j - 1].to_original(q) + steps for j in ids_of(mask)}

    # search -----------------------------------------------------------

    @staticmethod
    def _check_pattern(pattern: str) -> None:
        if not pattern:
            raise ValueError("empty pattern")
        if any(c in SENTINELS for c in pattern):
            raise ValueError("pattern must not contain the sentinels '$' or '#'")

    def search_steps(self, pattern: str, eager: bool = False) -> Iterator[tuple[int, SearchState]]:
        """Yield (step, state) for step = p, p-1, ... while the backward search runs.

        When a step narrows the range to one entry through a (1:1) pair, Z must
        eventually be intersected with that entry's strings (Z_c). By default
        that intersection is deferred to the final step, since every later
        step re-imposes it anyway; ``eager=True`` applies it at every step.
        Both modes report the same occurrences.
        """
        self._check_pattern(pattern)
        p = len(pattern)
        r = self._rank.get(pattern[-1])
        if r is None:
            yield p, SearchState(1, 0, 0)
            return
        z = self.all_mask
        first, last = self.C[r] + 1, self.C[r + 1]
        yield p, SearchState(first, last, z)
        step = p - 1
        while first <= last and z and step >= 1:
            r = self._rank.get(pattern[step - 1])
            if r is None:
                yield step, SearchState(last + 1, last, z)
                return
            prev_first, prev_last = first, last
            first = self.C[r] + self.counted[r].rank1(first - 1) + 1
            last = self.C[r] + self.counted[r].rank1(last)
            if first >= last:
                zm = 0
                for e in self.mm[r].ones_between(prev_first - 1, prev_last):
                    zm |= self._sampled(e + 1)[0]
                if zm:
                    first = last
                    z &= zm
                elif eager or step == 1:
                    zc = self._resolve(last)[0] if first <= last else 0
                    z &= zc
            yield step, SearchState(first, last, z)
            step -= 1

    def backward_search(self, pattern: str, eager: bool = False) -> SearchState:
        state = None
        for _, state in self.search_steps(pattern, eager):
            pass
        return state

    def count(self, pattern: str) -> int:
        st = self.backward_search(pattern)
        if st.empty:
            return 0
        return sum((self._resolve(i)[0] & st.mask).bit_count() for i in range(st.first, st.last + 1))

    def locate(self, pattern: str) -> list[Occurrence]:
        st = self.backward_search(pattern)
        if st.empty:
            return []
        found = set()
        for i in range(st.first, st.last + 1):
            mask, q, steps = self._resolve(i)
            for j in ids_of(mask & st.mask):
                found.add(Occurrence(j, self.gaps[j - 1].to_original(q) + steps))
        return sorted(found)

    def extract(self, j: int, start: int, end: int) -> str:
        """S^j[start..end], rebuilt backwards from the nearest inverse-SAA sample."""
        if not 1 <= j <= self.m:
            raise ValueError(f"string id {j} outside 1..{self.m}")
        g = self.gaps[j - 1]
        if not 1 <= start <= end <= g.length:
            raise ValueError(f"range {start}..{end} outside 1..{g.length}")
        cols, ents = self.isa[j - 1]
        k = bisect.bisect_left(cols, g.to_transformed(end))
        i = ents[k]
        p = g.to_original(cols[k])
        out = []
        while True:
            if p <= end:
                out.append(self.f(i))
            if p == start:
                break
            r = self._prev_symbol(i, j)
            i = self.C[r] + self.counted[r].rank1(i)
            p -= 1
        return "".join(reversed(out))

    def string(self, j: int) -> str:
        return self.extract(j, 1, self.length(j))
