"""Similar-string model, right-justified transformation and coordinate maps.

Strings are numbered 1..m and positions/columns are 1-based throughout the
public API, matching the usual presentation of suffix arrays of alignments.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import GapPositionError, SegmentationError

BEGIN = "$"
END = "#"
SENTINELS = BEGIN + END


def ordered_alphabet(symbols: Iterable[str]) -> str:
    """Sentinels first (``$`` < ``#``), then regular symbols in byte order."""
    regular = sorted(set(symbols) - set(SENTINELS))
    return SENTINELS + "".join(regular)


def sort_key(text: str) -> str:
    """Map a string so that plain ``str`` comparison follows the index order."""
    return text.translate(_KEY_TABLE)


_KEY_TABLE = str.maketrans({BEGIN: "\x00", END: "\x01"})


def ids_of(mask: int) -> list[int]:
    """String ids (1-based) present in a bitmask."""
    out = []
    j = 1
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return out


def mask_of(ids: Iterable[int]) -> int:
    mask = 0
    for j in ids:
        mask |= 1 << (j - 1)
    return mask


@dataclass(frozen=True)
class SimilarStrings:
    strings: tuple[str, ...]
    alphabet: str

    def __post_init__(self):
        if not self.strings:
            raise SegmentationError("at least one string is required")
        if self.alphabet[:2] != SENTINELS:
            raise SegmentationError("alphabet must start with the sentinels '$#'")
        allowed = set(self.alphabet)
        for j, s in enumerate(self.strings, 1):
            if len(s) < 2 or s[0] != BEGIN or s[-1] != END:
                raise SegmentationError(f"string {j} must start with '$' and end with '#'")
            if s.count(BEGIN) != 1 or s.count(END) != 1:
                raise SegmentationError(f"string {j} has a repeated sentinel")
            bad = set(s) - allowed
            if bad:
                raise SegmentationError(f"string {j} uses symbols outside the alphabet: {sorted(bad)}")

    @classmethod
    def from_raw(cls, strings: Sequence[str], alphabet: str | None = None) -> "SimilarStrings":
        """Add missing sentinels, infer the alphabet when not given, validate."""
        fixed = tuple(_with_sentinels(s) for s in strings)
        symbols = set(alphabet or "").union(*map(set, fixed))
        return cls(fixed, ordered_alphabet(symbols))

    @property
    def m(self) -> int:
        return len(self.strings)

    def __getitem__(self, j: int) -> str:
        return self.strings[j - 1]

    @property
    def all_mask(self) -> int:
        return (1 << self.m) - 1


def _with_sentinels(s: str) -> str:
    if not s.startswith(BEGIN):
        s = BEGIN + s
    if not s.endswith(END):
        s = s + END
    return s


@dataclass(frozen=True)
class Segmentation:
    """S^j = alpha[0] delta[j-1][0] alpha[1] ... delta[j-1][r-1] alpha[r]."""

    alpha: tuple[str, ...]
    delta: tuple[tuple[str, ...], ...]

    @property
    def r(self) -> int:
        return len(self.alpha) - 1

    def spell(self, j: int) -> str:
        row = self.delta[j - 1]
        parts = [self.alpha[0]]
        for i in range(self.r):
            parts.append(row[i])
            parts.append(self.alpha[i + 1])
        return "".join(parts)

    def check(self, strings: SimilarStrings) -> None:
        if not self.alpha:
            raise SegmentationError("segmentation needs at least one common substring")
        for i, a in enumerate(self.alpha, 1):
            if not a:
                raise SegmentationError(f"common substring {i} is empty")
        if len(self.delta) != strings.m:
            raise SegmentationError(f"expected {strings.m} rows of non-common substrings, got {len(self.delta)}")
        for j, row in enumerate(self.delta, 1):
            if len(row) != self.r:
                raise SegmentationError(f"string {j}: expected {self.r} non-common substrings, got {len(row)}")
            if self.spell(j) != strings[j]:
                raise SegmentationError(f"string {j}: segments do not concatenate to the string")


class SuffixUniqueness:
    """Shortest suffix of a common substring that occurs exactly once in every string.

    Small collections are scanned directly. Large ones count k-mers of all
    strings at once (one vectorised pass per length) because every candidate
    is known to occur at least once per string, so "once in each" reduces to
    "m occurrences in total".
    """

    SCAN_LIMIT = 200_000

    def __init__(self, strings: SimilarStrings):
        self.strings = strings
        self._memo: dict[str, int | None] = {}

    def shortest(self, texts: Sequence[str]) -> list[int | None]:
        todo = [t for t in dict.fromkeys(texts) if t not in self._memo]
        if todo:
            total = sum(map(len, self.strings.strings))
            if total <= self.SCAN_LIMIT:
                for t in todo:
                    self._memo[t] = self._scan(t, 1)
            else:
                self._batch(todo)
        return [self._memo[t] for t in texts]

    def unique_everywhere(self, u: str) -> bool:
        for s in self.strings.strings:
            i = s.find(u)
            if i < 0 or s.find(u, i + 1) >= 0:
                return False
        return True

    def _scan(self, text: str, start: int) -> int | None:
        for k in range(start, len(text) + 1):
            if self.unique_everywhere(text[-k:]):
                return k
        return None

    def _batch(self, todo: list[str]) -> None:
        alphabet = self.strings.alphabet
        base = len(alphabet)
        lut = np.zeros(256, dtype=np.int64)
        for r, ch in enumerate(alphabet):
            lut[ord(ch)] = r
        rank = {ch: r for r, ch in enumerate(alphabet)}
        joined = "".join(self.strings.strings).encode("latin-1")
        codes = lut[np.frombuffer(joined, dtype=np.uint8)]
        n = len(codes)
        ends = np.repeat(np.cumsum([len(s) for s in self.strings.strings]),
                         [len(s) for s in self.strings.strings])
        starts = np.arange(n)
        kmax = max(1, int(63 // math.log2(max(base, 2))))
        m = self.strings.m

        pending = list(todo)
        cur = codes.copy()
        for k in range(1, kmax + 1):
            pending = [t for t in pending if t not in self._memo]
            for t in pending:
                if len(t) < k:
                    self._memo[t] = None
            pending = [t for t in pending if len(t) >= k]
            if not pending:
                return
            if k > 1:
                cur[: n - k + 1] = cur[: n - k + 1] * base + codes[k - 1:]
            windows = cur[starts + k <= ends]
            cand = []
            for t in pending:
                code = 0
                for ch in t[-k:]:
                    code = code * base + rank[ch]
                cand.append(code)
            uniq = np.unique(np.asarray(cand, dtype=np.int64))
            slot = np.searchsorted(uniq, windows)
            np.clip(slot, 0, len(uniq) - 1, out=slot)
            hit = uniq[slot] == windows
            counts = np.bincount(slot[hit], minlength=len(uniq))
            where = np.searchsorted(uniq, np.asarray(cand, dtype=np.int64))
            for t, w in zip(pending, where):
                if counts[w] == m:
                    self._memo[t] = k
        for t in pending:
            if t not in self._memo:
                self._memo[t] = self._scan(t, kmax + 1)


@dataclass(frozen=True)
class AlignmentModel:
    strings: SimilarStrings
    alpha_diamond: tuple[str, ...]
    alpha_plus: tuple[str, ...]
    delta: tuple[tuple[str, ...], ...]

    @property
    def r(self) -> int:
        return len(self.alpha_diamond) - 1

    @property
    def m(self) -> int:
        return self.strings.m

    def alpha(self, i: int) -> str:
        return self.alpha_diamond[i - 1] + self.alpha_plus[i - 1]

    def ps_content(self, j: int, i: int) -> str:
        """alpha+_i followed by the non-common substring of string j in region i."""
        return self.alpha_plus[i - 1] + self.delta[j - 1][i - 1]

    def segmentation(self) -> Segmentation:
        return Segmentation(tuple(self.alpha(i) for i in range(1, self.r + 2)), self.delta)


def segment(strings: SimilarStrings, seg: Segmentation,
            uniqueness: SuffixUniqueness | None = None) -> AlignmentModel:
    """Split every common substring into its cs part and its alpha+ anchor.

    Interior common substrings whose anchor would be the whole substring are
    merged with their neighbouring non-common substrings, repeatedly, until
    no merge applies.
    """
    seg.check(strings)
    uniqueness = uniqueness or SuffixUniqueness(strings)
    alpha = list(seg.alpha)
    delta = [list(row) for row in seg.delta]
    while True:
        r = len(alpha) - 1
        lengths = uniqueness.shortest(alpha[:r])
        if r >= 1 and (lengths[0] is None or lengths[0] >= len(alpha[0])):
            raise SegmentationError(
                f"the first common substring {alpha[0]!r} has no proper suffix occurring "
                "once in every string; extend it before the first non-common region")
        merge = {i for i in range(1, r) if lengths[i] is None or lengths[i] >= len(alpha[i])}
        if not merge:
            break
        alpha, delta = _merge(alpha, delta, merge)

    r = len(alpha) - 1
    plus = [a[len(a) - k:] for a, k in zip(alpha[:r], lengths)] + [""]
    diamond = [a[: len(a) - len(p)] for a, p in zip(alpha, plus)]
    return AlignmentModel(strings, tuple(diamond), tuple(plus), tuple(map(tuple, delta)))


def _merge(alpha: list[str], delta: list[list[str]], merge: set[int]):
    """Fold each listed common substring (0-based) into the non-common regions around it."""
    new_alpha = [alpha[0]]
    new_delta = [[row[0]] if row else [] for row in delta]
    for i in range(1, len(alpha)):
        if i in merge:
            for row, new_row in zip(delta, new_delta):
                new_row[-1] += alpha[i] + row[i]
        else:
            new_alpha.append(alpha[i])
            if i < len(alpha) - 1:
                for row, new_row in zip(delta, new_delta):
                    new_row.append(row[i])
    return new_alpha, new_delta


class GapMap:
    """Gap intervals of one transformed row with O(log) coordinate conversion."""

    def __init__(self, intervals: Sequence[tuple[int, int]], n: int):
        self.intervals = tuple((int(s), int(e)) for s, e in intervals)
        self.n = n
        self._starts = [s for s, _ in self.intervals]
        self._ends = [e for _, e in self.intervals]
        cum = [0]
        for s, e in self.intervals:
            cum.append(cum[-1] + e - s + 1)
        self._cum = cum
        # non-gap columns strictly before each interval
        self._free = [s - 1 - c for s, c in zip(self._starts, cum)]

    @property
    def length(self) -> int:
        """Number of characters of the original string."""
        return self.n - self._cum[-1]

    def is_gap(self, q: int) -> bool:
        k = bisect.bisect_right(self._starts, q)
        return k > 0 and q <= self._ends[k - 1]

    def to_original(self, q: int) -> int:
        if not 1 <= q <= self.n:
            raise GapPositionError(f"column {q} outside 1..{self.n}")
        k = bisect.bisect_right(self._starts, q)
        if k > 0 and q <= self._ends[k - 1]:
            raise GapPositionError(f"column {q} is a gap")
        return q - self._cum[k]

    def to_transformed(self, p: int) -> int:
        if not 1 <= p <= self.length:
            raise IndexError(f"position {p} outside 1..{self.length}")
        return p + self._cum[bisect.bisect_left(self._free, p)]

    def next_free(self, q: int) -> int:
        """q itself when it holds a character, else the first column after its gap."""
        k = bisect.bisect_right(self._starts, q)
        if k > 0 and q <= self._ends[k - 1]:
            return self._ends[k - 1] + 1
        return q

    def columns(self) -> np.ndarray:
        """Transformed column of every original position (index p-1)."""
        keep = np.ones(self.n + 1, dtype=bool)
        keep[0] = False
        for s, e in self.intervals:
            keep[s:e + 1] = False
        return np.flatnonzero(keep)

    def __eq__(self, other):
        return isinstance(other, GapMap) and (self.n, self.intervals) == (other.n, other.intervals)

    def __repr__(self):
        return f"GapMap(n={self.n}, intervals={list(self.intervals)})"


@dataclass(frozen=True)
class Region:
    kind: str  # "cs" or "ps"
    index: int  # 1-based region number i
    start: int
    end: int

    @property
    def width(self) -> int:
        return self.end - self.start + 1


@dataclass(frozen=True)
class TransformedAlignment:
    model: AlignmentModel
    n: int
    regions: tuple[Region, ...]
    gaps: tuple[GapMap, ...]

    @property
    def m(self) -> int:
        return self.model.m

    @property
    def strings(self) -> SimilarStrings:
        return self.model.strings

    @cached_property
    def _region_starts(self) -> list[int]:
        return [reg.start for reg in self.regions]

    def region_at(self, q: int) -> Region:
        return self.regions[bisect.bisect_right(self._region_starts, q) - 1]

    def gap_intervals(self, j: int) -> tuple[tuple[int, int], ...]:
        return self.gaps[j - 1].intervals

    def char(self, j: int, q: int) -> str | None:
        """S~^j[q], or None for an empty cell."""
        g = self.gaps[j - 1]
        if g.is_gap(q):
            return None
        return self.strings[j][g.to_original(q) - 1]

    def row(self, j: int, gap: str = "-") -> str:
        return "".join(c if c is not None else gap for c in (self.char(j, q) for q in range(1, self.n + 1)))

    def to_original(self, j: int, q: int) -> int:
        return self.gaps[j - 1].to_original(q)

    def to_transformed(self, j: int, p: int) -> int:
        return self.gaps[j - 1].to_transformed(p)


def transform(model: AlignmentModel) -> TransformedAlignment:
    """Lay the model out as columns with every ps-region right-justified."""
    m, r = model.m, model.r
    regions = []
    gaps: list[list[tuple[int, int]]] = [[] for _ in range(m)]
    col = 1
    for i in range(1, r + 2):
        width = len(model.alpha_diamond[i - 1])
        if width:
            regions.append(Region("cs", i, col, col + width - 1))
            col += width
        if i <= r:
            lens = [len(model.ps_content(j, i)) for j in range(1, m + 1)]
            width = max(lens)
            if width:
                regions.append(Region("ps", i, col, col + width - 1))
                for j, ln in enumerate(lens):
                    if ln < width:
                        gaps[j].append((col, col + width - ln - 1))
                col += width
    n = col - 1
    return TransformedAlignment(model, n, tuple(regions), tuple(GapMap(g, n) for g in gaps))
