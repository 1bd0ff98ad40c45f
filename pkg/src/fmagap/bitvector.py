"""Rank-capable bit vectors.

``RankBitVector`` packs bits into 64-bit words with one cumulative count per
512-bit superblock; ``PrefixRank`` keeps a full prefix-sum array and serves as
the reference the packed form is tested against. Both answer ``rank1(i)`` as
the number of set bits among positions ``[0, i)``.
"""
from __future__ import annotations

import numpy as np

WORD = 64
WORDS_PER_BLOCK = 8


class RankBitVector:
    def __init__(self, bits):
        bits = np.asarray(bits, dtype=bool)
        self.size = len(bits)
        packed = np.packbits(bits, bitorder="little")
        pad = (-len(packed)) % 8
        if pad:
            packed = np.concatenate([packed, np.zeros(pad, dtype=np.uint8)])
        self._init_words(packed.view("<u8").copy())

    @classmethod
    def from_words(cls, words: np.ndarray, size: int) -> "RankBitVector":
        self = cls.__new__(cls)
        self.size = size
        self._init_words(np.asarray(words, dtype="<u8"))
        return self

    def _init_words(self, words: np.ndarray) -> None:
        self.words = words
        self._w = [int(x) for x in words]
        counts = [x.bit_count() for x in self._w]
        blocks = [0]
        for b in range(0, len(counts), WORDS_PER_BLOCK):
            blocks.append(blocks[-1] + sum(counts[b:b + WORDS_PER_BLOCK]))
        self._blocks = blocks
        self.ones = blocks[-1]

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, i: int) -> bool:
        return bool(self._w[i >> 6] >> (i & 63) & 1)

    def rank1(self, i: int) -> int:
        if i <= 0:
            return 0
        if i >= self.size:
            return self.ones
        w, b = divmod(i, WORD)
        blk = w // WORDS_PER_BLOCK
        r = self._blocks[blk]
        for x in self._w[blk * WORDS_PER_BLOCK:w]:
            r += x.bit_count()
        if b:
            r += (self._w[w] & ((1 << b) - 1)).bit_count()
        return r

    def select1(self, k: int) -> int:
        """Position of the k-th set bit (k >= 1)."""
        if not 1 <= k <= self.ones:
            raise IndexError(k)
        lo, hi = 0, len(self._blocks) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._blocks[mid] < k:
                lo = mid
            else:
                hi = mid
        need = k - self._blocks[lo]
        w = lo * WORDS_PER_BLOCK
        while True:
            c = self._w[w].bit_count()
            if c >= need:
                break
            need -= c
            w += 1
        x = self._w[w]
        for _ in range(need - 1):
            x &= x - 1
        return w * WORD + ((x & -x).bit_length() - 1)

    def ones_between(self, lo: int, hi: int) -> list[int]:
        """Set positions p with lo <= p < hi."""
        a, b = self.rank1(lo), self.rank1(hi)
        return [self.select1(k) for k in range(a + 1, b + 1)]

    def to_numpy(self) -> np.ndarray:
        raw = np.frombuffer(self.words.astype("<u8").tobytes(), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.size].astype(bool)

    def nbytes(self) -> int:
        return 8 + 8 * len(self.words)

    def __eq__(self, other):
        return isinstance(other, RankBitVector) and self.size == other.size and self._w == other._w


class PrefixRank:
    """Plain prefix sums; same interface as ``RankBitVector``."""

    def __init__(self, bits):
        self.bits = np.asarray(bits, dtype=bool)
        self.size = len(self.bits)
        self._prefix = np.concatenate([[0], np.cumsum(self.bits, dtype=np.int64)])
        self.ones = int(self._prefix[-1])

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, i: int) -> bool:
        return bool(self.bits[i])

    def rank1(self, i: int) -> int:
        return int(self._prefix[min(max(i, 0), self.size)])

    def select1(self, k: int) -> int:
        if not 1 <= k <= self.ones:
            raise IndexError(k)
        return int(np.searchsorted(self._prefix, k)) - 1

    def ones_between(self, lo: int, hi: int) -> list[int]:
        return [int(p) for p in np.flatnonzero(self.bits[max(lo, 0):hi]) + max(lo, 0)]

    def to_numpy(self) -> np.ndarray:
        return self.bits.copy()
