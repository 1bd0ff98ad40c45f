"""Generalized suffix array construction by prefix doubling (numpy)."""
from __future__ import annotations

import numpy as np

from .errors import ModelViolationError


def encode(strings, alphabet: str) -> tuple[np.ndarray, np.ndarray]:
    """Symbol ranks of the concatenated strings and, per position, its string's end offset."""
    lut = np.zeros(256, dtype=np.int64)
    for r, ch in enumerate(alphabet):
        lut[ord(ch)] = r
    codes = lut[np.frombuffer("".join(strings).encode("latin-1"), dtype=np.uint8)]
    lens = [len(s) for s in strings]
    ends = np.repeat(np.cumsum(lens), lens)
    return codes, ends


def doubling_order(codes: np.ndarray, ends: np.ndarray, groups: np.ndarray | None = None) -> np.ndarray:
    """Order the suffix starts of several strings laid end to end.

    A suffix stops at its own string's end. Without ``groups`` the result is
    the generalized suffix array, identical texts in arbitrary order. With
    ``groups`` doubling stops as soon as every class of equal-prefix suffixes
    carries a single label, which is all that collapsing a-suffixes needs;
    identical texts with different labels raise ``ModelViolationError``.
    """
    n = len(codes)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rank = np.asarray(codes, dtype=np.int64)
    order = np.argsort(rank, kind="stable")
    distinct = len(np.unique(rank))
    idx = np.arange(n, dtype=np.int64)
    k = 1
    while True:
        sr = rank[order]
        tied = sr[1:] == sr[:-1]
        if not tied.any():
            break
        if groups is not None:
            g = groups[order]
            if not (tied & (g[1:] != g[:-1])).any():
                break
        nxt = idx + k
        ok = nxt < ends
        second = np.full(n, -1, dtype=np.int64)
        second[ok] = rank[nxt[ok]]
        key = rank * (n + 2) + (second + 1)
        order = np.argsort(key, kind="stable")
        sk = key[order]
        bumps = np.empty(n, dtype=np.int64)
        bumps[0] = 0
        np.cumsum(sk[1:] != sk[:-1], out=bumps[1:])
        rank = np.empty(n, dtype=np.int64)
        rank[order] = bumps
        now = int(bumps[-1]) + 1
        if now == distinct:
            # classes are stable from here on: remaining ties are identical texts
            if groups is not None:
                g = groups[order]
                tied = sk[1:] == sk[:-1]
                if (tied & (g[1:] != g[:-1])).any():
                    raise ModelViolationError("identical suffixes belong to different a-suffixes")
            break
        distinct = now
        k *= 2
    return order


def naive_order(strings, alphabet: str) -> list[tuple[int, int]]:
    """All (string id, 1-based position) pairs sorted by suffix text; ties by string id."""
    rank = {ch: chr(r) for r, ch in enumerate(alphabet)}
    keyed = ["".join(rank[c] for c in s) for s in strings]
    pairs = [(j, p) for j, s in enumerate(strings, 1) for p in range(1, len(s) + 1)]
    pairs.sort(key=lambda jp: (keyed[jp[0] - 1][jp[1] - 1:], jp[0]))
    return pairs
