"""Brute-force ground truth for tests and the ``validate`` command.

Nothing here reads the compressed structures to produce an answer.
``naive_locate`` scans the strings and ``brute_lf`` steps member suffixes
one character to the left. ``validate`` compares every index structure with
values recomputed from the strings and the entry table.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from .alignment import SENTINELS, GapMap, Segmentation, SimilarStrings, ids_of, segment
from .errors import FMAError, LemmaViolationError, SegmentationError, UndefinedPairError
from .fma import FMIndex, Occurrence
from .ingest import Variant, VariantSet, from_variants
from .suffix_array import naive_order


def _texts(strings) -> tuple[str, ...]:
    return strings.strings if isinstance(strings, SimilarStrings) else tuple(strings)


def naive_locate(strings, pattern: str) -> list[Occurrence]:
    out = []
    for j, s in enumerate(_texts(strings), 1):
        k = s.find(pattern)
        while k >= 0:
            out.append(Occurrence(j, k + 1))
            k = s.find(pattern, k + 1)
    return out


def naive_count(strings, pattern: str) -> int:
    return len(naive_locate(strings, pattern))


@dataclass
class EntryTable:
    """SAA entries as plain (string mask, transformed column) pairs."""

    strings: tuple[str, ...]
    gaps: tuple[GapMap, ...]
    strs: list[int]
    pos: list[int]
    where: dict[tuple[int, int], int] = field(init=False, repr=False)

    def __post_init__(self):
        self.where = {}
        for e, (mk, q) in enumerate(zip(self.strs, self.pos), 1):
            for j in ids_of(mk):
                self.where[(j, q)] = e

    @classmethod
    def of_saa(cls, idx, ta) -> "EntryTable":
        return cls(ta.strings.strings, ta.gaps, list(idx.strs), [int(q) for q in idx.pos])

    @classmethod
    def of_index(cls, fm: FMIndex, strings) -> "EntryTable":
        """Entries recovered through LF walks; raises if members disagree on the column."""
        strs, pos = [], []
        for i in range(1, fm.entries + 1):
            ids, orig = fm.resolve_entry(i)
            cols = {fm.gaps[j - 1].to_transformed(p) for j, p in orig.items()}
            if len(cols) != 1:
                raise FMAError(f"entry {i} members start at different columns {sorted(cols)}")
            strs.append(sum(1 << (j - 1) for j in ids))
            pos.append(cols.pop())
        return cls(_texts(strings), fm.gaps, strs, pos)

    def __len__(self) -> int:
        return len(self.strs)

    def members(self, i: int) -> list[tuple[int, int]]:
        """(string id, original position) of every suffix in entry i."""
        q = self.pos[i - 1]
        return [(j, self.gaps[j - 1].to_original(q)) for j in ids_of(self.strs[i - 1])]

    def entry_at(self, j: int, p: int) -> int:
        return self.where[(j, self.gaps[j - 1].to_transformed(p))]

    def preceding(self, j: int, p: int) -> tuple[str, int]:
        """Character before suffix (j, p) and the start of the suffix it begins, cyclically."""
        s = self.strings[j - 1]
        return (s[-1], len(s)) if p == 1 else (s[p - 2], p - 1)

    def l_column(self, i: int) -> dict[str, int]:
        out: dict[str, int] = {}
        for j, p in self.members(i):
            ch = self.preceding(j, p)[0]
            out[ch] = out.get(ch, 0) | (1 << (j - 1))
        return out


def brute_lf(table: EntryTable, sym: str, i: int) -> int:
    targets = set()
    for j, p in table.members(i):
        ch, back = table.preceding(j, p)
        if ch == sym:
            targets.add(table.entry_at(j, back))
    if not targets:
        raise UndefinedPairError(f"({sym!r}, {i}) is not an L pair")
    if len(targets) > 1:
        raise LemmaViolationError(f"({sym!r}, {i}) reaches entries {sorted(targets)}")
    return targets.pop()


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    checks: list[Check]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def lines(self) -> list[str]:
        return [f"{'PASS' if c.ok else 'FAIL'}\t{c.name}" + (f"\t{c.detail}" if c.detail else "")
                for c in self.checks]

    def __str__(self) -> str:
        return "\n".join(self.lines())


CHECKS = ("entry_table", "suffix_conservation", "sorted_order", "f_column", "l_column",
          "lf_single_target", "shared_target_single_l", "mm_bits", "counted_bits", "c_array", "occ_consistency",
          "sampling_completeness")


def validate(fm: FMIndex, strings, order_check_limit: int = 20_000_000) -> Report:
    """Recompute every structure of ``fm`` from ``strings`` and compare.

    The sorted-order check materialises every suffix and is skipped when the
    suffixes would hold more than ``order_check_limit`` characters in total.
    """
    texts = _texts(strings)
    checks: list[Check] = []
    fail = {}

    def record(name: str, problems: list[str]) -> None:
        checks.append(Check(name, not problems, problems[0] if problems else ""))
        fail[name] = bool(problems)

    try:
        table = EntryTable.of_saa(fm.saa, fm.alignment) if fm.saa is not None else EntryTable.of_index(fm, texts)
        problems = []
        if fm.saa is not None:
            for i in range(1, fm.entries + 1):
                ids, orig = fm.resolve_entry(i)
                if [(j, orig[j]) for j in ids] != table.members(i):
                    problems.append(f"entry {i} resolves to {orig}, expected {table.members(i)}")
                    break
        record("entry_table", problems)
    except (FMAError, KeyError, IndexError) as exc:
        record("entry_table", [f"entries cannot be resolved: {exc}"])
        for name in CHECKS[1:-1]:
            record(name, ["not evaluated: entry table unavailable"])
        record("sampling_completeness", _sampling_problems(fm, None))
        return Report(checks)

    E = len(table)
    if E != fm.entries:
        record("suffix_conservation", [f"{E} entries in table, index reports {fm.entries}"])
    else:
        seen: dict[tuple[int, int], int] = {}
        problems = []
        for i in range(1, E + 1):
            for jp in table.members(i):
                if jp in seen:
                    problems.append(f"suffix {jp} in entries {seen[jp]} and {i}")
                seen[jp] = i
        expected = sum(len(s) for s in texts)
        if len(seen) != expected:
            problems.append(f"{len(seen)} suffixes represented, strings have {expected}")
        record("suffix_conservation", problems)

    if sum(len(s) * (len(s) + 1) // 2 for s in texts) <= order_check_limit and not fail["suffix_conservation"]:
        problems = []
        prev = 0
        for j, p in naive_order(texts, fm.alphabet):
            e = table.entry_at(j, p)
            if e != prev and e != prev + 1:
                problems.append(f"suffix ({j},{p}) in entry {e} after entry {prev}")
                break
            prev = e
        if not problems and prev != E:
            problems.append("sorted suffixes do not cover every entry")
        record("sorted_order", problems)
    else:
        checks.append(Check("sorted_order", not fail["suffix_conservation"], "skipped: text too long"))

    problems = []
    for i in range(1, E + 1):
        firsts = {texts[j - 1][p - 1] for j, p in table.members(i)}
        if firsts != {fm.f(i)}:
            problems.append(f"F[{i}] is {fm.f(i)!r}, suffixes start with {sorted(firsts)}")
            break
    record("f_column", problems)

    brute_l = [table.l_column(i) for i in range(1, E + 1)]
    problems = []
    for i in range(1, E + 1):
        want = brute_l[i - 1]
        if sorted(fm.l_symbols(i), key=fm.alphabet.index) != sorted(want, key=fm.alphabet.index):
            problems.append(f"L[{i}] is {fm.l_symbols(i)}, expected {sorted(want)}")
            break
        if len(want) > 1:
            got = {fm.alphabet[r]: mk for r, mk in fm.partitions.get(i, {}).items()}
            if got != want:
                problems.append(f"L partition of entry {i} is {got}, expected {want}")
                break
    record("l_column", problems)

    targets: dict[tuple[str, int], int] = {}
    problems = []
    for i in range(1, E + 1):
        for sym in brute_l[i - 1]:
            try:
                targets[(sym, i)] = brute_lf(table, sym, i)
            except LemmaViolationError as exc:
                problems.append(str(exc))
    record("lf_single_target", problems)

    by_target: dict[int, list[tuple[str, int]]] = {}
    for pair, t in targets.items():
        by_target.setdefault(t, []).append(pair)
    shared = {pair for pairs in by_target.values() if len(pairs) > 1 for pair in pairs}
    record("shared_target_single_l",
           [f"({s!r},{i}) is (m:1) but L[{i}] has {len(brute_l[i - 1])} symbols"
            for s, i in sorted(shared, key=lambda x: x[1]) if len(brute_l[i - 1]) != 1][:1])

    smallest = {min(pairs, key=lambda x: x[1]) for pairs in by_target.values()}
    mm_problems, cnt_problems = [], []
    for r, sym in enumerate(fm.alphabet):
        for i in range(1, E + 1):
            if fm.mm[r][i - 1] != ((sym, i) in shared) and not mm_problems:
                mm_problems.append(f"B_{sym}[{i}] should be {int((sym, i) in shared)}")
            if fm.counted[r][i - 1] != ((sym, i) in smallest) and not cnt_problems:
                cnt_problems.append(f"counted bit ({sym!r},{i}) should be {int((sym, i) in smallest)}")
    record("mm_bits", mm_problems)
    record("counted_bits", cnt_problems)

    want_c = [0]
    for sym in fm.alphabet:
        want_c.append(want_c[-1] + sum(1 for i in range(1, E + 1) if fm.f(i) == sym))
    record("c_array", [] if want_c == fm.C else [f"C is {fm.C}, expected {want_c}"])

    problems = []
    for (sym, i), t in sorted(targets.items(), key=lambda x: (x[0][1], x[0][0])):
        try:
            got = fm.lf(sym, i)
        except UndefinedPairError:
            got = None
        if got != t:
            problems.append(f"C+occ gives LF({sym!r},{i}) = {got}, brute force gives {t}")
            break
    record("occ_consistency", problems)

    record("sampling_completeness", _sampling_problems(fm, table, brute_l, shared))
    return Report(checks)


def _sampling_problems(fm: FMIndex, table: EntryTable | None, brute_l=None, shared=()) -> list[str]:
    E = fm.entries
    problems = []
    # irregular entries according to the index's own bits
    for i in range(1, E + 1):
        multi = len(fm.l_symbols(i)) > 1
        has_b = any(bv[i - 1] for bv in fm.mm)
        if (multi or has_b) and not fm.marked[i - 1]:
            problems.append(f"irregular entry {i} is not sampled")
            return problems
    if fm.marked.ones != len(fm.sample_pos) or len(fm.sample_pos) != len(fm.sample_strs):
        return [f"{fm.marked.ones} marked entries but {len(fm.sample_pos)} samples stored"]
    if table is None:
        return problems

    k = 0
    for i in range(1, E + 1):
        q = table.pos[i - 1]
        irregular = len(brute_l[i - 1]) > 1 or any((s, i) in shared for s in brute_l[i - 1])
        needed = irregular or q % fm.d == 0
        if needed and not fm.marked[i - 1]:
            return [f"entry {i} (column {q}) must be sampled"]
        if fm.marked[i - 1]:
            if (fm.sample_strs[k], fm.sample_pos[k]) != (table.strs[i - 1], q):
                return [f"sample of entry {i} holds {(fm.sample_strs[k], fm.sample_pos[k])}"]
            k += 1

    for j in range(1, fm.m + 1):
        g = fm.gaps[j - 1]
        cols, ents = fm.isa[j - 1]
        have = dict(zip(cols, ents))
        for q in range(fm.d, fm.n + 1, fm.d):
            if g.next_free(q) not in have:
                return [f"string {j} lacks an inverse sample at or after column {q}"]
        for q, e in have.items():
            if table.where.get((j, q)) != e:
                return [f"inverse sample ({j}, column {q}) points to entry {e}"]
    return problems


# random instances ---------------------------------------------------------

DNA = "acgt"


@dataclass(frozen=True)
class Instance:
    variants: VariantSet
    strings: SimilarStrings
    segmentation: Segmentation


def random_variants(rng: random.Random, ref: str, p_sub=0.02, p_ins=0.01, p_del=0.01,
                    margin: int = 6, alphabet: str = DNA) -> tuple[Variant, ...]:
    """Independent per-position edits; overlapping draws are skipped."""
    out: list[Variant] = []
    last_end = 0
    for p in range(margin + 1, len(ref) + 1):
        if p <= last_end:
            continue
        x = rng.random()
        if x < p_sub:
            alt = rng.choice([c for c in alphabet if c != ref[p - 1]])
            v = Variant(p, ref[p - 1], alt)
        elif x < p_sub + p_ins:
            ins = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 3)))
            v = Variant(p, ref[p - 1], ref[p - 1] + ins)
        elif x < p_sub + p_ins + p_del:
            k = min(rng.randint(1, 3), len(ref) - p + 1)
            v = Variant(p, ref[p - 1:p - 1 + k], "")
        else:
            continue
        out.append(v)
        last_end = v.end
    return tuple(out)


def random_instance(rng: random.Random, max_len: int = 200, max_m: int = 8,
                    rates: tuple[float, float, float] = (0.02, 0.01, 0.01),
                    alphabet: str = DNA) -> Instance:
    """A reference with m mutated copies whose segmentation follows from the edits.

    Draws that admit no valid segmentation (the leading common region has no
    unique suffix) are rejected and redrawn.
    """
    while True:
        n = rng.randint(1, max_len)
        ref = "".join(rng.choice(alphabet) for _ in range(n))
        m = rng.randint(1, max_m)
        samples = tuple((f"s{k + 1}", random_variants(rng, ref, *rates, alphabet=alphabet))
                        for k in range(m))
        vs = VariantSet(ref, samples)
        strings, seg = from_variants(vs)
        try:
            segment(strings, seg)
        except SegmentationError:
            continue
        return Instance(vs, strings, seg)


def random_patterns(rng: random.Random, strings, k: int = 20, max_len: int = 12,
                    alphabet: str = DNA) -> list[str]:
    """Half cut from the strings (sentinels excluded), half drawn at random."""
    texts = [s.strip("".join(SENTINELS)) for s in _texts(strings)]
    out = []
    for t in range(k):
        length = rng.randint(1, max_len)
        src = rng.choice(texts)
        if t % 2 == 0 and len(src) >= 1:
            length = min(length, len(src))
            a = rng.randint(0, len(src) - length)
            out.append(src[a:a + length])
        else:
            out.append("".join(rng.choice(alphabet) for _ in range(length)))
    return out


def population_variants(rng: random.Random, ref: str, m: int, rate: float = 0.001,
                        kinds: tuple[float, float, float] = (0.8, 0.1, 0.1),
                        margin: int = 6, alphabet: str = DNA) -> tuple[tuple[Variant, ...], ...]:
    """Variants shared across m samples under a neutral site-frequency spectrum.

    The number of sites carried by exactly k samples is Poisson(theta / k) with
    theta = rate * len(ref), so each sample differs from the reference at about
    ``rate`` of its positions. Carriers of a site get the same allele; sites never
    overlap, so every sample's variant list is valid.
    """
    theta = rate * len(ref)
    taken = bytearray(len(ref) + 2)
    per_sample: list[list[Variant]] = [[] for _ in range(m)]
    sub, ins, _ = kinds
    for k in range(1, max(m, 2)):
        for _ in range(_poisson(rng, theta / k)):
            p = rng.randint(margin + 1, len(ref)) if len(ref) > margin else 0
            if not p:
                continue
            x = rng.random()
            if x < sub:
                v = Variant(p, ref[p - 1], rng.choice([c for c in alphabet if c != ref[p - 1]]))
            elif x < sub + ins:
                v = Variant(p, ref[p - 1], ref[p - 1] + "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 3))))
            else:
                v = Variant(p, ref[p - 1:min(len(ref), p + rng.randint(0, 2))], "")
            if any(taken[v.pos:v.end + 1]):
                continue
            taken[v.pos:v.end + 1] = b"\x01" * (v.end - v.pos + 1)
            for s in rng.sample(range(m), min(k, m)):
                per_sample[s].append(v)
    return tuple(tuple(sorted(vs, key=lambda v: v.pos)) for vs in per_sample)


def _poisson(rng: random.Random, lam: float) -> int:
    # Knuth for small means, normal approximation for large ones
    if lam > 50:
        return max(0, round(rng.gauss(lam, lam ** 0.5)))
    limit, k, prod = math.exp(-lam), 0, rng.random()
    while prod > limit:
        k += 1
        prod *= rng.random()
    return k
