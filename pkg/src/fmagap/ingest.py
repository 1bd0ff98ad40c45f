"""Input formats: explicit alignment segments and reference-plus-variants.

Alignment text format::

    #FMA-ALIGN 1
    ALPHABET acgt
    R 2
    A $cct
    A aac
    A #
    M 4
    D 1 1 ca
    D 1 2 c
    ...

``D <j> <i> .`` stands for an empty non-common substring. Variant files hold
``POS<TAB>REF<TAB>ALT`` lines (1-based reference positions, ``ALT`` of ``.``
for a pure deletion), one file per sample.
"""
from __future__ import annotations

import bisect
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .alignment import BEGIN, END, SENTINELS, Segmentation, SimilarStrings, ordered_alphabet
from .errors import IngestError, ParseError

HEADER = "#FMA-ALIGN 1"
EMPTY = "."


def _lines(source) -> list[str]:
    if isinstance(source, (str, os.PathLike)) and Path(source).exists():
        return Path(source).read_text(encoding="utf-8").splitlines()
    if isinstance(source, str):
        return source.splitlines()
    return [ln.rstrip("\n") for ln in source]


def parse_alignment(source) -> tuple[SimilarStrings, Segmentation]:
    """Read the alignment text format from a path, a string or an iterable of lines."""
    lines = _lines(source)
    it = iter(enumerate(lines, 1))

    def take(tag: str) -> tuple[int, str]:
        try:
            no, line = next(it)
        except StopIteration:
            raise ParseError(f"unexpected end of input, expected {tag!r} record", len(lines) + 1) from None
        head, sep, rest = line.partition(" ")
        if head != tag or (tag not in (HEADER,) and not sep):
            raise ParseError(f"expected {tag!r} record, got {line!r}", no)
        return no, rest

    no, line = next(it, (1, None))
    if line != HEADER:
        raise ParseError(f"missing header {HEADER!r}", no)
    no, declared = take("ALPHABET")
    symbols = declared.replace(" ", "")
    if not symbols or len(set(symbols)) != len(symbols):
        raise ParseError("ALPHABET must list distinct symbols", no)
    allowed = set(symbols) - set(SENTINELS)

    r = _count(*take("R"))
    alpha = []
    for i in range(1, r + 2):
        no, text = take("A")
        if text == "" or text == EMPTY:
            raise ParseError(f"common substring {i} is empty", no)
        if i == 1 and text.startswith(BEGIN):
            text = text[1:]
        if i == r + 1 and text.endswith(END):
            text = text[:-1]
        _check_symbols(text, allowed, no)
        alpha.append(text)
    alpha[0] = BEGIN + alpha[0]
    alpha[-1] = alpha[-1] + END

    no, text = take("M")
    m = _count(no, text)
    if m < 1:
        raise ParseError("M must be at least 1", no)
    delta = []
    for j in range(1, m + 1):
        row = []
        for i in range(1, r + 1):
            no, rest = take("D")
            parts = rest.split(" ", 2)
            if len(parts) != 3:
                raise ParseError("D record needs '<j> <i> <text>'", no)
            try:
                jj, ii = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError("D record indices must be integers", no) from None
            if (jj, ii) != (j, i):
                raise ParseError(f"expected D {j} {i}, got D {jj} {ii}", no)
            text = "" if parts[2] == EMPTY else parts[2]
            _check_symbols(text, allowed, no)
            row.append(text)
        delta.append(tuple(row))
    for no, line in it:
        if line.strip():
            raise ParseError(f"trailing content {line!r}", no)

    seg = Segmentation(tuple(alpha), tuple(delta))
    strings = SimilarStrings(tuple(seg.spell(j) for j in range(1, m + 1)), ordered_alphabet(symbols))
    return strings, seg


def _count(no: int, text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ParseError(f"expected a count, got {text!r}", no) from None
    if value < 0:
        raise ParseError("count must be non-negative", no)
    return value


def _check_symbols(text: str, allowed: set[str], no: int) -> None:
    for ch in text:
        if ch not in allowed:
            raise ParseError(f"symbol {ch!r} is not in the declared alphabet", no)


def format_alignment(strings: SimilarStrings, seg: Segmentation) -> str:
    regular = strings.alphabet[len(SENTINELS):]
    out = [HEADER, f"ALPHABET {regular}", f"R {seg.r}"]
    out += [f"A {a}" for a in seg.alpha]
    out.append(f"M {strings.m}")
    for j, row in enumerate(seg.delta, 1):
        out += [f"D {j} {i} {text or EMPTY}" for i, text in enumerate(row, 1)]
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class Variant:
    pos: int
    ref: str
    alt: str

    @property
    def end(self) -> int:
        return self.pos + len(self.ref) - 1


@dataclass(frozen=True)
class VariantSet:
    reference: str
    samples: tuple[tuple[str, tuple[Variant, ...]], ...]

    def check(self) -> None:
        ref = self.reference
        if not ref:
            raise IngestError("empty reference")
        if any(c in SENTINELS for c in ref):
            raise IngestError("reference contains a sentinel symbol")
        for name, variants in self.samples:
            last_end = 0
            for v in variants:
                where = f"sample {name!r}, position {v.pos}"
                if not v.ref:
                    raise IngestError(f"{where}: empty reference allele")
                if v.pos < 1 or v.end > len(ref):
                    raise IngestError(f"{where}: outside the reference")
                if v.pos <= last_end:
                    raise IngestError(f"{where}: overlaps or precedes the previous variant")
                if ref[v.pos - 1:v.end] != v.ref:
                    raise IngestError(f"{where}: reference allele {v.ref!r} does not match {ref[v.pos - 1:v.end]!r}")
                if any(c in SENTINELS for c in v.alt):
                    raise IngestError(f"{where}: alternate allele contains a sentinel")
                last_end = v.end

    def apply(self, k: int) -> str:
        """Sample k (0-based) spelled out by editing the reference directly."""
        ref = self.reference
        out, cur = [], 0
        for v in self.samples[k][1]:
            out.append(ref[cur:v.pos - 1])
            out.append(v.alt)
            cur = v.end
        out.append(ref[cur:])
        return "".join(out)


def from_variants(vs: VariantSet) -> tuple[SimilarStrings, Segmentation]:
    """Partition the reference into common regions and the union of variant intervals."""
    vs.check()
    ref = vs.reference
    spans = sorted((v.pos, v.end) for _, variants in vs.samples for v in variants)
    merged: list[list[int]] = []
    for a, b in spans:
        if merged and a <= merged[-1][1] + 1:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])

    alpha, prev = [], 0
    for a, b in merged:
        alpha.append(ref[prev:a - 1])
        prev = b
    alpha.append(ref[prev:])
    alpha[0] = BEGIN + alpha[0]
    alpha[-1] = alpha[-1] + END

    starts = [a for a, _ in merged]
    delta = []
    for _, variants in vs.samples:
        by_region: list[list[Variant]] = [[] for _ in merged]
        for v in variants:
            by_region[bisect.bisect_right(starts, v.pos) - 1].append(v)
        row = []
        for (a, b), vv in zip(merged, by_region):
            parts, cur = [], a
            for v in vv:
                parts.append(ref[cur - 1:v.pos - 1])
                parts.append(v.alt)
                cur = v.end + 1
            parts.append(ref[cur - 1:b])
            row.append("".join(parts))
        delta.append(tuple(row))

    seg = Segmentation(tuple(alpha), tuple(delta))
    symbols = set(ref).union(*(set(v.alt) for _, variants in vs.samples for v in variants))
    strings = SimilarStrings(tuple(seg.spell(j) for j in range(1, len(vs.samples) + 1)),
                             ordered_alphabet(symbols))
    return strings, seg


def read_reference(path) -> str:
    """Plain or FASTA text; header lines and whitespace are dropped."""
    seq = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith(">") or line.startswith(";"):
            continue
        seq.append(line.strip())
    return "".join(seq)


def parse_variants(lines: Iterable[str], name: str = "sample") -> tuple[Variant, ...]:
    out = []
    for no, line in enumerate(lines, 1):
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError(f"{name}: expected POS<TAB>REF<TAB>ALT", no)
        try:
            pos = int(fields[0])
        except ValueError:
            raise ParseError(f"{name}: bad position {fields[0]!r}", no) from None
        alt = "" if fields[2] == EMPTY else fields[2]
        out.append(Variant(pos, fields[1], alt))
    return tuple(out)


def read_variant_set(reference_path, variants_dir) -> VariantSet:
    """One sample per file in ``variants_dir``, ordered by file name."""
    files = sorted(p for p in Path(variants_dir).iterdir() if p.is_file())
    if not files:
        raise IngestError(f"no variant files in {variants_dir}")
    samples = []
    for p in files:
        with open(p, encoding="utf-8") as fh:
            samples.append((p.stem, parse_variants(fh, p.name)))
    return VariantSet(read_reference(reference_path), tuple(samples))


def write_variants(variants: Sequence[Variant]) -> str:
    return "".join(f"{v.pos}\t{v.ref}\t{v.alt or EMPTY}\n" for v in variants)
