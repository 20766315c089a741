"""Corpus ingestion and segmentation.

Documents are tokenized into lowercase Unicode word tokens, then split into
logical chunks (the indexing/retrieval units), sub-chunks (the encoding
units), and fixed token windows (one window -> one angle vector).

The tail rule: a trailing partial chunk or sub-chunk is kept only if it is
at least 25% of the nominal size, or if dropping it would leave tokens of
the parent sequence uncovered.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import EmptyText

_TOKEN_RE = re.compile(r"\w+", re.UNICODE)

_TAIL_KEEP_FRACTION = 0.25


@dataclass(frozen=True)
class Document:
    doc_id: str
    text: str
    lang: str = ""

    def __post_init__(self):
        if not self.text:
            raise ValueError("document text must be non-empty")


@dataclass(frozen=True)
class TokenSeq:
    """Tokens plus their character spans into the source text."""

    tokens: tuple
    offsets: tuple  # (start, end) pairs, strictly increasing, non-overlapping

    def __len__(self):
        return len(self.tokens)

    def slice(self, start: int, end: int) -> "TokenSeq":
        return TokenSeq(self.tokens[start:end], self.offsets[start:end])


@dataclass(frozen=True)
class SegmentationConfig:
    chunk_tokens: int = 384
    chunk_overlap: int = 64
    sub_tokens: int = 256
    sub_stride: int = 179
    window_tokens: int = 16
    dense_stride: int = 128
    two_phase_shift: int = 0

    def __post_init__(self):
        if not (0 <= self.chunk_overlap < self.chunk_tokens):
            raise ValueError("require 0 <= chunk_overlap < chunk_tokens")
        if not (0 < self.sub_stride <= self.sub_tokens):
            raise ValueError("require 0 < sub_stride <= sub_tokens")
        if self.two_phase_shift < 0:
            raise ValueError("two_phase_shift must be >= 0")
        if self.window_tokens < 1:
            raise ValueError("window_tokens must be >= 1")

    def to_dict(self) -> dict:
        return {
            "chunk_tokens": self.chunk_tokens,
            "chunk_overlap": self.chunk_overlap,
            "sub_tokens": self.sub_tokens,
            "sub_stride": self.sub_stride,
            "window_tokens": self.window_tokens,
            "dense_stride": self.dense_stride,
            "two_phase_shift": self.two_phase_shift,
        }


@dataclass(frozen=True)
class SubChunk:
    sub_id: str
    doc_id: str
    chunk_id: str
    tokens: TokenSeq
    token_span: tuple  # [start, end) in chunk token indices
    phase_shift: int = 0


@dataclass(frozen=True)
class Window:
    sub_id: str
    window_index: int
    tokens: TokenSeq


def tokenize(text: str) -> TokenSeq:
    """Lowercase Unicode-word tokenization with character offsets.

    Deterministic; punctuation is dropped. Raises EmptyText when no word
    token survives.
    """
    tokens = []
    offsets = []
    for m in _TOKEN_RE.finditer(text):
        tokens.append(m.group(0).lower())
        offsets.append((m.start(), m.end()))
    if not tokens:
        raise EmptyText("no tokens after tokenization")
    return TokenSeq(tuple(tokens), tuple(offsets))


def _tiled_starts(n: int, size: int, step: int) -> list:
    """Starts at multiples of ``step``; trailing partials filtered by the
    25%/coverage tail rule. Always yields at least [0]."""
    starts = []
    covered_to = 0
    start = 0
    while start < n:
        end = min(start + size, n)
        length = end - start
        keep = (
            start == 0
            or length == size
            or length >= _TAIL_KEEP_FRACTION * size
            or end > covered_to  # tail carries otherwise-uncovered tokens
        )
        if keep:
            starts.append(start)
            covered_to = max(covered_to, end)
        start += step
    return starts


def _chunk_starts(n: int, chunk_tokens: int, overlap: int) -> list:
    return _tiled_starts(n, chunk_tokens, chunk_tokens - overlap)


def _sub_starts(length: int, sub_tokens: int, stride: int) -> list:
    return _tiled_starts(length, sub_tokens, stride)


def segment(doc: Document, cfg: SegmentationConfig) -> list:
    """Split a document into sub-chunks across chunks (and a shifted second
    pass when ``two_phase_shift`` > 0)."""
    seq = tokenize(doc.text)
    n = len(seq)
    subs = []
    for ci, cstart in enumerate(_chunk_starts(n, cfg.chunk_tokens, cfg.chunk_overlap)):
        cend = min(cstart + cfg.chunk_tokens, n)
        chunk_id = f"{doc.doc_id}/c{ci}"
        chunk_len = cend - cstart
        passes = [(0, 0)]
        if cfg.two_phase_shift > 0 and cfg.two_phase_shift < chunk_len:
            passes.append((cfg.two_phase_shift, cfg.two_phase_shift))
        for phase, shift in passes:
            for si, sstart in enumerate(_sub_starts(chunk_len - shift, cfg.sub_tokens, cfg.sub_stride)):
                a = shift + sstart
                b = min(a + cfg.sub_tokens, chunk_len)
                suffix = f"p{phase}" if phase else ""
                sub_id = f"{chunk_id}/s{si}{suffix}"
                subs.append(
                    SubChunk(
                        sub_id=sub_id,
                        doc_id=doc.doc_id,
                        chunk_id=chunk_id,
                        tokens=seq.slice(cstart + a, cstart + b),
                        token_span=(a, b),
                        phase_shift=phase,
                    )
                )
    return subs


def windows_of(sub: SubChunk, window_tokens: int) -> list:
    """Contiguous non-overlapping windows; the last one may be shorter."""
    if window_tokens < 1:
        raise ValueError("window_tokens must be >= 1")
    n = len(sub.tokens)
    out = []
    for wi, start in enumerate(range(0, max(n, 1), window_tokens)):
        out.append(Window(sub.sub_id, wi, sub.tokens.slice(start, min(start + window_tokens, n))))
    return out


def read_documents(path) -> list:
    """Read a JSON Lines corpus: {"doc_id":…, "text":…, "lang":…}."""
    docs = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if obj["doc_id"] in seen:
                raise ValueError(f"duplicate doc_id {obj['doc_id']!r}")
            seen.add(obj["doc_id"])
            docs.append(Document(obj["doc_id"], obj["text"], obj.get("lang", "")))
    return docs


def read_queries(path) -> list:
    """Read JSON Lines queries: {"qid":…, "text":…, "relevant_doc":…}."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                obj = json.loads(line)
                out.append((obj["qid"], obj["text"], obj.get("relevant_doc")))
    return out
