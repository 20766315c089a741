"""Okapi BM25 inverted index over documents or sub-chunks."""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass, field

from .errors import EmptyCorpus

_MAGIC = b"QEMBBM25"


@dataclass
class Bm25Index:
    postings: dict  # term -> list of (unit_id, term frequency), sorted by id
    lengths: dict  # unit_id -> token count
    avg_length: float
    N: int
    k1: float = 1.2
    b: float = 0.75

    def idf(self, term: str) -> float:
        df = len(self.postings.get(term, ()))
        return math.log(1.0 + (self.N - df + 0.5) / (df + 0.5))

    def save(self, path):
        header = json.dumps({"N": self.N, "k1": self.k1, "b": self.b, "avg_length": self.avg_length}).encode()
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<i", len(header)))
            fh.write(header)
            body = json.dumps({"postings": {t: p for t, p in self.postings.items()}, "lengths": self.lengths},
                              sort_keys=True).encode()
            fh.write(body)

    @classmethod
    def load(cls, path) -> "Bm25Index":
        with open(path, "rb") as fh:
            if fh.read(len(_MAGIC)) != _MAGIC:
                raise ValueError("not a BM25 index file")
            (hlen,) = struct.unpack("<i", fh.read(4))
            header = json.loads(fh.read(hlen))
            body = json.loads(fh.read())
        postings = {t: [(uid, tf) for uid, tf in plist] for t, plist in body["postings"].items()}
        return cls(postings, body["lengths"], header["avg_length"], header["N"], header["k1"], header["b"])


def build(units, k1: float = 1.2, b: float = 0.75) -> Bm25Index:
    """``units`` is a list of (unit_id, token sequence). Postings are kept
    sorted by unit id for stable tie handling."""
    units = list(units)
    if not units:
        raise EmptyCorpus("no units to index")
    postings = {}
    lengths = {}
    for uid, toks in units:
        tokens = list(toks.tokens) if hasattr(toks, "tokens") else list(toks)
        lengths[uid] = len(tokens)
        tf = {}
        for t in tokens:
            tf[t] = tf.get(t, 0) + 1
        for t, c in tf.items():
            postings.setdefault(t, []).append((uid, c))
    for plist in postings.values():
        plist.sort(key=lambda x: x[0])
    avg = sum(lengths.values()) / len(lengths)
    return Bm25Index(postings, lengths, avg, len(units), k1, b)


def score(index: Bm25Index, query, top_k: int = 10) -> list:
    """Okapi BM25 ranking; ties broken by ascending unit id. Units matching
    no query term are omitted (empty query -> empty result)."""
    terms = list(query.tokens) if hasattr(query, "tokens") else list(query)
    acc = {}
    for t in terms:
        plist = index.postings.get(t)
        if not plist:
            continue
        idf = index.idf(t)
        for uid, tf in plist:
            denom = tf + index.k1 * (1.0 - index.b + index.b * index.lengths[uid] / index.avg_length)
            acc[uid] = acc.get(uid, 0.0) + idf * tf * (index.k1 + 1.0) / denom
    ranked = sorted(acc.items(), key=lambda x: (-x[1], x[0]))
    return ranked[:top_k]
