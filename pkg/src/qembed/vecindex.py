"""Exact top-k inner-product search over unit-norm embedding matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embed import Embedding
from .errors import ChannelMismatch, MappingError


@dataclass
class VecIndex:
    ids: list
    matrix: np.ndarray  # rows unit norm
    channel: str = "current"
    fingerprint: str = ""

    @classmethod
    def from_embeddings(cls, embeddings, channel: str = None, fingerprint: str = "") -> "VecIndex":
        embeddings = list(embeddings)
        if channel is None:
            channel = embeddings[0].channel if embeddings else "current"
        ids, rows = [], []
        seen = set()
        for e in embeddings:
            if e.channel != channel:
                raise ChannelMismatch(f"record {e.owner_id!r} has channel {e.channel!r}, index is {channel!r}")
            if e.owner_id in seen:
                raise ValueError(f"duplicate id {e.owner_id!r}")
            seen.add(e.owner_id)
            norm = np.linalg.norm(e.vec)
            if abs(norm - 1.0) > 1e-6:
                raise ValueError(f"row {e.owner_id!r} not unit norm ({norm})")
            ids.append(e.owner_id)
            rows.append(np.asarray(e.vec, dtype=float))
        return cls(ids, np.stack(rows) if rows else np.zeros((0, 0)), channel, fingerprint)


def search(index: VecIndex, q, top_k: int = 10) -> list:
    """Exact scan; descending score, ties by ascending id."""
    if isinstance(q, Embedding):
        if q.channel != index.channel:
            raise ChannelMismatch(f"query channel {q.channel!r} vs index {index.channel!r}")
        qv = q.vec
    else:
        qv = np.asarray(q, dtype=float)
    scores = index.matrix @ qv
    order = sorted(range(len(index.ids)), key=lambda i: (-scores[i], index.ids[i]))
    return [(index.ids[i], float(scores[i])) for i in order[:top_k]]


def doc_score_from_subchunks(index: VecIndex, q, doc_of: dict, top_k: int = 10, agg: str = "max") -> list:
    """Document scores from a sub-chunk index; per-doc aggregation is max
    (default) or mean over its sub-chunk scores."""
    hits = search(index, q, top_k=len(index.ids))
    per_doc = {}
    for sub_id, s in hits:
        if sub_id not in doc_of:
            raise MappingError(f"sub-chunk {sub_id!r} has no document mapping")
        per_doc.setdefault(doc_of[sub_id], []).append(s)
    if agg == "max":
        scored = {d: max(v) for d, v in per_doc.items()}
    elif agg == "mean":
        scored = {d: float(np.mean(v)) for d, v in per_doc.items()}
    else:
        raise ValueError("agg must be 'max' or 'mean'")
    ranked = sorted(scored.items(), key=lambda x: (-x[1], x[0]))
    return ranked[:top_k]
