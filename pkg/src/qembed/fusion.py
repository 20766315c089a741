"""Hybrid retrieval: candidate union, score interpolation, RRF, the
alpha-oracle diagnostic, dual-channel combination, and guard-railed
cross-encoder re-ranking."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyCandidates, Undefined
from .evalkit import spearman

DEFAULT_ALPHA_GRID = (0.0, 0.1, 0.2, 0.3, 0.5, 0.8, 1.0)


@dataclass
class Candidate:
    bm25_raw: float = 0.0
    embed_raw: float = 0.0
    bm25_norm: float = 0.0
    embed_norm: float = 0.0
    sources: frozenset = frozenset()


@dataclass
class CandidateSet:
    qid: str
    entries: dict  # unit_id -> Candidate


@dataclass(frozen=True)
class FusionConfig:
    alpha: float = 0.7
    dynamic: bool = False
    alpha_grid: tuple = DEFAULT_ALPHA_GRID
    rrf_k: int = 60
    top_k: int = 10
    ce_std_floor: float = 1e-6
    dual: str = "off"  # off | dual_score | rrf

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if list(self.alpha_grid) != sorted(self.alpha_grid) or any(not 0 <= a <= 1 for a in self.alpha_grid):
            raise ValueError("alpha_grid must be sorted values in [0, 1]")


def _minmax(values: dict) -> dict:
    lo, hi = min(values.values()), max(values.values())
    if hi == lo:
        return {k: 0.5 for k in values}
    return {k: (v - lo) / (hi - lo) for k, v in values.items()}


def candidate_union(bm25_list, embed_list, qid: str = "") -> CandidateSet:
    """Union of per-source top-k lists. A candidate missing from one source
    takes that source's minimum raw score over the union (so it min-max
    normalizes to 0); per-source scores are then min-max normalized."""
    bm25 = dict(bm25_list)
    emb = dict(embed_list)
    ids = sorted(set(bm25) | set(emb))
    if not ids:
        raise EmptyCandidates("both candidate lists are empty")
    bm25_fill = min(bm25.values()) if bm25 else 0.0
    emb_fill = min(emb.values()) if emb else 0.0
    raw_b = {u: bm25.get(u, bm25_fill) for u in ids}
    raw_e = {u: emb.get(u, emb_fill) for u in ids}
    norm_b = _minmax(raw_b)
    norm_e = _minmax(raw_e)
    entries = {}
    for u in ids:
        sources = set()
        if u in bm25:
            sources.add("bm25")
        if u in emb:
            sources.add("embed")
        entries[u] = Candidate(raw_b[u], raw_e[u], norm_b[u], norm_e[u], frozenset(sources))
    return CandidateSet(qid, entries)


def interpolate(cands: CandidateSet, alpha: float) -> list:
    """fused = alpha * embed_norm + (1 - alpha) * bm25_norm; descending,
    ties by ascending id."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    fused = {u: alpha * c.embed_norm + (1.0 - alpha) * c.bm25_norm for u, c in cands.entries.items()}
    return sorted(fused.items(), key=lambda x: (-x[1], x[0]))


def dynamic_alpha(cands: CandidateSet, base_alpha: float, eps: float = 1e-12):
    """Gate alpha by BM25 confidence: the relative margin of the top-2 raw
    BM25 scores closes the embedding contribution when BM25 is confident."""
    raws = sorted((c.bm25_raw for c in cands.entries.values()), reverse=True)
    if len(raws) < 2:
        margin = 1.0
    else:
        s1, s2 = raws[0], raws[1]
        margin = (s1 - s2) / max(s1, eps)
    alpha_used = base_alpha * (1.0 - min(max(margin, 0.0), 1.0))
    return alpha_used, interpolate(cands, alpha_used)


def rrf(ranked_lists, k: int = 60) -> list:
    """Reciprocal rank fusion with 1-based ranks; absent items contribute
    nothing from that list."""
    if not ranked_lists:
        raise ValueError("rrf needs at least one list")
    scores = {}
    for lst in ranked_lists:
        for rank, item in enumerate(lst, start=1):
            uid = item[0] if isinstance(item, (tuple, list)) else item
            scores[uid] = scores.get(uid, 0.0) + 1.0 / (k + rank)
    return sorted(scores.items(), key=lambda x: (-x[1], x[0]))


def _reciprocal_rank(ranking, relevant_id, cutoff: int = 10) -> float:
    for i, (uid, _) in enumerate(ranking[:cutoff], start=1):
        if uid == relevant_id:
            return 1.0 / i
    return 0.0


def alpha_oracle(cand_sets: dict, relevant: dict, grid=DEFAULT_ALPHA_GRID, metric=_reciprocal_rank) -> dict:
    """Per-query best grid alpha (ties -> smallest alpha) under ``metric``;
    the aggregate is the mean of per-query maxima, an upper bound for any
    fixed grid alpha."""
    per_query = {}
    for qid, cands in cand_sets.items():
        best_alpha, best_val = None, -1.0
        for a in grid:
            val = metric(interpolate(cands, a), relevant[qid])
            if val > best_val:
                best_alpha, best_val = a, val
        per_query[qid] = {"best_alpha": best_alpha, "best_metric": best_val}
    agg = float(np.mean([v["best_metric"] for v in per_query.values()])) if per_query else 0.0
    return {"per_query": per_query, "aggregate": agg}


def read_ce_scores(path) -> dict:
    """Cross-encoder scores from TSV rows: qid, unit_id, score."""
    scores = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            qid, uid, s = line.split("\t")
            scores[(qid, uid)] = float(s)
    return scores


def ce_rerank(ranking, ce_scores: dict, qid: str, top_k: int = 10, std_floor: float = 1e-6):
    """Re-rank the top-k by cross-encoder score unless a guard fires.

    Guards (each returns the input ranking unchanged, with a reason):
    coverage below 80% of the top-k, near-constant CE scores, or negative
    Spearman correlation against the base scores.
    """
    head = ranking[:top_k]
    tail = ranking[top_k:]
    covered = [(uid, base) for uid, base in head if (qid, uid) in ce_scores]
    if len(head) == 0 or len(covered) < 0.8 * len(head):
        return list(ranking), False, "missing_scores"
    ce_vals = [ce_scores[(qid, uid)] for uid, _ in covered]
    if float(np.std(ce_vals)) <= std_floor:
        return list(ranking), False, "degenerate"
    base_vals = [base for _, base in covered]
    try:
        rho = spearman(ce_vals, base_vals)
    except Undefined:
        rho = 0.0
    if rho < 0:
        return list(ranking), False, "negative_correlation"
    fill = min(ce_vals)
    reranked = sorted(head, key=lambda x: (-ce_scores.get((qid, x[0]), fill), x[0]))
    reranked = [(uid, ce_scores.get((qid, uid), fill)) for uid, _ in reranked]
    return reranked + tail, True, "applied"


def dual_channel(current_list, amp_list, mode: str = "dual_score", rrf_k: int = 60) -> list:
    """Combine current- and amp-channel rankings: mean of per-channel
    min-max normalized scores, or RRF over the two lists."""
    if mode == "rrf":
        return rrf([current_list, amp_list], k=rrf_k)
    if mode != "dual_score":
        raise ValueError("mode must be 'dual_score' or 'rrf'")
    cur = dict(current_list)
    amp = dict(amp_list)
    ids = sorted(set(cur) | set(amp))
    cur_fill = min(cur.values()) if cur else 0.0
    amp_fill = min(amp.values()) if amp else 0.0
    ncur = _minmax({u: cur.get(u, cur_fill) for u in ids})
    namp = _minmax({u: amp.get(u, amp_fill) for u in ids})
    fused = {u: 0.5 * (ncur[u] + namp[u]) for u in ids}
    return sorted(fused.items(), key=lambda x: (-x[1], x[0]))


def run_record(qid, cands: CandidateSet, ranking, alpha_used, ce_applied=None, ce_reason=None) -> str:
    """One JSON Lines record for a per-query fusion run."""
    return json.dumps(
        {
            "qid": qid,
            "alpha_used": alpha_used,
            "ce_applied": ce_applied,
            "ce_reason": ce_reason,
            "candidates": {
                u: {
                    "bm25_raw": c.bm25_raw,
                    "embed_raw": c.embed_raw,
                    "bm25_norm": c.bm25_norm,
                    "embed_norm": c.embed_norm,
                    "sources": sorted(c.sources),
                }
                for u, c in cands.entries.items()
            },
            "ranking": [[u, s] for u, s in ranking],
        },
        sort_keys=True,
    )
