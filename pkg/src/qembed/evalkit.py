"""Retrieval metrics and pairwise-similarity diagnostics.

Single-relevance setting throughout: each query has exactly one relevant
unit, so MRR@10 and MAP@10 coincide and ideal DCG is 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import MissingRanking, Undefined

HIT_KS = (1, 3, 5, 10)


@dataclass(frozen=True)
class QueryJudgment:
    qid: str
    relevant_id: str


@dataclass(frozen=True)
class PairRecord:
    sentence_a: str
    sentence_b: str
    score: float
    regime: str  # sim | neutral | dissim


def _rank_of(ranking, relevant_id) -> int:
    """1-based rank; 0 means absent."""
    for i, item in enumerate(ranking):
        uid = item[0] if isinstance(item, (tuple, list)) else item
        if uid == relevant_id:
            return i + 1
    return 0


def retrieval_metrics(rankings: dict, judgments, k_list=HIT_KS, cutoff: int = 10) -> dict:
    """``rankings`` maps qid -> ranked (id, score) list. Returns aggregate
    hit@K, mrr, ndcg, map plus per-query rows."""
    rows = []
    for j in judgments:
        if j.qid not in rankings:
            raise MissingRanking(f"no ranking for query {j.qid!r}")
        rank = _rank_of(rankings[j.qid], j.relevant_id)
        rr = 1.0 / rank if 0 < rank <= cutoff else 0.0
        ndcg = 1.0 / math.log2(rank + 1) if 0 < rank <= cutoff else 0.0
        rows.append({"qid": j.qid, "rank": rank, "rr": rr, "ndcg": ndcg})
    n = len(rows)
    if n == 0:
        raise MissingRanking("no judgments supplied")
    report = {f"hit@{k}": sum(1 for r in rows if 0 < r["rank"] <= k) / n for k in k_list}
    report[f"mrr@{cutoff}"] = sum(r["rr"] for r in rows) / n
    report[f"ndcg@{cutoff}"] = sum(r["ndcg"] for r in rows) / n
    report[f"map@{cutoff}"] = report[f"mrr@{cutoff}"]  # single relevance
    report["per_query"] = rows
    return report


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size or x.size < 2:
        raise ValueError("pearson needs two equal-length series, len >= 2")
    xd = x - x.mean()
    yd = y - y.mean()
    denom = np.sqrt((xd**2).sum() * (yd**2).sum())
    if denom == 0:
        raise Undefined("zero variance in pearson input")
    return float(np.dot(xd, yd) / denom)


def _average_ranks(x) -> np.ndarray:
    """Fractional ranks, ties get the mean rank (1-based)."""
    x = np.asarray(x, dtype=float)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(x.size)
    i = 0
    while i < x.size:
        j = i
        while j + 1 < x.size and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> float:
    return pearson(_average_ranks(x), _average_ranks(y))


def similarity_histogram(values, bins: int = 20, lo: float = -1.0, hi: float = 1.0) -> list:
    """Uniform-bin histogram as (bin_left, count) rows for CSV/plotting."""
    counts, edges = np.histogram(np.asarray(values, dtype=float), bins=bins, range=(lo, hi))
    return [(float(edges[i]), int(counts[i])) for i in range(bins)]


def pairwise_report(pairs, embedding_of) -> dict:
    """Cosine similarity of each pair's embeddings vs the reference score.

    ``embedding_of`` maps a sentence to its (not necessarily normalized)
    vector. Reference scores live in [0, 1] while cosine lives in [-1, 1];
    MAE deliberately mixes the two scales and is flagged as such.
    """
    pairs = list(pairs)
    if len(pairs) < 2:
        raise ValueError("need at least 2 pairs")
    cos, refs, regimes = [], [], []
    for p in pairs:
        a = np.asarray(embedding_of(p.sentence_a), dtype=float)
        b = np.asarray(embedding_of(p.sentence_b), dtype=float)
        c = float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))
        cos.append(c)
        refs.append(p.score)
        regimes.append(p.regime)
    cos_arr = np.asarray(cos)
    ref_arr = np.asarray(refs)
    report = {
        "pearson": pearson(cos_arr, ref_arr),
        "spearman": spearman(cos_arr, ref_arr),
        "mae": float(np.mean(np.abs(cos_arr - ref_arr))),
        "mean_sim": float(np.mean(cos_arr)),
        "scale_note": "MAE compares cosine in [-1,1] against reference in [0,1]",
        "histogram": similarity_histogram(cos_arr),
        "per_regime": {},
    }
    for regime in sorted(set(regimes)):
        mask = [i for i, r in enumerate(regimes) if r == regime]
        report["per_regime"][regime] = {
            "n": len(mask),
            "mean_sim": float(np.mean(cos_arr[mask])),
            "mean_ref": float(np.mean(ref_arr[mask])),
            "mae": float(np.mean(np.abs(cos_arr[mask] - ref_arr[mask]))),
        }
    return report


def read_pairs_tsv(path) -> list:
    """TSV rows: sentence_a, sentence_b, score, regime."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            a, b, score, regime = line.split("\t")
            out.append(PairRecord(a, b, float(score), regime))
    return out


def markdown_table(method_reports: dict, cutoff: int = 10) -> str:
    """One row per method; column order H@1 H@3 H@5 H@10 nDCG MRR MAP."""
    lines = [
        "| Method | H@1 | H@3 | H@5 | H@10 | nDCG | MRR | MAP |",
        "|---|---|---|---|---|---|---|---|",
    ]
    for method, rep in method_reports.items():
        cells = [f"{rep[f'hit@{k}']:.3f}" for k in HIT_KS]
        cells += [f"{rep[f'ndcg@{cutoff}']:.3f}", f"{rep[f'mrr@{cutoff}']:.3f}", f"{rep[f'map@{cutoff}']:.3f}"]
        lines.append("| " + " | ".join([method] + cells) + " |")
    return "\n".join(lines) + "\n"


def write_histogram_csv(path, histogram):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("bin_left,count\n")
        for left, count in histogram:
            fh.write(f"{left},{count}\n")


def write_report_json(path, report):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
