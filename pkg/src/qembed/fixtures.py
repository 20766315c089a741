"""Synthetic fixture generators.

The real corpora and LLM-generated query/score sets are not shippable, so
every experiment and the acceptance suite run on deterministic synthetic
data: topic-structured documents, single-relevant queries drawn from one
document's vocabulary, sentence pairs across three similarity regimes, and
a planted "teacher" embedding set whose pairwise cosines equal the
reference scores exactly.
"""

from __future__ import annotations

import json

import numpy as np

_CONSONANTS = "bcdfglmnprstvz"
_VOWELS = "aeiou"


def _word(rng) -> str:
    n = rng.integers(2, 5)
    return "".join(
        _CONSONANTS[rng.integers(len(_CONSONANTS))] + _VOWELS[rng.integers(len(_VOWELS))]
        for _ in range(n)
    )


def make_vocab(rng, size: int) -> list:
    words = set()
    while len(words) < size:
        words.add(_word(rng))
    return sorted(words)


def make_corpus(n_docs: int = 10, tokens_per_doc: int = 1000, seed: int = 7,
                shared_vocab: int = 120, topic_vocab: int = 40) -> list:
    """Documents mixing a shared vocabulary with per-document topic words,
    so lexical and dense retrieval both have signal."""
    rng = np.random.default_rng(seed)
    shared = make_vocab(rng, shared_vocab)
    docs = []
    for di in range(n_docs):
        topic = make_vocab(rng, topic_vocab)
        words = []
        for _ in range(tokens_per_doc):
            pool = topic if rng.random() < 0.35 else shared
            words.append(pool[rng.integers(len(pool))])
        docs.append({"doc_id": f"doc{di:03d}", "text": " ".join(words), "lang": "xx", "_topic": topic})
    return docs


def make_queries(docs: list, n_queries: int = 20, seed: int = 11, query_tokens: int = 6) -> list:
    """Each query samples topic words of exactly one document (its single
    relevant document)."""
    rng = np.random.default_rng(seed)
    queries = []
    for qi in range(n_queries):
        doc = docs[qi % len(docs)]
        topic = doc.get("_topic") or doc["text"].split()
        words = [topic[rng.integers(len(topic))] for _ in range(query_tokens)]
        queries.append({"qid": f"q{qi:03d}", "text": " ".join(words), "relevant_doc": doc["doc_id"]})
    return queries


def write_corpus_jsonl(path, docs: list):
    with open(path, "w", encoding="utf-8") as fh:
        for d in docs:
            fh.write(json.dumps({k: v for k, v in d.items() if not k.startswith("_")}) + "\n")


def write_queries_jsonl(path, queries: list):
    with open(path, "w", encoding="utf-8") as fh:
        for q in queries:
            fh.write(json.dumps(q) + "\n")


_REGIMES = (("sim", 0.75, 0.95), ("neutral", 0.4, 0.6), ("dissim", 0.05, 0.25))


def make_pairs(n_per_regime: int = 6, seed: int = 23, sentence_tokens: int = 12) -> list:
    """Sentence pairs with reference scores in [0, 1] across the three
    similarity regimes; lexical overlap tracks the score."""
    rng = np.random.default_rng(seed)
    vocab = make_vocab(rng, 300)
    rows = []
    for regime, lo, hi in _REGIMES:
        for _ in range(n_per_regime):
            score = float(rng.uniform(lo, hi))
            a = [vocab[rng.integers(len(vocab))] for _ in range(sentence_tokens)]
            n_shared = int(round(score * sentence_tokens))
            b = a[:n_shared] + [vocab[rng.integers(len(vocab))] for _ in range(sentence_tokens - n_shared)]
            rows.append((" ".join(a), " ".join(b), score, regime))
    return rows


def write_pairs_tsv(path, rows: list):
    with open(path, "w", encoding="utf-8") as fh:
        for a, b, score, regime in rows:
            fh.write(f"{a}\t{b}\t{score}\t{regime}\n")


def planted_teacher_vectors(pair_rows: list, dim: int = 1024, seed: int = 31) -> dict:
    """Unit vectors per sentence with cos(a, b) == reference score exactly,
    built pair by pair (sentences are unique to their pair)."""
    rng = np.random.default_rng(seed)
    vecs = {}
    for a, b, score, _ in pair_rows:
        u = rng.normal(size=dim)
        u /= np.linalg.norm(u)
        w = rng.normal(size=dim)
        w -= (w @ u) * u
        w /= np.linalg.norm(w)
        v = score * u + np.sqrt(max(0.0, 1.0 - score**2)) * w
        vecs[a] = u
        vecs[b] = v / np.linalg.norm(v)
    return vecs


def synthetic_teacher_set(ids, dim: int = 1024, seed: int = 43) -> dict:
    """Random unit teacher vectors keyed by id (stand-in for the real
    teacher exporter in offline tests)."""
    rng = np.random.default_rng(seed)
    out = {}
    for i in ids:
        v = rng.normal(size=dim)
        out[i] = v / np.linalg.norm(v)
    return out
