"""Batch encoding of text units into teacher embedding records.

Input units come from a sub-chunk store, a document corpus, or a sentence
pair file; each unit is prefixed per the encoder's usage contract
("query: " / "passage: "), truncated to the model's maximum length, and
written as {"id": ..., "channel": "teacher", "vec": [...]} JSON Lines.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

DEFAULT_MODEL = "intfloat/multilingual-e5-large"
DIM = 1024

ROLE_PREFIX = {"query": "query: ", "passage": "passage: ", "sentence": ""}


class ModelLoadError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExportJob:
    input_path: str
    output_path: str
    model: str = DEFAULT_MODEL
    batch: int = 32
    max_length: int = 512
    role: str = "passage"

    def __post_init__(self):
        if self.role not in ROLE_PREFIX:
            raise ValueError(f"role must be one of {sorted(ROLE_PREFIX)}")
        if self.batch < 1 or self.max_length < 1:
            raise ValueError("batch and max_length must be >= 1")


def truncate(text: str, max_length: int) -> str:
    """Whitespace-token truncation; the served model truncates at its own
    subword limit, this keeps offline encoders consistent with that
    behavior."""
    tokens = text.split()
    return " ".join(tokens[:max_length]) if len(tokens) > max_length else text


def read_units(path) -> list:
    """(id, text) units. TSV files are sentence-pair rows keyed by the
    sentence text itself; JSONL records are sub-chunks, documents, or
    queries depending on their fields."""
    units = []
    seen = set()

    def add(uid, text):
        if uid not in seen:
            seen.add(uid)
            units.append((uid, text))

    if str(path).endswith(".tsv"):
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                a, b = line.split("\t")[:2]
                add(a, a)
                add(b, b)
        return units

    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if "sub_id" in obj:
                add(obj["sub_id"], " ".join(obj["tokens"]))
            elif "doc_id" in obj:
                add(obj["doc_id"], obj["text"])
            elif "qid" in obj:
                add(obj["qid"], obj["text"])
            else:
                raise ValueError(f"unrecognized record in {path}: keys {sorted(obj)}")
    return units


class HashEncoder:
    """Deterministic stand-in encoder: a unit vector drawn from a PRNG
    seeded by the text digest. No semantics, but stable across runs, which
    is all the offline contract checks need."""

    name = "hash-1024"

    def __init__(self, dim: int = DIM):
        self.dim = dim

    def encode(self, texts, batch: int = 32) -> np.ndarray:
        out = np.empty((len(texts), self.dim))
        for i, t in enumerate(texts):
            seed = int.from_bytes(hashlib.blake2b(t.encode("utf-8"), digest_size=8).digest(), "little")
            v = np.random.default_rng(seed).normal(size=self.dim)
            out[i] = v / np.linalg.norm(v)
        return out


class SentenceTransformerEncoder:
    def __init__(self, model_name: str):
        try:
            from sentence_transformers import SentenceTransformer
            self.model = SentenceTransformer(model_name)
        except Exception as exc:  # import or download failure
            raise ModelLoadError(f"cannot load model {model_name!r}: {exc}") from exc
        self.name = model_name

    def encode(self, texts, batch: int = 32) -> np.ndarray:
        return np.asarray(
            self.model.encode(list(texts), batch_size=batch, normalize_embeddings=True,
                              show_progress_bar=False),
            dtype=float)


def make_encoder(model: str):
    if model in ("hash", "hash-1024"):
        return HashEncoder()
    return SentenceTransformerEncoder(model)


def export(job: ExportJob, encoder=None) -> int:
    """Encode every input unit and write JSONL records plus a metadata
    sidecar; returns the record count."""
    if encoder is None:
        encoder = make_encoder(job.model)
    units = read_units(job.input_path)
    prefix = ROLE_PREFIX[job.role]
    texts = [prefix + truncate(text, job.max_length) for _, text in units]
    with open(job.output_path, "w", encoding="utf-8") as fh:
        for lo in range(0, len(texts), job.batch):
            ids = [u for u, _ in units[lo : lo + job.batch]]
            vecs = encoder.encode(texts[lo : lo + job.batch], batch=job.batch)
            for uid, vec in zip(ids, vecs):
                fh.write(json.dumps({"id": uid, "channel": "teacher",
                                     "vec": [float(x) for x in vec]}) + "\n")
    meta = {
        "model": getattr(encoder, "name", job.model),
        "role": job.role,
        "prefix": prefix,
        "max_length": job.max_length,
        "records": len(units),
    }
    with open(str(job.output_path) + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2)
    return len(units)


def cross_encode(queries_path, units_path, output_path, encoder, max_length: int = 512,
                 batch: int = 32) -> int:
    """Best-effort cross-encoder substitute: bi-encoder cosine between each
    query and each unit, written as qid<TAB>unit_id<TAB>score rows."""
    queries = read_units(queries_path)
    units = read_units(units_path)
    qvecs = encoder.encode([ROLE_PREFIX["query"] + truncate(t, max_length) for _, t in queries], batch=batch)
    uvecs = encoder.encode([ROLE_PREFIX["passage"] + truncate(t, max_length) for _, t in units], batch=batch)
    scores = qvecs @ uvecs.T
    n = 0
    with open(output_path, "w", encoding="utf-8") as fh:
        for qi, (qid, _) in enumerate(queries):
            for ui, (uid, _) in enumerate(units):
                fh.write(f"{qid}\t{uid}\t{scores[qi, ui]}\n")
                n += 1
    return n
