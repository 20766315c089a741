"""Token-window -> angle-vector construction.

Semantic axes come from a truncated SVD of a log-damped term co-occurrence
matrix (context width 5 by default). A window's angles are the clipped,
z-scored average of its tokens' axis rows; windows with no in-vocabulary
token fall back to a deterministic hash-based lexical construction, so an
angle vector exists for every input.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import AxesRankDeficient

SOURCE_EIG = "eig"
SOURCE_LEXICAL = "lexical_fallback"

_MAGIC = b"QEMBAXES"


@dataclass(frozen=True)
class AngleVector:
    theta: np.ndarray  # d reals in [-pi, pi]
    source: str

    def __len__(self):
        return len(self.theta)


@dataclass
class SemanticAxes:
    vocab: dict  # token -> row index
    E: np.ndarray  # V x d_max
    mu: np.ndarray
    sigma: np.ndarray
    gamma: float = 1.0
    epsilon: float = 1e-8

    @property
    def d_max(self) -> int:
        return self.E.shape[1]

    def save(self, path):
        """Binary layout: magic, V, d_max, gamma, epsilon, vocab table
        (length-prefixed UTF-8, in row order), then E, mu, sigma (float64)."""
        tokens = sorted(self.vocab, key=self.vocab.get)
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<qqdd", len(tokens), self.d_max, self.gamma, self.epsilon))
            for tok in tokens:
                raw = tok.encode("utf-8")
                fh.write(struct.pack("<i", len(raw)))
                fh.write(raw)
            fh.write(np.ascontiguousarray(self.E, dtype=np.float64).tobytes())
            fh.write(np.ascontiguousarray(self.mu, dtype=np.float64).tobytes())
            fh.write(np.ascontiguousarray(self.sigma, dtype=np.float64).tobytes())

    @classmethod
    def load(cls, path) -> "SemanticAxes":
        with open(path, "rb") as fh:
            if fh.read(len(_MAGIC)) != _MAGIC:
                raise ValueError("not a semantic-axes file")
            v, d_max, gamma, epsilon = struct.unpack("<qqdd", fh.read(32))
            vocab = {}
            for i in range(v):
                (ln,) = struct.unpack("<i", fh.read(4))
                vocab[fh.read(ln).decode("utf-8")] = i
            E = np.frombuffer(fh.read(v * d_max * 8), dtype=np.float64).reshape(v, d_max)
            mu = np.frombuffer(fh.read(d_max * 8), dtype=np.float64)
            sigma = np.frombuffer(fh.read(d_max * 8), dtype=np.float64)
        return cls(vocab, E.copy(), mu.copy(), sigma.copy(), gamma, epsilon)

    def export_json(self, path):
        tokens = sorted(self.vocab, key=self.vocab.get)
        obj = {
            "vocab": tokens,
            "d_max": self.d_max,
            "gamma": self.gamma,
            "epsilon": self.epsilon,
            "E": self.E.tolist(),
            "mu": self.mu.tolist(),
            "sigma": self.sigma.tolist(),
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh)


def cooccurrence_matrix(token_lists, vocab: dict, context: int = 5) -> sp.csr_matrix:
    """Symmetric token co-occurrence counts within a sliding context window,
    log(1+count) damped."""
    rows, cols = [], []
    for toks in token_lists:
        idx = [vocab[t] for t in toks if t in vocab]
        for i, a in enumerate(idx):
            for b in idx[i + 1 : i + 1 + context]:
                rows.append(a)
                cols.append(b)
                rows.append(b)
                cols.append(a)
    v = len(vocab)
    counts = sp.coo_matrix(
        (np.ones(len(rows)), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
        shape=(v, v),
    ).tocsr()
    counts.data = np.log1p(counts.data)
    return counts


def build_axes(
    token_lists,
    d_max: int,
    context: int = 5,
    gamma: float = 1.0,
    epsilon: float = 1e-8,
) -> SemanticAxes:
    """Truncated SVD of the co-occurrence matrix; axes E = U * sqrt(S)."""
    token_lists = [list(t) for t in token_lists]
    vocab = {}
    for toks in token_lists:
        for t in toks:
            if t not in vocab:
                vocab[t] = len(vocab)
    v = len(vocab)
    if v < d_max:
        raise AxesRankDeficient(f"vocabulary size {v} < d_max {d_max}")
    C = cooccurrence_matrix(token_lists, vocab, context)
    if d_max < min(C.shape) and v > 64:
        U, S, _ = spla.svds(C.astype(np.float64), k=d_max)
        order = np.argsort(S)[::-1]
        U, S = U[:, order], S[order]
    else:
        U, S, _ = np.linalg.svd(C.toarray(), full_matrices=False)
        U, S = U[:, :d_max], S[:d_max]
    E = U * np.sqrt(S)
    mu = E.mean(axis=0)
    sigma = E.std(axis=0)
    return SemanticAxes(vocab, E, mu, sigma, gamma, epsilon)


def eig_angles(tokens, axes: SemanticAxes, d: int) -> AngleVector:
    """Mean axis row over in-vocab tokens, z-scored, truncated to d, scaled
    by gamma and clipped to [-pi, pi]. Total: delegates to the lexical
    fallback when no token is covered."""
    if d > axes.d_max:
        raise ValueError(f"d={d} exceeds d_max={axes.d_max}")
    rows = [axes.E[axes.vocab[t]] for t in tokens if t in axes.vocab]
    if not rows:
        return lexical_angles(tokens, d)
    v = np.mean(rows, axis=0)
    z = (v - axes.mu) / (axes.sigma + axes.epsilon)
    theta = np.clip(axes.gamma * z[:d], -np.pi, np.pi)
    return AngleVector(theta, SOURCE_EIG)


def _hash_unit(token: str, dim: int) -> float:
    """Stable 64-bit hash of (token, dim) mapped to [-1, 1]."""
    h = hashlib.blake2b(token.encode("utf-8"), digest_size=8, salt=dim.to_bytes(8, "little"))
    x = int.from_bytes(h.digest(), "little")
    return 2.0 * x / (2**64 - 1) - 1.0


def lexical_angles(tokens, d: int) -> AngleVector:
    """Deterministic hash-based fallback; empty windows map to the zero
    vector. Bag semantics: tokens are averaged, so order is irrelevant."""
    if d < 1:
        raise ValueError("d must be >= 1")
    tokens = list(tokens)
    if not tokens:
        return AngleVector(np.zeros(d), SOURCE_LEXICAL)
    theta = np.array(
        [np.pi * np.mean([_hash_unit(t, j) for t in tokens]) for j in range(d)]
    )
    return AngleVector(theta, SOURCE_LEXICAL)
