"""Fixed-dimensional sub-chunk embeddings.

Window feature vectors (F reals each) are resampled to W slots by an
even-split mean, concatenated to a W*F = 1024 vector and L2-normalized.
Also holds the pipeline configuration, its canonical-JSON fingerprint and
the on-disk embedding store.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, field

import numpy as np

from . import corpus as corpus_mod
from . import qsim
from .angles import SOURCE_LEXICAL, AngleVector, SemanticAxes, eig_angles, lexical_angles
from .corpus import SegmentationConfig, SubChunk, windows_of
from .errors import AllZeroEmbedding, NoWindows
from .qsim import CircuitConfig

CHANNELS = ("current", "amp", "distilled", "teacher")

_STORE_MAGIC = b"QEMBSTOR"


@dataclass(frozen=True)
class WindowFeatures:
    f: np.ndarray
    sub_id: str
    window_index: int


@dataclass(frozen=True)
class Embedding:
    vec: np.ndarray  # 1024 reals, unit L2 norm
    owner_id: str
    channel: str = "current"


@dataclass(frozen=True)
class PipelineConfig:
    segmentation: SegmentationConfig = field(default_factory=SegmentationConfig)
    circuit: CircuitConfig = field(default_factory=CircuitConfig)
    angle_source: str = "eig"  # eig | lexical
    W: int = 16
    F: int = 64
    qks_episodes: int = 0  # 0 = off
    multiscale: bool = False
    channel: str = "current"

    def __post_init__(self):
        if self.angle_source not in ("eig", "lexical"):
            raise ValueError("angle_source must be 'eig' or 'lexical'")
        if self.channel not in CHANNELS:
            raise ValueError(f"channel must be one of {CHANNELS}")

    def to_dict(self) -> dict:
        return {
            "segmentation": self.segmentation.to_dict(),
            "circuit": self.circuit.to_dict(),
            "angle_source": self.angle_source,
            "W": self.W,
            "F": self.F,
            "qks_episodes": self.qks_episodes,
            "multiscale": self.multiscale,
            "channel": self.channel,
        }


@dataclass(frozen=True)
class Fingerprint:
    digest: str
    canonical_config: str


def _canonical_json(obj) -> str:
    """Canonical form: sorted keys, no whitespace, repr-stable floats."""

    def clean(x):
        if isinstance(x, dict):
            return {k: clean(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [clean(v) for v in x]
        if isinstance(x, float):
            return float(repr(x))
        return x

    return json.dumps(clean(obj), sort_keys=True, separators=(",", ":"))


def fingerprint(cfg: PipelineConfig) -> Fingerprint:
    canonical = _canonical_json(cfg.to_dict())
    return Fingerprint(hashlib.sha256(canonical.encode("utf-8")).hexdigest(), canonical)


def resample_windows(features: list, W: int) -> np.ndarray:
    """Even-split partition I_j = [floor(jK/W), floor((j+1)K/W)); mean
    aggregation; empty cells borrow the nearest non-empty cell (preceding
    first, following when no preceding one exists)."""
    K = len(features)
    if K == 0:
        raise NoWindows("cannot resample zero windows")
    mat = np.stack([wf.f if isinstance(wf, WindowFeatures) else np.asarray(wf, dtype=float) for wf in features])
    slots = [None] * W
    for j in range(W):
        lo = (j * K) // W
        hi = ((j + 1) * K) // W
        if hi > lo:
            slots[j] = mat[lo:hi].mean(axis=0)
    filled = None
    for j in range(W):
        if slots[j] is not None:
            filled = slots[j]
        elif filled is not None:
            slots[j] = filled
    # leading empties: borrow backwards from the first non-empty slot
    filled = None
    for j in range(W - 1, -1, -1):
        if slots[j] is not None:
            filled = slots[j]
        else:
            slots[j] = filled
    return np.stack(slots)


def _concat(slots: np.ndarray) -> np.ndarray:
    return np.asarray(slots, dtype=float).reshape(-1)


def assemble(features: list, cfg: PipelineConfig, owner_id: str = "") -> Embedding:
    """Resample -> concatenate -> L2 normalize."""
    raw = _concat(resample_windows(features, cfg.W))
    norm = np.linalg.norm(raw)
    if norm == 0:
        raise AllZeroEmbedding("assembled vector is identically zero")
    return Embedding(raw / norm, owner_id, cfg.channel)


def _window_seed(base_seed: int, sub_id: str, window_index: int) -> int:
    """Per-window substream so sampled runs are schedule-independent."""
    h = hashlib.blake2b(f"{base_seed}|{sub_id}|{window_index}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "little")


def window_angle(tokens, axes, cfg: PipelineConfig) -> AngleVector:
    if cfg.angle_source == "eig":
        if axes is None:
            raise ValueError("angle_source 'eig' requires built semantic axes")
        return eig_angles(tokens, axes, cfg.circuit.n_qubits)
    return lexical_angles(tokens, cfg.circuit.n_qubits)


def window_features(theta: AngleVector, cfg: PipelineConfig, observables, sub_id: str, window_index: int) -> np.ndarray:
    seed = _window_seed(cfg.circuit.seed, sub_id, window_index)
    if cfg.qks_episodes > 0:
        thetas = qsim.qks_expand(theta.theta, cfg.qks_episodes, seed)
    else:
        thetas = [theta.theta]
    feats = []
    for th in thetas:
        psi = qsim.ansatz_state(th, cfg.circuit)
        f = qsim.expectations(psi, observables, cfg.circuit.shots, seed)
        if cfg.channel == "amp":
            # experimental channel: amplitude-encode the expectation vector
            # and re-measure the same observable set
            psi2 = qsim.amplitude_state(f, cfg.circuit.n_qubits)
            f = qsim.expectations(psi2, observables, cfg.circuit.shots, seed)
        feats.append(f)
    return np.mean(feats, axis=0)


def embed_subchunk(sub: SubChunk, axes, cfg: PipelineConfig, observables=None) -> Embedding:
    """Full window pipeline for one sub-chunk: windows -> angles -> circuit
    features -> resample -> concatenate -> normalize."""
    if observables is None:
        observables = qsim.default_observables(cfg.circuit.n_qubits, cfg.F)
    feats = []
    for w in windows_of(sub, cfg.segmentation.window_tokens):
        theta = window_angle(w.tokens.tokens, axes, cfg)
        feats.append(WindowFeatures(window_features(theta, cfg, observables, sub.sub_id, w.window_index), sub.sub_id, w.window_index))
    return assemble(feats, cfg, owner_id=sub.sub_id)


def raw_subchunk_vector(sub: SubChunk, axes, cfg: PipelineConfig, observables=None) -> np.ndarray:
    """Unnormalized assembled vector, used as a multiscale view."""
    if observables is None:
        observables = qsim.default_observables(cfg.circuit.n_qubits, cfg.F)
    feats = []
    for w in windows_of(sub, cfg.segmentation.window_tokens):
        theta = window_angle(w.tokens.tokens, axes, cfg)
        feats.append(WindowFeatures(window_features(theta, cfg, observables, sub.sub_id, w.window_index), sub.sub_id, w.window_index))
    return _concat(resample_windows(feats, cfg.W))


def multiscale_fuse(view_vectors: list, owner_id: str, channel: str = "current") -> Embedding:
    """Mean of unnormalized view vectors, then L2 normalize."""
    if not view_vectors:
        raise NoWindows("multiscale fusion needs at least one view")
    mean = np.mean([np.asarray(v, dtype=float) for v in view_vectors], axis=0)
    norm = np.linalg.norm(mean)
    if norm == 0:
        raise AllZeroEmbedding("fused vector is identically zero")
    return Embedding(mean / norm, owner_id, channel)


def doc_embedding(sub_embeddings: list, doc_id: str, channel: str = "current") -> Embedding:
    """Document vector = normalized mean of its sub-chunk embeddings."""
    if not sub_embeddings:
        raise NoWindows(f"no sub-chunk embeddings for document {doc_id!r}")
    mean = np.mean([e.vec for e in sub_embeddings], axis=0)
    norm = np.linalg.norm(mean)
    if norm == 0:
        raise AllZeroEmbedding(f"document {doc_id!r} embeds to zero")
    return Embedding(mean / norm, doc_id, channel)


# ---------------------------------------------------------------------------
# embedding store

def write_store(path, embeddings: list, fp: Fingerprint = None):
    """Binary record stream (id, channel, 1024 float32) with a JSON sidecar
    carrying the fingerprint."""
    dim = int(embeddings[0].vec.size) if embeddings else 0
    with open(path, "wb") as fh:
        fh.write(_STORE_MAGIC)
        fh.write(struct.pack("<I", dim))
        for e in embeddings:
            rid = e.owner_id.encode("utf-8")
            ch = e.channel.encode("utf-8")
            fh.write(struct.pack("<HB", len(rid), len(ch)))
            fh.write(rid)
            fh.write(ch)
            fh.write(np.asarray(e.vec, dtype=np.float32).tobytes())
    sidecar = {
        "records": len(embeddings),
        "dim": dim,
        "fingerprint": fp.digest if fp else None,
        "canonical_config": fp.canonical_config if fp else None,
    }
    with open(str(path) + ".json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2)


def read_store(path) -> list:
    out = []
    with open(path, "rb") as fh:
        if fh.read(len(_STORE_MAGIC)) != _STORE_MAGIC:
            raise ValueError("not an embedding store")
        (dim,) = struct.unpack("<I", fh.read(4))
        while True:
            head = fh.read(3)
            if not head:
                break
            id_len, ch_len = struct.unpack("<HB", head)
            rid = fh.read(id_len).decode("utf-8")
            ch = fh.read(ch_len).decode("utf-8")
            vec = np.frombuffer(fh.read(dim * 4), dtype=np.float32).astype(np.float64)
            out.append(Embedding(vec, rid, ch))
    return out


def write_jsonl(path, embeddings: list):
    with open(path, "w", encoding="utf-8") as fh:
        for e in embeddings:
            fh.write(json.dumps({"id": e.owner_id, "channel": e.channel, "vec": [float(x) for x in e.vec]}))
            fh.write("\n")


def read_jsonl(path, normalize: bool = False) -> list:
    """JSON Lines embedding records; interoperability path for teacher
    vectors (optionally re-normalized on load)."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            vec = np.asarray(obj["vec"], dtype=float)
            if normalize:
                norm = np.linalg.norm(vec)
                if norm == 0:
                    raise AllZeroEmbedding(f"record {obj['id']!r} has zero vector")
                vec = vec / norm
            out.append(Embedding(vec, str(obj["id"]), obj.get("channel", "current")))
    return out
