"""Teacher-student alignment heads.

A head maps 1024-d student embeddings toward teacher vectors under a
squared-error objective. Linear heads are solved in closed form (ridge
normal equations); the MLP head (1024 -> 1024 tanh hidden -> 1024) is
trained with hand-derived backprop and SGD + momentum.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .embed import Embedding
from .errors import InsufficientOverlap, SingularSystem, TrainingDiverged, ZeroVector

DIM = 1024


@dataclass
class TeacherSet:
    vectors: dict  # id -> unit-norm vector
    model_tag: str = ""

    @classmethod
    def from_embeddings(cls, embeddings, model_tag: str = "") -> "TeacherSet":
        vecs = {}
        for e in embeddings:
            v = np.asarray(e.vec, dtype=float)
            norm = np.linalg.norm(v)
            if norm == 0:
                raise ZeroVector(f"teacher vector {e.owner_id!r} is zero")
            vecs[e.owner_id] = v / norm
        return cls(vecs, model_tag)


@dataclass
class DistillHead:
    kind: str  # linear | mlp
    params: dict  # ndarray tensors keyed by name
    meta: dict = field(default_factory=dict)

    def save(self, path):
        np.savez(path, **self.params)
        with open(str(path) + ".json", "w", encoding="utf-8") as fh:
            json.dump({"kind": self.kind, "meta": self.meta,
                       "shapes": {k: list(v.shape) for k, v in self.params.items()}}, fh, indent=2)

    @classmethod
    def load(cls, path) -> "DistillHead":
        data = np.load(str(path) if str(path).endswith(".npz") else str(path) + ".npz")
        with open(str(path).removesuffix(".npz") + ".json", encoding="utf-8") as fh:
            meta = json.load(fh)
        return cls(meta["kind"], {k: data[k] for k in data.files}, meta["meta"])


def _stack_pairs(pairs):
    E = np.stack([np.asarray(e, dtype=float) for e, _ in pairs])
    T = np.stack([np.asarray(t, dtype=float) for _, t in pairs])
    return E, T


def fit_linear(pairs, ridge: float = 1e-3) -> DistillHead:
    """Closed-form ridge least squares for z = W e + b.

    Solves the normal equations over bias-augmented inputs; the bias column
    is not penalized.
    """
    if len(pairs) < 2:
        raise ValueError("need at least 2 (student, teacher) pairs")
    if ridge < 0:
        raise ValueError("ridge must be >= 0")
    E, T = _stack_pairs(pairs)
    X = np.hstack([E, np.ones((E.shape[0], 1))])
    gram = X.T @ X
    reg = np.eye(X.shape[1]) * ridge
    reg[-1, -1] = 0.0
    rhs = X.T @ T
    try:
        # Cholesky: the right factorization for an SPD normal matrix, and it
        # fails cleanly on rank deficiency (unlike solve, which can return a
        # finite particular solution of a consistent singular system)
        factor = scipy.linalg.cho_factor(gram + reg)
        sol = scipy.linalg.cho_solve(factor, rhs)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise SingularSystem("normal matrix is singular; use ridge > 0") from exc
    if not np.all(np.isfinite(sol)):
        raise SingularSystem("normal matrix is singular; use ridge > 0")
    W = sol[:-1].T
    b = sol[-1]
    resid = X @ sol - T
    loss = float(np.mean(np.sum(resid**2, axis=1)))
    return DistillHead("linear", {"W": W, "b": b}, {"ridge": ridge, "final_loss": loss, "pairs": len(pairs)})


def _mlp_init(rng, hidden: int = DIM):
    s1 = 1.0 / np.sqrt(DIM)
    return {
        "W1": rng.normal(0.0, s1, size=(hidden, DIM)),
        "b1": np.zeros(hidden),
        "W2": rng.normal(0.0, 1.0 / np.sqrt(hidden), size=(DIM, hidden)),
        "b2": np.zeros(DIM),
    }


def mlp_forward(params, E):
    pre = E @ params["W1"].T + params["b1"]
    h = np.tanh(pre)
    z = h @ params["W2"].T + params["b2"]
    return z, h


def mlp_loss_grads(params, E, T):
    """Mean squared alignment loss and analytic gradients."""
    m = E.shape[0]
    z, h = mlp_forward(params, E)
    diff = z - T
    loss = float(np.mean(np.sum(diff**2, axis=1)))
    dz = 2.0 * diff / m
    grads = {
        "W2": dz.T @ h,
        "b2": dz.sum(axis=0),
    }
    dh = dz @ params["W2"]
    dpre = dh * (1.0 - h**2)
    grads["W1"] = dpre.T @ E
    grads["b1"] = dpre.sum(axis=0)
    return loss, grads


def fit_mlp(pairs, epochs: int = 50, lr: float = 0.05, seed: int = 0,
            batch_size: int = 32, momentum: float = 0.9) -> DistillHead:
    """Mini-batch SGD with momentum on the alignment loss; deterministic
    given the seed. Raises TrainingDiverged when the loss explodes."""
    if epochs < 1 or lr <= 0:
        raise ValueError("epochs >= 1 and lr > 0 required")
    E, T = _stack_pairs(pairs)
    rng = np.random.default_rng(seed)
    params = _mlp_init(rng)
    velocity = {k: np.zeros_like(v) for k, v in params.items()}
    initial_loss, _ = mlp_loss_grads(params, E, T)
    history = []
    m = E.shape[0]
    for _ in range(epochs):
        order = rng.permutation(m)
        for lo in range(0, m, batch_size):
            idx = order[lo : lo + batch_size]
            _, grads = mlp_loss_grads(params, E[idx], T[idx])
            for k in params:
                velocity[k] = momentum * velocity[k] - lr * grads[k]
                params[k] = params[k] + velocity[k]
        loss, _ = mlp_loss_grads(params, E, T)
        history.append(loss)
        if not np.isfinite(loss) or loss > 10.0 * max(initial_loss, 1e-30):
            raise TrainingDiverged(f"loss {loss} exceeded 10x initial {initial_loss}")
    return DistillHead(
        "mlp",
        params,
        {"epochs": epochs, "lr": lr, "seed": seed, "momentum": momentum,
         "final_loss": history[-1], "loss_curve": history, "pairs": m},
    )


def apply(head: DistillHead, e) -> Embedding:
    """Map one embedding through the head and re-normalize (channel
    'distilled')."""
    vec = e.vec if isinstance(e, Embedding) else np.asarray(e, dtype=float)
    owner = e.owner_id if isinstance(e, Embedding) else ""
    if head.kind == "linear":
        z = head.params["W"] @ vec + head.params["b"]
    else:
        z, _ = mlp_forward(head.params, vec[None, :])
        z = z[0]
    norm = np.linalg.norm(z)
    if norm == 0:
        raise ZeroVector("head output is the zero vector")
    return Embedding(z / norm, owner, "distilled")


def alignment_report(student: dict, teacher: TeacherSet, n_pairs: int = 2000, seed: int = 0) -> dict:
    """Similarity-space alignment: sample id pairs, compare cosine in the
    student space against cosine in the teacher space.

    Returns Pearson r and MAE over the pair-similarity lists; a
    coordinate-level Pearson is included as a secondary diagnostic.
    """
    shared = sorted(set(student) & set(teacher.vectors))
    if len(shared) < 2:
        raise InsufficientOverlap(f"only {len(shared)} shared ids")
    rng = np.random.default_rng(seed)
    all_pairs = [(a, b) for i, a in enumerate(shared) for b in shared[i + 1 :]]
    if len(all_pairs) > n_pairs:
        pick = rng.choice(len(all_pairs), size=n_pairs, replace=False)
        sample = [all_pairs[i] for i in pick]
    else:
        sample = all_pairs

    def unit(v):
        return v / np.linalg.norm(v)

    s_sims, t_sims = [], []
    for a, b in sample:
        s_sims.append(float(unit(np.asarray(student[a])) @ unit(np.asarray(student[b]))))
        t_sims.append(float(teacher.vectors[a] @ teacher.vectors[b]))
    s_arr, t_arr = np.asarray(s_sims), np.asarray(t_sims)
    if np.std(s_arr) == 0 or np.std(t_arr) == 0:
        r = 1.0 if np.allclose(s_arr, t_arr) else float("nan")
    else:
        r = float(np.corrcoef(s_arr, t_arr)[0, 1])
    mae = float(np.mean(np.abs(s_arr - t_arr)))

    coords_s = np.concatenate([unit(np.asarray(student[i], dtype=float)) for i in shared])
    coords_t = np.concatenate([teacher.vectors[i] for i in shared])
    if np.std(coords_s) > 0 and np.std(coords_t) > 0:
        coord_r = float(np.corrcoef(coords_s, coords_t)[0, 1])
    else:
        coord_r = float("nan")
    return {"r": r, "mae": mae, "coordinate_r": coord_r, "pairs": len(sample)}
