"""Quantum-kernel diagnostic: PCA to qubit count, angle encoding through the
ansatz, fidelity kernel matrix, and correlation against reference
similarities. Diagnostic only; not part of the retrieval pipeline."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qsim
from .errors import InsufficientSamples
from .evalkit import pearson, similarity_histogram, spearman
from .qsim import CircuitConfig


@dataclass
class PcaModel:
    mean: np.ndarray
    components: np.ndarray  # d x D, rows orthonormal
    explained_variance: np.ndarray

    def project(self, X: np.ndarray) -> np.ndarray:
        return (np.atleast_2d(X) - self.mean) @ self.components.T


@dataclass
class KernelMatrix:
    ids: list
    K: np.ndarray

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("id," + ",".join(self.ids) + "\n")
            for i, rid in enumerate(self.ids):
                fh.write(rid + "," + ",".join(f"{v:.12g}" for v in self.K[i]) + "\n")


def fit_pca(X: np.ndarray, d: int) -> PcaModel:
    """Top-d principal directions of the centered data (SVD); sign fixed so
    each direction's largest-magnitude component is positive."""
    X = np.asarray(X, dtype=float)
    m = X.shape[0]
    if m < d:
        raise InsufficientSamples(f"{m} samples < {d} components")
    mean = X.mean(axis=0)
    Xc = X - mean
    _, S, Vt = np.linalg.svd(Xc, full_matrices=False)
    comps = Vt[:d]
    for i in range(d):
        j = np.argmax(np.abs(comps[i]))
        if comps[i, j] < 0:
            comps[i] = -comps[i]
    var = (S[:d] ** 2) / max(m - 1, 1)
    return PcaModel(mean, comps, var)


def _angle_rescale(Z: np.ndarray) -> np.ndarray:
    """Per-coordinate min-max over the batch onto [-pi, pi]; constant
    coordinates map to 0."""
    lo = Z.min(axis=0)
    hi = Z.max(axis=0)
    span = hi - lo
    out = np.zeros_like(Z)
    nz = span > 0
    out[:, nz] = (Z[:, nz] - lo[nz]) / span[nz] * (2 * np.pi) - np.pi
    return out


def encode_and_kernel(X: np.ndarray, pca: PcaModel, cfg: CircuitConfig, ids=None) -> KernelMatrix:
    """Fidelity kernel K_ij = |<psi_i|psi_j>|^2 over ansatz states prepared
    from batch-rescaled PCA projections."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if pca.components.shape[0] != cfg.n_qubits:
        raise ValueError("PCA dimensionality must equal the qubit count")
    angles = _angle_rescale(pca.project(X))
    states = np.stack([qsim.ansatz_state(a, cfg) for a in angles])
    G = states @ states.conj().T
    K = np.abs(G) ** 2
    K = (K + K.T) / 2.0
    if ids is None:
        ids = [str(i) for i in range(X.shape[0])]
    return KernelMatrix(list(ids), K)


def kernel_diagnostics(kernel: KernelMatrix, reference: np.ndarray) -> dict:
    """Correlations over the upper triangle of K against a reference
    similarity matrix (or an already-flattened upper-triangle vector)."""
    m = kernel.K.shape[0]
    iu = np.triu_indices(m, k=1)
    kvals = kernel.K[iu]
    ref = np.asarray(reference, dtype=float)
    rvals = ref[iu] if ref.ndim == 2 else ref
    return {
        "pearson": pearson(kvals, rvals),
        "spearman": spearman(kvals, rvals),
        "histogram": similarity_histogram(kvals, lo=0.0, hi=1.0),
        "pairs": int(kvals.size),
    }
