"""Classical statevector simulation of the quantum-inspired feature maps.

Conventions (shared with the dense-matrix test oracle):
  - amplitudes index qubits big-endian: qubit 0 is the leftmost tensor
    factor, i.e. basis index = sum_q bit_q << (n-1-q);
  - R_y(phi) = exp(-i phi Y / 2), R_z(phi) = exp(-i phi Z / 2);
  - CNOT is the standard controlled-X;
  - ansatz layer l reuses theta with a decaying scale 1/(l+1), followed by
    a CNOT ring control i -> target (i+1) mod n (skipped for n = 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ObservablePoolExhausted, ThetaDimension, ZeroVector

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_SDG = np.array([[1, 0], [0, -1j]], dtype=complex)


@dataclass(frozen=True)
class CircuitConfig:
    n_qubits: int = 12
    n_layers: int = 4
    shots: int = 0  # 0 = analytic
    seed: int = 0

    def __post_init__(self):
        if not (1 <= self.n_qubits <= 16):
            raise ValueError("n_qubits must be in [1, 16]")
        if self.n_layers < 1:
            raise ValueError("n_layers must be >= 1")
        if self.shots < 0:
            raise ValueError("shots must be >= 0")

    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "n_layers": self.n_layers,
            "shots": self.shots,
            "seed": self.seed,
        }


def zero_state(n: int) -> np.ndarray:
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = 1.0
    return psi


def ry(phi: float) -> np.ndarray:
    c, s = np.cos(phi / 2), np.sin(phi / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(phi: float) -> np.ndarray:
    return np.array([[np.exp(-1j * phi / 2), 0], [0, np.exp(1j * phi / 2)]], dtype=complex)


def phase(phi: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * phi)]], dtype=complex)


def apply_1q(psi: np.ndarray, mat: np.ndarray, q: int, n: int) -> np.ndarray:
    t = psi.reshape([2] * n)
    t = np.moveaxis(t, q, -1)
    t = t @ mat.T
    return np.moveaxis(t, -1, q).reshape(-1)


def apply_cnot(psi: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    t = psi.reshape([2] * n).copy()
    sel = [slice(None)] * n
    sel[control] = 1
    sub = t[tuple(sel)]
    t[tuple(sel)] = np.flip(sub, axis=target if target < control else target - 1)
    return t.reshape(-1)


def ring_pairs(n: int) -> list:
    """Entangler ordering (i, (i+1) mod n); empty for a single qubit."""
    if n < 2:
        return []
    return [(i, (i + 1) % n) for i in range(n)]


def ansatz_state(theta: np.ndarray, cfg: CircuitConfig) -> np.ndarray:
    """Hardware-efficient ansatz: per layer, R_y then R_z on each qubit with
    layer-scaled angles, then the CNOT ring."""
    theta = np.asarray(theta, dtype=float)
    n = cfg.n_qubits
    if theta.shape != (n,):
        raise ThetaDimension(f"theta has length {theta.size}, expected {n}")
    psi = zero_state(n)
    for layer in range(cfg.n_layers):
        scale = 1.0 / (layer + 1)
        for q in range(n):
            psi = apply_1q(psi, ry(theta[q] * scale), q, n)
            psi = apply_1q(psi, rz(theta[q] * scale), q, n)
        for c, t in ring_pairs(n):
            psi = apply_cnot(psi, c, t, n)
    return psi


def default_observables(n_qubits: int, F: int) -> list:
    """Canonical observable ordering: Z_i, X_i, Y_i singles, then ZZ, XX, YY
    on ring pairs; truncated to the first F terms."""
    pool = []
    for p in ("Z", "X", "Y"):
        for q in range(n_qubits):
            pool.append({q: p})
    for p in ("Z", "X", "Y"):
        for a, b in ring_pairs(n_qubits):
            pool.append({a: p, b: p})
    # ring_pairs is empty for n=1 but the advertised pool size is 6n
    pool_size = 6 * n_qubits if n_qubits >= 2 else 3 * n_qubits
    if F > pool_size or F > len(pool):
        raise ObservablePoolExhausted(f"F={F} exceeds pool of {min(pool_size, len(pool))}")
    return pool[:F]


def _rotate_to_z(psi: np.ndarray, term: dict, n: int) -> np.ndarray:
    """Basis change making every Pauli in ``term`` Z-diagonal."""
    for q, p in term.items():
        if p == "X":
            psi = apply_1q(psi, _H, q, n)
        elif p == "Y":
            psi = apply_1q(psi, _H @ _SDG, q, n)
    return psi


def _z_signs(term: dict, n: int) -> np.ndarray:
    """Eigenvalue (+1/-1) of the Z-diagonal term per basis state."""
    signs = np.ones(2**n)
    idx = np.arange(2**n)
    for q in term:
        bit = (idx >> (n - 1 - q)) & 1
        signs *= 1.0 - 2.0 * bit
    return signs


def expectation_analytic(psi: np.ndarray, term: dict, n: int) -> float:
    rotated = _rotate_to_z(psi, term, n)
    probs = np.abs(rotated) ** 2
    return float(np.dot(probs, _z_signs(term, n)))


def expectations(psi: np.ndarray, observables: list, shots: int = 0, seed=None) -> np.ndarray:
    """Pauli expectation values; exact when shots=0, else binomial sampling
    of the rotated measurement distribution with the seeded generator."""
    n = int(np.log2(psi.size))
    out = np.empty(len(observables))
    rng = np.random.default_rng(seed) if shots else None
    for j, term in enumerate(observables):
        if shots == 0:
            out[j] = expectation_analytic(psi, term, n)
        else:
            rotated = _rotate_to_z(psi, term, n)
            probs = np.abs(rotated) ** 2
            p_plus = float(np.clip(probs[_z_signs(term, n) > 0].sum(), 0.0, 1.0))
            hits = rng.binomial(shots, p_plus)
            out[j] = 2.0 * hits / shots - 1.0
    return out


def amplitude_state(features: np.ndarray, n_qubits: int) -> np.ndarray:
    """Interpret a real feature vector as state amplitudes: pad/truncate to
    2^n, L2-normalize."""
    vec = np.asarray(features, dtype=float).ravel()
    if not np.any(vec):
        raise ZeroVector("all-zero feature vector cannot be amplitude-encoded")
    dim = 2**n_qubits
    if vec.size >= dim:
        vec = vec[:dim]
    else:
        vec = np.concatenate([vec, np.zeros(dim - vec.size)])
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise ZeroVector("feature vector is zero after truncation")
    return (vec / norm).astype(complex)


def zz_feature_state(x: np.ndarray, n_qubits: int, reps: int = 1) -> np.ndarray:
    """Second-order Pauli-Z phase encoding over a ring: H layer, single-qubit
    phases 2*x_i, pairwise phases 2*(pi - x_i)(pi - x_j) conjugated by CNOT."""
    x = np.asarray(x, dtype=float)
    if x.shape != (n_qubits,):
        raise ThetaDimension(f"x has length {x.size}, expected {n_qubits}")
    psi = zero_state(n_qubits)
    for _ in range(reps):
        for q in range(n_qubits):
            psi = apply_1q(psi, _H, q, n_qubits)
        for q in range(n_qubits):
            psi = apply_1q(psi, phase(2.0 * x[q]), q, n_qubits)
        for a, b in ring_pairs(n_qubits):
            psi = apply_cnot(psi, a, b, n_qubits)
            psi = apply_1q(psi, phase(2.0 * (np.pi - x[a]) * (np.pi - x[b])), b, n_qubits)
            psi = apply_cnot(psi, a, b, n_qubits)
    return psi


def qks_episode_params(d: int, episodes: int, seed) -> list:
    """Seeded random-feature episodes: Gaussian d x d matrix and a uniform
    offset in [-pi, pi) per episode."""
    rng = np.random.default_rng(seed)
    params = []
    for _ in range(episodes):
        omega = rng.normal(size=(d, d))
        beta = rng.uniform(-np.pi, np.pi, size=d)
        params.append((omega, beta))
    return params


def qks_apply(theta: np.ndarray, omega: np.ndarray, beta: np.ndarray) -> np.ndarray:
    return np.clip(omega @ np.asarray(theta, dtype=float) + beta, -np.pi, np.pi)


def qks_expand(theta: np.ndarray, episodes: int, seed) -> list:
    """Clipped random affine expansions of one angle vector."""
    if episodes < 1:
        raise ValueError("episodes must be >= 1")
    theta = np.asarray(theta, dtype=float)
    return [qks_apply(theta, om, be) for om, be in qks_episode_params(theta.size, episodes, seed)]
