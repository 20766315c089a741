import numpy as np
import pytest

import oracles
from qembed.errors import InsufficientSamples
from qembed.qkernel import (
    KernelMatrix,
    encode_and_kernel,
    fit_pca,
    kernel_diagnostics,
    _angle_rescale,
)
from qembed.qsim import CircuitConfig


class TestPca:
    def test_planted_axes(self):
        # variance concentrated on coordinate 0, then 1
        rng = np.random.default_rng(0)
        X = np.zeros((200, 5))
        X[:, 0] = rng.normal(scale=10.0, size=200)
        X[:, 1] = rng.normal(scale=2.0, size=200)
        X[:, 2] = rng.normal(scale=0.1, size=200)
        pca = fit_pca(X, 2)
        assert abs(abs(pca.components[0, 0]) - 1.0) < 0.05
        assert abs(abs(pca.components[1, 1]) - 1.0) < 0.05
        assert pca.explained_variance[0] > pca.explained_variance[1]

    def test_rows_orthonormal(self):
        rng = np.random.default_rng(1)
        X = rng.normal(size=(30, 8))
        pca = fit_pca(X, 4)
        assert np.allclose(pca.components @ pca.components.T, np.eye(4), atol=1e-10)

    def test_sign_convention(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(30, 6))
        pca = fit_pca(X, 3)
        for row in pca.components:
            assert row[np.argmax(np.abs(row))] > 0

    def test_projection_matches_reconstruction(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(40, 6))
        pca = fit_pca(X, 6)
        Z = pca.project(X)
        back = Z @ pca.components + pca.mean
        assert np.max(np.abs(back - X)) < 1e-10

    def test_insufficient_samples(self):
        with pytest.raises(InsufficientSamples):
            fit_pca(np.zeros((2, 5)), 3)

    def test_explained_variance_oracle(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(50, 4))
        pca = fit_pca(X, 4)
        cov = np.cov(X, rowvar=False)
        eig = np.sort(np.linalg.eigvalsh(cov))[::-1]
        assert np.allclose(pca.explained_variance, eig, atol=1e-10)


class TestAngleRescale:
    def test_range_and_endpoints(self):
        Z = np.array([[0.0, 5.0], [10.0, 5.0], [5.0, 5.0]])
        out = _angle_rescale(Z)
        assert out[0, 0] == pytest.approx(-np.pi)
        assert out[1, 0] == pytest.approx(np.pi)
        assert out[2, 0] == pytest.approx(0.0)
        assert np.all(out[:, 1] == 0.0)  # constant coordinate maps to 0


class TestKernel:
    def make(self, n_qubits=3, m=6, seed=5):
        rng = np.random.default_rng(seed)
        X = rng.normal(size=(m, 8))
        pca = fit_pca(X, n_qubits)
        cfg = CircuitConfig(n_qubits=n_qubits, n_layers=2)
        return X, pca, cfg, encode_and_kernel(X, pca, cfg)

    def test_unit_diagonal_symmetric(self):
        _, _, _, km = self.make()
        assert np.allclose(np.diag(km.K), 1.0, atol=1e-12)
        assert np.allclose(km.K, km.K.T)
        assert np.all(km.K >= -1e-12) and np.all(km.K <= 1.0 + 1e-12)

    def test_psd(self):
        _, _, _, km = self.make(m=10)
        eig = np.linalg.eigvalsh(km.K)
        assert eig.min() > -1e-10

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_dense_state_oracle(self, n):
        # recompute the fidelity kernel from dense-oracle ansatz states
        rng = np.random.default_rng(n)
        X = rng.normal(size=(5, 6))
        pca = fit_pca(X, n)
        cfg = CircuitConfig(n_qubits=n, n_layers=2)
        km = encode_and_kernel(X, pca, cfg)
        angles = _angle_rescale(pca.project(X))
        states = [oracles.dense_ansatz_state(a, n, 2) for a in angles]
        for i in range(5):
            for j in range(5):
                want = abs(np.vdot(states[i], states[j])) ** 2
                assert abs(km.K[i, j] - want) < 1e-10

    def test_dim_mismatch(self):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(6, 8))
        pca = fit_pca(X, 3)
        with pytest.raises(ValueError):
            encode_and_kernel(X, pca, CircuitConfig(n_qubits=4))

    def test_ids_default_and_custom(self):
        _, pca, cfg, km = self.make()
        assert km.ids == [str(i) for i in range(6)]
        rng = np.random.default_rng(7)
        X = rng.normal(size=(3, 8))
        pca = fit_pca(X, 3)
        km2 = encode_and_kernel(X, pca, cfg, ids=["a", "b", "c"])
        assert km2.ids == ["a", "b", "c"]

    def test_csv_round_trip(self, tmp_path):
        _, _, _, km = self.make(m=4)
        p = tmp_path / "k.csv"
        km.to_csv(p)
        lines = p.read_text().strip().splitlines()
        assert lines[0] == "id," + ",".join(km.ids)
        row1 = lines[1].split(",")
        assert row1[0] == km.ids[0]
        assert np.allclose([float(v) for v in row1[1:]], km.K[0], atol=1e-9)


class TestDiagnostics:
    def test_self_reference_perfect(self):
        rng = np.random.default_rng(8)
        X = rng.normal(size=(6, 8))
        pca = fit_pca(X, 3)
        km = encode_and_kernel(X, pca, CircuitConfig(n_qubits=3, n_layers=2))
        diag = kernel_diagnostics(km, km.K)
        assert diag["pearson"] == pytest.approx(1.0)
        assert diag["spearman"] == pytest.approx(1.0)
        assert diag["pairs"] == 15
        assert sum(c for _, c in diag["histogram"]) == 15

    def test_flat_reference_vector(self):
        rng = np.random.default_rng(9)
        X = rng.normal(size=(5, 8))
        pca = fit_pca(X, 3)
        km = encode_and_kernel(X, pca, CircuitConfig(n_qubits=3, n_layers=2))
        iu = np.triu_indices(5, k=1)
        diag = kernel_diagnostics(km, km.K[iu])
        assert diag["pearson"] == pytest.approx(1.0)
