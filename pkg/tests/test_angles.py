import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qembed import angles
from qembed.angles import SOURCE_EIG, SOURCE_LEXICAL, SemanticAxes, build_axes, eig_angles, lexical_angles
from qembed.errors import AxesRankDeficient


def small_corpus():
    return [["a", "b", "c", "a"], ["b", "c", "d", "e"], ["a", "d", "e", "b", "c"]]


class TestBuildAxes:
    def test_rank_deficient(self):
        with pytest.raises(AxesRankDeficient):
            build_axes([["solo", "solo", "solo"]], d_max=2)

    def test_two_token_spectrum(self):
        # dense SVD oracle on the 2x2 damped count matrix
        lists = [["a", "b", "a", "b"]]
        ax = build_axes(lists, d_max=2, context=5)
        C = angles.cooccurrence_matrix(lists, ax.vocab, context=5).toarray()
        approx = ax.E @ ax.E.T
        # E = U sqrt(S) gives E E^T = U S U^T = C for symmetric PSD C
        w = np.linalg.eigvalsh(C)
        if np.all(w >= -1e-12):
            assert np.allclose(approx, C, atol=1e-8)
        # spectra agree regardless
        assert np.allclose(np.sort(np.linalg.svd(approx, compute_uv=False)),
                           np.sort(np.linalg.svd(C, compute_uv=False)), atol=1e-8)

    def test_columns_orthonormal(self):
        ax = build_axes(small_corpus(), d_max=3)
        # recover U from E = U sqrt(S)
        U, S, _ = np.linalg.svd(ax.E, full_matrices=False)
        C = angles.cooccurrence_matrix(small_corpus(), ax.vocab).toarray()
        Uc, Sc, _ = np.linalg.svd(C)
        Uc = Uc[:, :3]
        assert np.allclose(Uc.T @ Uc, np.eye(3), atol=1e-10)
        # and the library's axes reproduce the top singular values
        assert np.allclose(np.sort(S**2)[::-1], np.sort(Sc[:3])[::-1], atol=1e-8)

    def test_mu_sigma_shapes(self):
        ax = build_axes(small_corpus(), d_max=3)
        assert ax.mu.shape == (3,)
        assert ax.sigma.shape == (3,)
        assert np.all(ax.sigma >= 0)

    def test_save_load_roundtrip(self, tmp_path):
        ax = build_axes(small_corpus(), d_max=3, gamma=1.5, epsilon=1e-7)
        path = tmp_path / "axes.bin"
        ax.save(path)
        back = SemanticAxes.load(path)
        assert back.vocab == ax.vocab
        assert np.array_equal(back.E, ax.E)
        assert np.array_equal(back.mu, ax.mu)
        assert back.gamma == 1.5 and back.epsilon == 1e-7

    def test_json_export(self, tmp_path):
        ax = build_axes(small_corpus(), d_max=2)
        ax.export_json(tmp_path / "axes.json")
        import json

        obj = json.loads((tmp_path / "axes.json").read_text())
        assert obj["d_max"] == 2
        assert len(obj["vocab"]) == len(ax.vocab)


class TestEigAngles:
    def test_mean_equals_mu_gives_zero(self):
        ax = build_axes(small_corpus(), d_max=3)
        # craft a fake axes object where one token's row is exactly mu
        ax.E[ax.vocab["a"]] = ax.mu
        out = eig_angles(["a"], ax, d=3)
        assert out.source == SOURCE_EIG
        assert np.allclose(out.theta, 0.0, atol=1e-12)

    def test_clip_boundary(self):
        ax = build_axes(small_corpus(), d_max=3)
        ax.E[ax.vocab["a"]] = ax.mu + 10.0 * (ax.sigma + ax.epsilon)
        out = eig_angles(["a"], ax, d=3)
        assert np.allclose(out.theta, np.pi)

    def test_matches_stepwise_oracle(self):
        rng = np.random.default_rng(3)
        vocab = {f"t{i}": i for i in range(8)}
        ax = SemanticAxes(vocab, rng.normal(size=(8, 6)), rng.normal(size=6),
                          np.abs(rng.normal(size=6)), gamma=0.8, epsilon=1e-8)
        window = ["t1", "t4", "t6", "oov"]
        out = eig_angles(window, ax, d=4)
        v = (ax.E[1] + ax.E[4] + ax.E[6]) / 3.0
        z = (v - ax.mu) / (ax.sigma + ax.epsilon)
        expected = np.clip(0.8 * z[:4], -np.pi, np.pi)
        assert np.allclose(out.theta, expected, atol=1e-12)

    def test_fallback_when_all_oov(self):
        ax = build_axes(small_corpus(), d_max=3)
        out = eig_angles(["zzz", "yyy"], ax, d=3)
        assert out.source == SOURCE_LEXICAL
        assert np.array_equal(out.theta, lexical_angles(["zzz", "yyy"], 3).theta)

    def test_permutation_invariance(self):
        ax = build_axes(small_corpus(), d_max=3)
        a = eig_angles(["a", "b", "c"], ax, d=3)
        b = eig_angles(["c", "a", "b"], ax, d=3)
        assert np.allclose(a.theta, b.theta)

    def test_gamma_monotone_clipping(self):
        base = build_axes(small_corpus(), d_max=3)
        prev = None
        for gamma in (0.5, 1.0, 2.0, 5.0):
            ax = SemanticAxes(base.vocab, base.E, base.mu, base.sigma, gamma=gamma)
            theta = np.abs(eig_angles(["a", "b"], ax, d=3).theta)
            if prev is not None:
                assert np.all(theta >= prev - 1e-12)
            prev = theta


class TestLexicalAngles:
    def test_empty_window_zero(self):
        out = lexical_angles([], 5)
        assert np.array_equal(out.theta, np.zeros(5))
        assert out.source == SOURCE_LEXICAL

    def test_bag_semantics(self):
        a = lexical_angles(["x", "y", "z"], 8).theta
        b = lexical_angles(["z", "x", "y"], 8).theta
        assert np.allclose(a, b)

    @given(st.lists(st.text(alphabet="abcdefgh", min_size=1, max_size=6), max_size=10),
           st.integers(min_value=1, max_value=16))
    @settings(max_examples=50, deadline=None)
    def test_range(self, tokens, d):
        out = lexical_angles(tokens, d)
        assert out.theta.shape == (d,)
        assert np.all(out.theta >= -np.pi) and np.all(out.theta <= np.pi)

    def test_deterministic_across_calls(self):
        assert np.array_equal(lexical_angles(["q"], 12).theta, lexical_angles(["q"], 12).theta)
