import numpy as np
import pytest

from qembed.embed import Embedding
from qembed.errors import ChannelMismatch, MappingError
from qembed.vecindex import VecIndex, doc_score_from_subchunks, search


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def make_index(n=8, d=16, seed=0, channel="current", prefix="e"):
    rng = np.random.default_rng(seed)
    embs = [Embedding(unit(rng.normal(size=d)), f"{prefix}{i}", channel) for i in range(n)]
    return embs, VecIndex.from_embeddings(embs)


class TestBuild:
    def test_rows_and_ids(self):
        embs, idx = make_index()
        assert idx.ids == [e.owner_id for e in embs]
        assert np.allclose(np.linalg.norm(idx.matrix, axis=1), 1.0)

    def test_rejects_non_unit(self):
        with pytest.raises(ValueError):
            VecIndex.from_embeddings([Embedding(np.array([1.0, 1.0]), "a")])

    def test_rejects_duplicate_id(self):
        e = Embedding(np.array([1.0, 0.0]), "a")
        with pytest.raises(ValueError):
            VecIndex.from_embeddings([e, e])

    def test_rejects_channel_mix(self):
        a = Embedding(np.array([1.0, 0.0]), "a", "current")
        b = Embedding(np.array([0.0, 1.0]), "b", "distilled")
        with pytest.raises(ChannelMismatch):
            VecIndex.from_embeddings([a, b])


class TestSearch:
    def test_argsort_oracle(self):
        embs, idx = make_index(n=20, seed=1)
        rng = np.random.default_rng(2)
        q = unit(rng.normal(size=16))
        got = search(idx, q, top_k=20)
        scores = idx.matrix @ q
        want = sorted(zip(idx.ids, scores), key=lambda x: (-x[1], x[0]))
        assert [u for u, _ in got] == [u for u, _ in want]
        assert np.allclose([s for _, s in got], [s for _, s in want])

    def test_prefix_property(self):
        # top-k is always a prefix of top-(k+1)
        embs, idx = make_index(n=15, seed=3)
        q = unit(np.random.default_rng(4).normal(size=16))
        full = search(idx, q, top_k=15)
        for k in range(1, 15):
            assert search(idx, q, top_k=k) == full[:k]

    def test_self_query_top1(self):
        embs, idx = make_index(seed=5)
        got = search(idx, embs[3], top_k=1)
        assert got[0][0] == embs[3].owner_id
        assert got[0][1] == pytest.approx(1.0)

    def test_tie_break_ascending_id(self):
        v = unit([1.0, 1.0])
        idx = VecIndex.from_embeddings([Embedding(v, "b"), Embedding(v, "a")])
        got = search(idx, v, top_k=2)
        assert [u for u, _ in got] == ["a", "b"]

    def test_channel_mismatch_query(self):
        embs, idx = make_index(seed=6)
        q = Embedding(embs[0].vec, "q", "distilled")
        with pytest.raises(ChannelMismatch):
            search(idx, q)

    def test_raw_vector_query_skips_channel_check(self):
        embs, idx = make_index(seed=7)
        assert len(search(idx, embs[0].vec, top_k=3)) == 3


class TestDocAggregation:
    def setup_method(self):
        rng = np.random.default_rng(8)
        self.embs = [Embedding(unit(rng.normal(size=8)), f"s{i}") for i in range(6)]
        self.idx = VecIndex.from_embeddings(self.embs)
        self.doc_of = {f"s{i}": f"d{i // 2}" for i in range(6)}
        self.q = unit(rng.normal(size=8))

    def test_max_aggregation(self):
        got = dict(doc_score_from_subchunks(self.idx, self.q, self.doc_of))
        scores = self.idx.matrix @ self.q
        for d in ("d0", "d1", "d2"):
            subs = [i for i in range(6) if self.doc_of[f"s{i}"] == d]
            assert got[d] == pytest.approx(max(scores[i] for i in subs))

    def test_mean_aggregation(self):
        got = dict(doc_score_from_subchunks(self.idx, self.q, self.doc_of, agg="mean"))
        scores = self.idx.matrix @ self.q
        for d in ("d0", "d1", "d2"):
            subs = [i for i in range(6) if self.doc_of[f"s{i}"] == d]
            assert got[d] == pytest.approx(np.mean([scores[i] for i in subs]))

    def test_missing_mapping(self):
        with pytest.raises(MappingError):
            doc_score_from_subchunks(self.idx, self.q, {"s0": "d0"})

    def test_bad_agg(self):
        with pytest.raises(ValueError):
            doc_score_from_subchunks(self.idx, self.q, self.doc_of, agg="median")

    def test_descending_order(self):
        got = doc_score_from_subchunks(self.idx, self.q, self.doc_of)
        assert all(a[1] >= b[1] for a, b in zip(got, got[1:]))
