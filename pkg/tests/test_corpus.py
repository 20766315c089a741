import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qembed import corpus
from qembed.corpus import Document, SegmentationConfig, segment, tokenize, windows_of
from qembed.errors import EmptyText


def make_doc(n_tokens, doc_id="d"):
    return Document(doc_id, " ".join(f"w{i}" for i in range(n_tokens)))


class TestTokenize:
    def test_lowercase_punct_split(self):
        assert tokenize("La Corte di Cassazione.").tokens == ("la", "corte", "di", "cassazione")

    def test_empty_raises(self):
        with pytest.raises(EmptyText):
            tokenize("")
        with pytest.raises(EmptyText):
            tokenize("?!... ---")

    def test_offsets_roundtrip(self):
        text = "Hello, wörld! Ångström 42 più."
        seq = tokenize(text)
        for tok, (a, b) in zip(seq.tokens, seq.offsets):
            assert text[a:b].lower() == tok

    def test_offsets_strictly_increasing(self):
        seq = tokenize("a b c d")
        for (a1, b1), (a2, b2) in zip(seq.offsets, seq.offsets[1:]):
            assert b1 <= a2 and a1 < b1

    def test_deterministic(self):
        assert tokenize("Uno due tre") == tokenize("Uno due tre")


def chunk_starts_oracle(n, chunk_tokens, overlap):
    # enumerate starts at step chunk_tokens - overlap, then apply the
    # tail rule (>= 25% of nominal size, or needed for coverage)
    step = chunk_tokens - overlap
    starts, covered = [], 0
    for s in range(0, n, step):
        length = min(s + chunk_tokens, n) - s
        if s == 0 or length == chunk_tokens or length >= 0.25 * chunk_tokens or s + length > covered:
            starts.append(s)
            covered = max(covered, s + length)
    return starts


class TestSegment:
    def test_chunk_starts_1000_tokens(self):
        # 384/64 gives step 320; the 40-token tail at 960 is below the 25%
        # keep threshold and already covered by the chunk at 640
        cfg = SegmentationConfig(chunk_tokens=384, chunk_overlap=64, sub_tokens=384, sub_stride=384)
        subs = segment(make_doc(1000), cfg)
        starts = sorted(int(s.tokens.tokens[0][1:]) for s in subs)
        assert starts == chunk_starts_oracle(1000, 384, 64) == [0, 320, 640]

    def test_short_doc_single_subchunk(self):
        cfg = SegmentationConfig(sub_tokens=256, sub_stride=179)
        subs = segment(make_doc(100), cfg)
        assert len(subs) == 1
        assert len(subs[0].tokens) == 100

    def test_two_phase_shift(self):
        cfg = SegmentationConfig(chunk_tokens=384, chunk_overlap=64, sub_tokens=256,
                                 sub_stride=179, two_phase_shift=8)
        subs = segment(make_doc(384), cfg)
        p0 = sorted(s.token_span[0] for s in subs if s.phase_shift == 0)
        p1 = sorted(s.token_span[0] for s in subs if s.phase_shift == 8)
        assert p1 == [s + 8 for s in p0[: len(p1)]]
        assert all(s.phase_shift in (0, 8) for s in subs)

    def test_consecutive_chunks_share_overlap(self):
        cfg = SegmentationConfig(chunk_tokens=100, chunk_overlap=20, sub_tokens=100, sub_stride=100)
        subs = segment(make_doc(260), cfg)
        chunks = {}
        for s in subs:
            chunks.setdefault(s.chunk_id, []).append(s)
        # chunk i starts at 80*i; consecutive chunks share exactly 20 tokens
        firsts = sorted(min(x.tokens.tokens[0] for x in v) for v in chunks.values())
        assert firsts == ["w0", "w160", "w80"]

    def test_coverage_union(self):
        cfg = SegmentationConfig(chunk_tokens=64, chunk_overlap=0, sub_tokens=64, sub_stride=64)
        n = 100  # 36-token tail is > 25% of 64 -> kept
        subs = segment(make_doc(n), cfg)
        seen = set()
        for s in subs:
            seen.update(s.tokens.tokens)
        assert seen == {f"w{i}" for i in range(n)}

    def test_determinism(self):
        cfg = SegmentationConfig()
        doc = make_doc(900)
        assert segment(doc, cfg) == segment(doc, cfg)

    @given(st.integers(min_value=1, max_value=1200))
    @settings(max_examples=30, deadline=None)
    def test_coverage_property(self, n):
        cfg = SegmentationConfig(chunk_tokens=128, chunk_overlap=32, sub_tokens=96, sub_stride=64)
        subs = segment(make_doc(n), cfg)
        seen = set()
        for s in subs:
            seen.update(s.tokens.tokens)
        assert seen == {f"w{i}" for i in range(n)}


class TestWindows:
    def test_exact_division(self):
        cfg = SegmentationConfig(sub_tokens=256, sub_stride=256)
        sub = segment(make_doc(256), cfg)[0]
        ws = windows_of(sub, 16)
        assert len(ws) == 16
        assert all(len(w.tokens) == 16 for w in ws)

    def test_ceil_division(self):
        cfg = SegmentationConfig(sub_tokens=256, sub_stride=256)
        sub = segment(make_doc(250), cfg)[0]
        ws = windows_of(sub, 16)
        assert len(ws) == math.ceil(250 / 16) == 16
        assert len(ws[-1].tokens) == 10

    def test_single_window(self):
        cfg = SegmentationConfig(sub_tokens=256, sub_stride=256)
        sub = segment(make_doc(5), cfg)[0]
        ws = windows_of(sub, 16)
        assert len(ws) == 1
        assert len(ws[0].tokens) == 5

    @given(st.integers(min_value=1, max_value=400), st.integers(min_value=1, max_value=64))
    @settings(max_examples=40, deadline=None)
    def test_window_lengths_sum(self, n, wt):
        cfg = SegmentationConfig(sub_tokens=512, sub_stride=512)
        sub = segment(make_doc(n), cfg)[0]
        ws = windows_of(sub, wt)
        assert sum(len(w.tokens) for w in ws) == len(sub.tokens)
        assert len(ws) == math.ceil(len(sub.tokens) / wt)


class TestConfigValidation:
    def test_bad_overlap(self):
        with pytest.raises(ValueError):
            SegmentationConfig(chunk_tokens=100, chunk_overlap=100)

    def test_bad_stride(self):
        with pytest.raises(ValueError):
            SegmentationConfig(sub_tokens=10, sub_stride=11)

    def test_negative_shift(self):
        with pytest.raises(ValueError):
            SegmentationConfig(two_phase_shift=-1)


def test_read_documents_roundtrip(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text('{"doc_id":"a","text":"uno due","lang":"it"}\n{"doc_id":"b","text":"tre","lang":"it"}\n')
    docs = corpus.read_documents(p)
    assert [d.doc_id for d in docs] == ["a", "b"]
    assert docs[0].lang == "it"


def test_read_documents_duplicate_id(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text('{"doc_id":"a","text":"x"}\n{"doc_id":"a","text":"y"}\n')
    with pytest.raises(ValueError):
        corpus.read_documents(p)
