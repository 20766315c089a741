import json

import numpy as np
import pytest

from teacher_export import cli
from teacher_export.exporter import (
    ExportJob,
    HashEncoder,
    ModelLoadError,
    cross_encode,
    export,
    make_encoder,
    read_units,
    truncate,
)


@pytest.fixture()
def corpus_jsonl(tmp_path):
    p = tmp_path / "corpus.jsonl"
    rows = [{"doc_id": f"doc{i}", "text": f"testo del documento {i} " * 5, "lang": "it"}
            for i in range(7)]
    p.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
    return p


class TestReadUnits:
    def test_documents(self, corpus_jsonl):
        units = read_units(corpus_jsonl)
        assert len(units) == 7
        assert units[0][0] == "doc0" and "documento 0" in units[0][1]

    def test_subchunks(self, tmp_path):
        p = tmp_path / "subs.jsonl"
        p.write_text(json.dumps({"sub_id": "d/c0/s0", "doc_id": "d",
                                 "tokens": ["uno", "due"]}) + "\n")
        assert read_units(p) == [("d/c0/s0", "uno due")]

    def test_queries(self, tmp_path):
        p = tmp_path / "q.jsonl"
        p.write_text(json.dumps({"qid": "q1", "text": "cosa dice"}) + "\n")
        assert read_units(p) == [("q1", "cosa dice")]

    def test_pairs_tsv_dedup(self, tmp_path):
        p = tmp_path / "pairs.tsv"
        p.write_text("frase a\tfrase b\t0.9\tsim\nfrase a\tfrase c\t0.2\tdissim\n")
        units = read_units(p)
        assert [u for u, _ in units] == ["frase a", "frase b", "frase c"]
        assert all(uid == text for uid, text in units)

    def test_unknown_schema(self, tmp_path):
        p = tmp_path / "x.jsonl"
        p.write_text('{"foo": 1}\n')
        with pytest.raises(ValueError):
            read_units(p)


class TestTruncate:
    def test_short_unchanged(self):
        assert truncate("a b c", 512) == "a b c"

    def test_long_cut(self):
        text = " ".join(f"w{i}" for i in range(600))
        out = truncate(text, 512)
        assert len(out.split()) == 512 and out.split()[-1] == "w511"


class TestExport:
    def test_contract(self, corpus_jsonl, tmp_path):
        out = tmp_path / "teacher.jsonl"
        job = ExportJob(str(corpus_jsonl), str(out), model="hash")
        n = export(job)
        assert n == 7
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 7
        for line in lines:
            rec = json.loads(line)
            assert rec["channel"] == "teacher"
            vec = np.asarray(rec["vec"])
            assert vec.shape == (1024,)
            assert abs(np.linalg.norm(vec) - 1.0) < 1e-5

    def test_deterministic(self, corpus_jsonl, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        export(ExportJob(str(corpus_jsonl), str(a), model="hash"))
        export(ExportJob(str(corpus_jsonl), str(b), model="hash"))
        assert a.read_bytes() == b.read_bytes()

    def test_role_prefix_changes_vectors_and_meta(self, corpus_jsonl, tmp_path):
        p_out = tmp_path / "p.jsonl"
        q_out = tmp_path / "q.jsonl"
        export(ExportJob(str(corpus_jsonl), str(p_out), model="hash", role="passage"))
        export(ExportJob(str(corpus_jsonl), str(q_out), model="hash", role="query"))
        pv = json.loads(p_out.read_text().splitlines()[0])["vec"]
        qv = json.loads(q_out.read_text().splitlines()[0])["vec"]
        assert pv != qv
        meta = json.loads((tmp_path / "q.jsonl.meta.json").read_text())
        assert meta["prefix"] == "query: " and meta["records"] == 7

    def test_batching_invariant(self, corpus_jsonl, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        export(ExportJob(str(corpus_jsonl), str(a), model="hash", batch=2))
        export(ExportJob(str(corpus_jsonl), str(b), model="hash", batch=100))
        assert a.read_bytes() == b.read_bytes()

    def test_bad_role(self):
        with pytest.raises(ValueError):
            ExportJob("in", "out", role="document")


class TestEncoders:
    def test_hash_encoder_unit_norm(self):
        enc = HashEncoder()
        V = enc.encode(["alpha", "beta", "alpha"])
        assert np.allclose(np.linalg.norm(V, axis=1), 1.0, atol=1e-12)
        assert np.array_equal(V[0], V[2])
        assert not np.allclose(V[0], V[1])

    def test_make_encoder_hash(self):
        assert isinstance(make_encoder("hash"), HashEncoder)

    def test_model_load_failure(self):
        with pytest.raises(ModelLoadError):
            make_encoder("no-such-org/no-such-model-xyz")


class TestCrossEncode:
    def test_tsv_rows(self, corpus_jsonl, tmp_path):
        q = tmp_path / "queries.jsonl"
        q.write_text(json.dumps({"qid": "q1", "text": "documento"}) + "\n")
        out = tmp_path / "ce.tsv"
        n = cross_encode(q, corpus_jsonl, out, HashEncoder())
        assert n == 7
        rows = [line.split("\t") for line in out.read_text().strip().splitlines()]
        assert all(r[0] == "q1" and -1.0 <= float(r[2]) <= 1.0 for r in rows)


class TestCli:
    def test_end_to_end(self, corpus_jsonl, tmp_path, capsys):
        out = tmp_path / "t.jsonl"
        rc = cli.main(["--input", str(corpus_jsonl), "--output", str(out),
                       "--model", "hash"])
        assert rc == 0
        assert "exported 7 records" in capsys.readouterr().out
        assert len(out.read_text().strip().splitlines()) == 7

    def test_error_exit(self, tmp_path, capsys):
        rc = cli.main(["--input", str(tmp_path / "missing.jsonl"),
                       "--output", str(tmp_path / "o.jsonl"), "--model", "hash"])
        assert rc == 2
        assert "error:" in capsys.readouterr().err
