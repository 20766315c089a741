"""Command-line orchestration.

Subcommands: ingest, build-axes, embed, index-bm25, index-vec, search,
eval, diag-pairwise, distill, kernel, fixtures. Every command writes a
run manifest into its output directory; errors leave a JSON envelope on
stderr and a nonzero exit code.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, angles, corpus, distill, embed, evalkit, fixtures, fusion, lexindex, qkernel, qsim, vecindex
from .errors import EmptyCorpus, QembedError


def _sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            h.update(block)
    return h.hexdigest()


def write_manifest(outdir: Path, command: str, cfg_fp: str, inputs: list, outputs: list, t0: float):
    manifest = {
        "command": command,
        "config_fingerprint": cfg_fp,
        "inputs": {str(p): _sha256_file(p) for p in inputs},
        "outputs": [str(p) for p in outputs],
        "wall_time_s": round(time.time() - t0, 3),
        "versions": {"qembed": __version__, "python": sys.version.split()[0], "numpy": np.__version__},
    }
    path = outdir / "manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
    return path


def load_pipeline_config(args) -> embed.PipelineConfig:
    base = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            base = json.load(fh)
    seg = corpus.SegmentationConfig(**base.get("segmentation", {}))
    circ_kwargs = dict(base.get("circuit", {}))
    for flag, key in (("qubits", "n_qubits"), ("layers", "n_layers"), ("shots", "shots"), ("seed", "seed")):
        val = getattr(args, flag, None)
        if val is not None:
            circ_kwargs[key] = val
    circ = qsim.CircuitConfig(**circ_kwargs)
    kwargs = {k: v for k, v in base.items() if k not in ("segmentation", "circuit")}
    for flag, key in (("angle_source", "angle_source"), ("channel", "channel"), ("qks", "qks_episodes"), ("multiscale", "multiscale")):
        val = getattr(args, flag, None)
        if val is not None:
            kwargs[key] = val
    return embed.PipelineConfig(segmentation=seg, circuit=circ, **kwargs)


# -------------------------------------------------------------------------
# segmented-corpus store (JSON Lines of sub-chunk records)

def write_subchunk_store(path, subs: list):
    with open(path, "w", encoding="utf-8") as fh:
        for s in subs:
            fh.write(json.dumps({
                "sub_id": s.sub_id,
                "doc_id": s.doc_id,
                "chunk_id": s.chunk_id,
                "tokens": list(s.tokens.tokens),
                "offsets": [list(o) for o in s.tokens.offsets],
                "token_span": list(s.token_span),
                "phase_shift": s.phase_shift,
            }, sort_keys=True) + "\n")


def read_subchunk_store(path) -> list:
    subs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            o = json.loads(line)
            seq = corpus.TokenSeq(tuple(o["tokens"]), tuple(tuple(x) for x in o["offsets"]))
            subs.append(corpus.SubChunk(o["sub_id"], o["doc_id"], o["chunk_id"], seq,
                                        tuple(o["token_span"]), o["phase_shift"]))
    return subs


# -------------------------------------------------------------------------
# commands

def cmd_ingest(args):
    t0 = time.time()
    cfg = load_pipeline_config(args)
    docs = corpus.read_documents(args.corpus)
    if not docs:
        raise EmptyCorpus(f"{args.corpus} contains no documents")
    subs = []
    for doc in sorted(docs, key=lambda d: d.doc_id):
        try:
            subs.extend(corpus.segment(doc, cfg.segmentation))
        except QembedError as exc:
            raise type(exc)(f"{exc} (doc_id={doc.doc_id})") from exc
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    store = outdir / "subchunks.jsonl"
    write_subchunk_store(store, subs)
    fp = embed.fingerprint(cfg)
    write_manifest(outdir, "ingest", fp.digest, [args.corpus], [store], t0)
    print(f"ingested {len(docs)} documents into {len(subs)} sub-chunks -> {store}")


def cmd_build_axes(args):
    t0 = time.time()
    subs = read_subchunk_store(args.store)
    ax = angles.build_axes((s.tokens.tokens for s in subs), d_max=args.d_max,
                           context=args.context, gamma=args.gamma)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "axes.bin"
    ax.save(path)
    if args.json_export:
        ax.export_json(outdir / "axes.json")
    write_manifest(outdir, "build-axes", "", [args.store], [path], t0)
    print(f"built axes over vocabulary of {len(ax.vocab)} -> {path}")


def _embed_sub_batch(subs, axes, cfg, jobs: int):
    obs = qsim.default_observables(cfg.circuit.n_qubits, cfg.F)
    if jobs <= 1:
        return [embed.embed_subchunk(s, axes, cfg, obs) for s in subs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        out = list(pool.map(_embed_worker, [(s, axes, cfg) for s in subs], chunksize=4))
    return out


def _embed_worker(payload):
    sub, axes, cfg = payload
    return embed.embed_subchunk(sub, axes, cfg)


def _group_multiscale_views(subs, axes, cfg):
    """Views of a base (phase-0) sub-chunk: itself plus overlapping shifted
    and dense-stride sub-chunks of the same chunk."""
    by_chunk = {}
    for s in subs:
        by_chunk.setdefault(s.chunk_id, []).append(s)
    dense_cfg = corpus.SegmentationConfig(
        chunk_tokens=cfg.segmentation.chunk_tokens,
        chunk_overlap=cfg.segmentation.chunk_overlap,
        sub_tokens=cfg.segmentation.sub_tokens,
        sub_stride=min(cfg.segmentation.dense_stride, cfg.segmentation.sub_tokens),
        window_tokens=cfg.segmentation.window_tokens,
    )
    groups = []
    for chunk_id, members in sorted(by_chunk.items()):
        base = [s for s in members if s.phase_shift == 0]
        shifted = [s for s in members if s.phase_shift != 0]
        for b in base:
            views = [b]
            for s in shifted:
                lo = max(b.token_span[0], s.token_span[0])
                hi = min(b.token_span[1], s.token_span[1])
                span = b.token_span[1] - b.token_span[0]
                if span > 0 and (hi - lo) >= 0.5 * span:
                    views.append(s)
            groups.append((b, views, dense_cfg))
    return groups


def cmd_embed(args):
    t0 = time.time()
    cfg = load_pipeline_config(args)
    subs = read_subchunk_store(args.store)
    if not subs:
        raise EmptyCorpus("sub-chunk store is empty")
    axes = angles.SemanticAxes.load(args.axes) if args.axes else None
    if cfg.angle_source == "eig" and axes is None:
        cfg_dict = cfg.to_dict()
        cfg_dict["angle_source"] = "lexical"
        cfg = embed.PipelineConfig(
            segmentation=cfg.segmentation, circuit=cfg.circuit,
            **{k: v for k, v in cfg_dict.items() if k not in ("segmentation", "circuit")})
    fp = embed.fingerprint(cfg)
    subs = sorted(subs, key=lambda s: s.sub_id)
    if cfg.multiscale:
        obs = qsim.default_observables(cfg.circuit.n_qubits, cfg.F)
        embeddings = []
        for base, views, _ in _group_multiscale_views(subs, axes, cfg):
            raws = [embed.raw_subchunk_vector(v, axes, cfg, obs) for v in views]
            embeddings.append(embed.multiscale_fuse(raws, base.sub_id, cfg.channel))
    else:
        embeddings = _embed_sub_batch(subs, axes, cfg, args.jobs)
    embeddings.sort(key=lambda e: e.owner_id)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    store = outdir / "embeddings.bin"
    embed.write_store(store, embeddings, fp)
    if args.jsonl_export:
        embed.write_jsonl(outdir / "embeddings.jsonl", embeddings)
    inputs = [args.store] + ([args.axes] if args.axes else [])
    write_manifest(outdir, "embed", fp.digest, inputs, [store], t0)
    print(f"embedded {len(embeddings)} sub-chunks (channel={cfg.channel}) -> {store}")


def cmd_index_bm25(args):
    t0 = time.time()
    subs = read_subchunk_store(args.store)
    if args.level == "doc":
        per_doc = {}
        for s in subs:
            if s.phase_shift == 0:
                per_doc.setdefault(s.doc_id, []).extend(s.tokens.tokens)
        units = sorted(per_doc.items())
    else:
        units = sorted((s.sub_id, list(s.tokens.tokens)) for s in subs if s.phase_shift == 0)
    index = lexindex.build(units, k1=args.k1, b=args.b)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "bm25.bin"
    index.save(path)
    write_manifest(outdir, "index-bm25", "", [args.store], [path], t0)
    print(f"indexed {index.N} units -> {path}")


def cmd_index_vec(args):
    t0 = time.time()
    records = embed.read_store(args.embeddings)
    if args.level == "doc":
        by_doc = {}
        for e in records:
            by_doc.setdefault(e.owner_id.split("/")[0], []).append(e)
        records = [embed.doc_embedding(v, d, v[0].channel) for d, v in sorted(by_doc.items())]
    with open(str(args.embeddings) + ".json", encoding="utf-8") as fh:
        fp = json.load(fh).get("fingerprint") or ""
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "vectors.bin"
    embed.write_store(path, records, embed.Fingerprint(fp, "") if fp else None)
    write_manifest(outdir, "index-vec", fp, [args.embeddings], [path], t0)
    print(f"wrote {len(records)} {args.level}-level vectors -> {path}")


def _embed_query_text(text: str, axes, cfg: embed.PipelineConfig):
    seq = corpus.tokenize(text)
    sub = corpus.SubChunk(f"query:{hashlib.sha1(text.encode()).hexdigest()[:8]}", "query", "query", seq, (0, len(seq)), 0)
    return embed.embed_subchunk(sub, axes, cfg)


def cmd_search(args):
    t0 = time.time()
    cfg = load_pipeline_config(args)
    axes = angles.SemanticAxes.load(args.axes) if args.axes else None
    if cfg.angle_source == "eig" and axes is None:
        raise QembedError("search with angle_source 'eig' requires --axes")
    bm25 = lexindex.Bm25Index.load(args.bm25)
    vidx = vecindex.VecIndex.from_embeddings(embed.read_store(args.vectors))
    queries = corpus.read_queries(args.queries)
    ce_scores = fusion.read_ce_scores(args.ce) if args.ce else None
    fcfg = fusion.FusionConfig(alpha=args.alpha, dynamic=args.dynamic_alpha,
                               rrf_k=args.rrf_k, top_k=args.top_k)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    run_path = outdir / "run.jsonl"
    cand_sets, relevant = {}, {}
    with open(run_path, "w", encoding="utf-8") as fh:
        for qid, text, rel in sorted(queries):
            qtokens = corpus.tokenize(text)
            bm25_hits = lexindex.score(bm25, qtokens, top_k=fcfg.top_k)
            qemb = _embed_query_text(text, axes, cfg)
            vec_hits = vecindex.search(vidx, qemb, top_k=fcfg.top_k)
            cands = fusion.candidate_union(bm25_hits, vec_hits, qid)
            cand_sets[qid] = cands
            relevant[qid] = rel
            if args.rrf:
                ranking = fusion.rrf([bm25_hits, vec_hits], k=fcfg.rrf_k)
                alpha_used = None
            elif fcfg.dynamic:
                alpha_used, ranking = fusion.dynamic_alpha(cands, fcfg.alpha)
            else:
                alpha_used = fcfg.alpha
                ranking = fusion.interpolate(cands, fcfg.alpha)
            applied = reason = None
            if ce_scores is not None:
                ranking, applied, reason = fusion.ce_rerank(ranking, ce_scores, qid,
                                                            top_k=fcfg.top_k, std_floor=fcfg.ce_std_floor)
            fh.write(fusion.run_record(qid, cands, ranking, alpha_used, applied, reason) + "\n")
    outputs = [run_path]
    if args.alpha_sweep:
        sweep = {}
        for a in fcfg.alpha_grid:
            rankings = {qid: fusion.interpolate(c, a) for qid, c in cand_sets.items()}
            judgments = [evalkit.QueryJudgment(q, relevant[q]) for q in rankings if relevant[q]]
            rep = evalkit.retrieval_metrics(rankings, judgments)
            rep.pop("per_query")
            sweep[str(a)] = rep
        oracle = fusion.alpha_oracle(cand_sets, relevant, fcfg.alpha_grid)
        sweep_path = outdir / "alpha_sweep.json"
        with open(sweep_path, "w", encoding="utf-8") as fh:
            json.dump({"grid": sweep, "oracle": oracle}, fh, indent=2)
        outputs.append(sweep_path)
    fp = embed.fingerprint(cfg)
    inputs = [args.queries, args.bm25, args.vectors] + ([args.axes] if args.axes else []) + ([args.ce] if args.ce else [])
    write_manifest(outdir, "search", fp.digest, inputs, outputs, t0)
    print(f"ran {len(queries)} queries -> {run_path}")


def cmd_eval(args):
    t0 = time.time()
    rankings = {}
    with open(args.run, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                rankings[rec["qid"]] = [(u, s) for u, s in rec["ranking"]]
    queries = corpus.read_queries(args.queries)
    judgments = [evalkit.QueryJudgment(qid, rel) for qid, _, rel in queries if rel]
    report = evalkit.retrieval_metrics(rankings, judgments)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    json_path = outdir / "metrics.json"
    evalkit.write_report_json(json_path, report)
    md_path = outdir / "metrics.md"
    with open(md_path, "w", encoding="utf-8") as fh:
        fh.write(evalkit.markdown_table({args.method: report}))
    write_manifest(outdir, "eval", "", [args.run, args.queries], [json_path, md_path], t0)
    print(evalkit.markdown_table({args.method: report}))


def cmd_diag_pairwise(args):
    t0 = time.time()
    pairs = evalkit.read_pairs_tsv(args.pairs)
    if args.embeddings:
        table = {e.owner_id: e.vec for e in embed.read_jsonl(args.embeddings)}
        lookup = table.__getitem__
    else:
        cfg = load_pipeline_config(args)
        axes = angles.SemanticAxes.load(args.axes) if args.axes else None
        if cfg.angle_source == "eig" and axes is None:
            sentences = sorted({p.sentence_a for p in pairs} | {p.sentence_b for p in pairs})
            axes_tokens = [corpus.tokenize(s).tokens for s in sentences]
            axes = angles.build_axes(axes_tokens, d_max=cfg.circuit.n_qubits)
        cache = {}

        def lookup(sentence):
            if sentence not in cache:
                cache[sentence] = _embed_query_text(sentence, axes, cfg).vec
            return cache[sentence]

    report = evalkit.pairwise_report(pairs, lookup)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    json_path = outdir / "pairwise.json"
    evalkit.write_report_json(json_path, report)
    hist_path = outdir / "histogram.csv"
    evalkit.write_histogram_csv(hist_path, report["histogram"])
    write_manifest(outdir, "diag-pairwise", "", [args.pairs], [json_path, hist_path], t0)
    print(f"pearson={report['pearson']:.4f} spearman={report['spearman']:.4f} "
          f"mae={report['mae']:.4f} mean_sim={report['mean_sim']:.4f}")


def cmd_distill(args):
    t0 = time.time()
    students = {e.owner_id: e.vec for e in embed.read_store(args.embeddings)}
    teacher = distill.TeacherSet.from_embeddings(embed.read_jsonl(args.teacher), args.teacher_tag)
    shared = sorted(set(students) & set(teacher.vectors))
    pairs = [(students[i], teacher.vectors[i]) for i in shared]
    if args.kind == "linear":
        head = distill.fit_linear(pairs, ridge=args.ridge)
    else:
        head = distill.fit_mlp(pairs, epochs=args.epochs, lr=args.lr, seed=args.seed)
    distilled = {i: distill.apply(head, students[i]).vec for i in shared}
    report = distill.alignment_report(distilled, teacher, seed=args.seed)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    head_path = outdir / "head.npz"
    head.save(outdir / "head")
    out_store = outdir / "distilled.bin"
    embed.write_store(out_store, [embed.Embedding(v, i, "distilled") for i, v in sorted(distilled.items())])
    with open(outdir / "alignment.json", "w", encoding="utf-8") as fh:
        json.dump({"report": report, "final_loss": head.meta["final_loss"], "kind": head.kind}, fh, indent=2)
    write_manifest(outdir, "distill", "", [args.embeddings, args.teacher], [head_path, out_store], t0)
    print(f"{head.kind} head: loss={head.meta['final_loss']:.6g} r={report['r']:.4f} mae={report['mae']:.4f}")


def cmd_kernel(args):
    t0 = time.time()
    records = embed.read_jsonl(args.embeddings) if str(args.embeddings).endswith(".jsonl") else embed.read_store(args.embeddings)
    records = sorted(records, key=lambda e: e.owner_id)[: args.max_items]
    ids = [e.owner_id for e in records]
    X = np.stack([e.vec for e in records])
    cfg = qsim.CircuitConfig(n_qubits=args.qubits, n_layers=args.layers)
    pca = qkernel.fit_pca(X, d=cfg.n_qubits)
    km = qkernel.encode_and_kernel(X, pca, cfg, ids)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / "kernel.csv"
    km.to_csv(csv_path)
    outputs = [csv_path]
    if args.reference == "cosine":
        ref = X @ X.T
        diag = qkernel.kernel_diagnostics(km, ref)
        diag_path = outdir / "kernel_diagnostics.json"
        evalkit.write_report_json(diag_path, diag)
        outputs.append(diag_path)
    write_manifest(outdir, "kernel", "", [args.embeddings], outputs, t0)
    print(f"kernel over {len(ids)} items -> {csv_path}")


def cmd_fixtures(args):
    t0 = time.time()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    docs = fixtures.make_corpus(n_docs=args.docs, tokens_per_doc=args.tokens, seed=args.seed)
    queries = fixtures.make_queries(docs, n_queries=args.queries, seed=args.seed + 1)
    pairs = fixtures.make_pairs(seed=args.seed + 2)
    fixtures.write_corpus_jsonl(outdir / "corpus.jsonl", docs)
    fixtures.write_queries_jsonl(outdir / "queries.jsonl", queries)
    fixtures.write_pairs_tsv(outdir / "pairs.tsv", pairs)
    teacher = fixtures.planted_teacher_vectors(pairs)
    embed.write_jsonl(outdir / "teacher_pairs.jsonl",
                      [embed.Embedding(v, k, "teacher") for k, v in teacher.items()])
    write_manifest(outdir, "fixtures", "", [], [outdir / "corpus.jsonl"], t0)
    print(f"fixtures written to {outdir}")


# -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qembed", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_pipeline_flags(sp):
        sp.add_argument("--config", help="JSON pipeline config file")
        sp.add_argument("--qubits", type=int, default=None)
        sp.add_argument("--layers", type=int, default=None)
        sp.add_argument("--shots", type=int, default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--angle-source", dest="angle_source", choices=["eig", "lexical"], default=None)
        sp.add_argument("--channel", choices=list(embed.CHANNELS), default=None)
        sp.add_argument("--qks", type=int, default=None, help="QKS episodes (0 = off)")
        sp.add_argument("--multiscale", action="store_const", const=True, default=None)

    sp = sub.add_parser("ingest", help="segment a JSONL corpus into sub-chunks")
    sp.add_argument("--corpus", required=True)
    sp.add_argument("--outdir", required=True)
    add_pipeline_flags(sp)
    sp.set_defaults(func=cmd_ingest)

    sp = sub.add_parser("build-axes", help="build semantic axes from a sub-chunk store")
    sp.add_argument("--store", required=True)
    sp.add_argument("--outdir", required=True)
    sp.add_argument("--d-max", dest="d_max", type=int, default=64)
    sp.add_argument("--context", type=int, default=5)
    sp.add_argument("--gamma", type=float, default=1.0)
    sp.add_argument("--json-export", dest="json_export", action="store_true")
    sp.set_defaults(func=cmd_build_axes)

    sp = sub.add_parser("embed", help="embed a sub-chunk store")
    sp.add_argument("--store", required=True)
    sp.add_argument("--axes", default=None)
    sp.add_argument("--outdir", required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--jsonl-export", dest="jsonl_export", action="store_true")
    add_pipeline_flags(sp)
    sp.set_defaults(func=cmd_embed)

    sp = sub.add_parser("index-bm25", help="build the BM25 index")
    sp.add_argument("--store", required=True)
    sp.add_argument("--outdir", required=True)
    sp.add_argument("--level", choices=["doc", "sub"], default="doc")
    sp.add_argument("--k1", type=float, default=1.2)
    sp.add_argument("--b", type=float, default=0.75)
    sp.set_defaults(func=cmd_index_bm25)

    sp = sub.add_parser("index-vec", help="materialize the vector index store")
    sp.add_argument("--embeddings", required=True)
    sp.add_argument("--outdir", required=True)
    sp.add_argument("--level", choices=["doc", "sub"], default="doc")
    sp.set_defaults(func=cmd_index_vec)

    sp = sub.add_parser("search", help="hybrid retrieval over the indexes")
    sp.add_argument("--queries", required=True)
    sp.add_argument("--bm25", required=True)
    sp.add_argument("--vectors", required=True)
    sp.add_argument("--axes", default=None)
    sp.add_argument("--outdir", required=True)
    sp.add_argument("--alpha", type=float, default=0.7)
    sp.add_argument("--dynamic-alpha", dest="dynamic_alpha", action="store_true")
    sp.add_argument("--rrf", action="store_true", help="use RRF instead of interpolation")
    sp.add_argument("--rrf-k", dest="rrf_k", type=int, default=60)
    sp.add_argument("--top-k", dest="top_k", type=int, default=10)
    sp.add_argument("--alpha-sweep", dest="alpha_sweep", action="store_true")
    sp.add_argument("--ce", default=None, help="cross-encoder scores TSV")
    add_pipeline_flags(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("eval", help="score a run against judgments")
    sp.add_argument("--run", required=True)
    sp.add_argument("--queries", required=True)
    sp.add_argument("--outdir", required=True)
    sp.add_argument("--method", default="hybrid")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("diag-pairwise", help="pairwise similarity diagnostics")
    sp.add_argument("--pairs", required=True)
    sp.add_argument("--outdir", required=True)
    sp.add_argument("--embeddings", default=None, help="JSONL embeddings keyed by sentence")
    sp.add_argument("--axes", default=None)
    add_pipeline_flags(sp)
    sp.set_defaults(func=cmd_diag_pairwise)

    sp = sub.add_parser("distill", help="fit an alignment head against teacher vectors")
    sp.add_argument("--embeddings", required=True)
    sp.add_argument("--teacher", required=True, help="teacher JSONL")
    sp.add_argument("--teacher-tag", dest="teacher_tag", default="")
    sp.add_argument("--outdir", required=True)
    sp.add_argument("--kind", choices=["linear", "mlp"], default="linear")
    sp.add_argument("--ridge", type=float, default=1e-3)
    sp.add_argument("--epochs", type=int, default=50)
    sp.add_argument("--lr", type=float, default=0.05)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_distill)

    sp = sub.add_parser("kernel", help="quantum-kernel diagnostic")
    sp.add_argument("--embeddings", required=True)
    sp.add_argument("--outdir", required=True)
    sp.add_argument("--qubits", type=int, default=4)
    sp.add_argument("--layers", type=int, default=2)
    sp.add_argument("--max-items", dest="max_items", type=int, default=20)
    sp.add_argument("--reference", choices=["cosine", "none"], default="cosine")
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("fixtures", help="emit synthetic corpora/queries/pairs")
    sp.add_argument("--outdir", required=True)
    sp.add_argument("--docs", type=int, default=10)
    sp.add_argument("--tokens", type=int, default=1000)
    sp.add_argument("--queries", type=int, default=20)
    sp.add_argument("--seed", type=int, default=7)
    sp.set_defaults(func=cmd_fixtures)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except QembedError as exc:
        json.dump({"error": exc.code, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except (OSError, ValueError, KeyError) as exc:
        json.dump({"error": "invalid_input", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
