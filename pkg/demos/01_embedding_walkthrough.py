"""Walkthrough: from raw text to a 1024-d embedding.

Runs the whole window pipeline on a tiny corpus at reduced circuit size so
every intermediate object is small enough to print and inspect.
"""

import numpy as np

from qembed import angles, corpus, embed, qsim
from qembed.corpus import Document, SegmentationConfig
from qembed.embed import PipelineConfig
from qembed.qsim import CircuitConfig

texts = [
    "la corte di cassazione ha stabilito che il ricorso era inammissibile",
    "il tribunale ha accolto la domanda di risarcimento del danno",
    "la corte di appello ha confermato la sentenza di primo grado",
]

# 1. tokenize and segment ---------------------------------------------------
seg = SegmentationConfig(chunk_tokens=16, chunk_overlap=4, sub_tokens=12,
                         sub_stride=8, window_tokens=4)
docs = [Document(f"doc{i}", t) for i, t in enumerate(texts)]
subs = [s for d in docs for s in corpus.segment(d, seg)]
print(f"{len(docs)} documents -> {len(subs)} sub-chunks")
print("first sub-chunk:", subs[0].sub_id, subs[0].tokens.tokens)

# 2. semantic axes from co-occurrence SVD ----------------------------------
cfg = PipelineConfig(segmentation=seg, circuit=CircuitConfig(n_qubits=4, n_layers=2),
                     W=4, F=16)
axes = angles.build_axes([corpus.tokenize(t).tokens for t in texts],
                         d_max=cfg.circuit.n_qubits)
print(f"\naxes: vocabulary {len(axes.vocab)}, {axes.E.shape[1]} dimensions")

# 3. one window -> angles -> circuit -> features ----------------------------
window = corpus.windows_of(subs[0], seg.window_tokens)[0]
theta = angles.eig_angles(window.tokens.tokens, axes, cfg.circuit.n_qubits)
print("\nwindow tokens:", window.tokens.tokens)
print("angles (clipped to [-pi, pi]):", np.round(theta.theta, 3))

psi = qsim.ansatz_state(theta.theta, cfg.circuit)
obs = qsim.default_observables(cfg.circuit.n_qubits, cfg.F)
features = qsim.expectations(psi, obs)
print(f"statevector norm {np.linalg.norm(psi):.12f}; "
      f"{len(features)} Pauli expectations in [{features.min():.3f}, {features.max():.3f}]")

# 4. full sub-chunk embedding ----------------------------------------------
e = embed.embed_subchunk(subs[0], axes, cfg)
print(f"\nembedding: dim {e.vec.size} (W*F = {cfg.W}*{cfg.F}), "
      f"norm {np.linalg.norm(e.vec):.12f}")

# 5. the config fingerprint pins all of the above ---------------------------
fp = embed.fingerprint(cfg)
print("config fingerprint:", fp.digest[:16], "...")
