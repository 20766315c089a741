"""Distance-compression diagnostic.

Circuit-expectation embeddings tend to concentrate pairwise cosines near a
single high value, destroying ranking contrast. This demo embeds a fixture
pair set through the pipeline and compares its similarity histogram with a
planted reference whose cosines equal the annotated scores exactly.
"""

import numpy as np

from qembed import angles, corpus, embed, fixtures, qsim
from qembed.embed import PipelineConfig
from qembed.evalkit import similarity_histogram

cfg = PipelineConfig()  # production size: 12 qubits, 4 layers, 16*64 = 1024
pairs = fixtures.make_pairs(seed=23)
teacher = fixtures.planted_teacher_vectors(pairs)

sentences = sorted({a for a, _, _, _ in pairs} | {b for _, b, _, _ in pairs})
axes = angles.build_axes([corpus.tokenize(s).tokens for s in sentences],
                         d_max=cfg.circuit.n_qubits)
obs = qsim.default_observables(cfg.circuit.n_qubits, cfg.F)

cache = {}
def pipeline_vec(text):
    if text not in cache:
        seq = corpus.tokenize(text)
        sub = corpus.SubChunk("s", "s", "s", seq, (0, len(seq)), 0)
        cache[text] = embed.embed_subchunk(sub, axes, cfg, obs).vec
    return cache[text]

pipe_cos = [float(pipeline_vec(a) @ pipeline_vec(b)) for a, b, _, _ in pairs]
ref_cos = [float(teacher[a] @ teacher[b]) for a, b, _, _ in pairs]


def sketch(name, values):
    hist = similarity_histogram(values)
    bar = "".join("#" if c else "." for _, c in hist)
    mass = np.mean(np.asarray(values) > 0.5)
    print(f"{name:9s} [-1 {bar} +1]  mass>0.5: {mass:.0%}  "
          f"mean {np.mean(values):.3f}  spread {np.std(values):.3f}")


print(f"{len(pairs)} sentence pairs across regimes sim/neutral/dissim\n")
sketch("pipeline", pipe_cos)
sketch("planted", ref_cos)
print("\nThe pipeline channel piles its mass into a narrow high-similarity band")
print("while the planted reference spreads across the annotated score range.")
