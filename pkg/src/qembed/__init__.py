"""Quantum-inspired text embedding workbench.

Pipeline: corpus segmentation -> window angle construction -> simulated
parameterized circuits -> 1024-d sub-chunk embeddings -> hybrid BM25 /
dense retrieval with score fusion -> metric and geometry diagnostics.
"""

__version__ = "0.1.0"
