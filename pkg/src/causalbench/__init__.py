"""Causal discovery benchmarking toolkit.

Library layers:

- :mod:`causalbench.graphs` - mixed-graph model, d-separation, Meek/CPDAG machinery
- :mod:`causalbench.ingest` - typed CSV/XLSX ingestion and preprocessing
- :mod:`causalbench.discovery` - PC, GES, ICA-LiNGAM and the synthetic SEM generator
- :mod:`causalbench.metrics` - SHD, SID, TPR/FPR, AUC and evaluation reports
- :mod:`causalbench.plugins` - uploaded algorithm/metric bundles run in subprocesses
- :mod:`causalbench.service` - on-disk store, run orchestration, HTTP API
"""

from causalbench.graphs import (
    GraphStats,
    Mark,
    MixedGraph,
    WeightedGraph,
    cpdag_of,
    d_separated,
    descendants,
    graph_stats,
    meek_close,
    read_adjacency_csv,
    v_structures,
    write_adjacency_csv,
)

__all__ = [
    "GraphStats",
    "Mark",
    "MixedGraph",
    "WeightedGraph",
    "cpdag_of",
    "d_separated",
    "descendants",
    "graph_stats",
    "meek_close",
    "read_adjacency_csv",
    "v_structures",
    "write_adjacency_csv",
]

__version__ = "0.1.0"
