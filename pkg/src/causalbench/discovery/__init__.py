"""Native causal discovery algorithms and the synthetic SEM generator."""

from causalbench.discovery.ci import CiError, CiParams, CiVerdict, fisher_z_test, partial_correlation
from causalbench.discovery.ges import GesError, GesOp, GesParams, GesResult, bic_from_rss, bic_local, run_ges
from causalbench.discovery.lingam import (
    FastIcaResult,
    LingamError,
    LingamResult,
    fast_ica,
    run_ica_lingam,
)
from causalbench.discovery.pc import PcResult, orient_pc, pc_skeleton, run_pc
from causalbench.discovery.sem import SemSample, SemSpec, generate_sem

BUILTIN_ALGORITHMS = ("pc", "ges", "ica-lingam")

# schemas drive CLI/API/UI config forms
PARAMETER_SCHEMAS = {
    "pc": {
        "name": "pc",
        "params": [
            {"name": "alpha", "type": "float", "default": 0.05, "min": 1e-6, "max": 0.999999},
        ],
    },
    "ges": {
        "name": "ges",
        "params": [
            {"name": "penalty_discount", "type": "float", "default": 1.0, "min": 1e-9},
            {"name": "max_parents", "type": "int", "default": 8, "min": 1},
        ],
    },
    "ica-lingam": {
        "name": "ica-lingam",
        "params": [
            {"name": "prune_threshold", "type": "float", "default": 0.05, "min": 0.0},
            {"name": "max_iter", "type": "int", "default": 200, "min": 1},
            {"name": "restarts", "type": "int", "default": 5, "min": 1},
        ],
    },
}

__all__ = [
    "BUILTIN_ALGORITHMS",
    "PARAMETER_SCHEMAS",
    "CiError",
    "CiParams",
    "CiVerdict",
    "FastIcaResult",
    "GesError",
    "GesOp",
    "GesParams",
    "GesResult",
    "LingamError",
    "LingamResult",
    "PcResult",
    "SemSample",
    "SemSpec",
    "bic_from_rss",
    "bic_local",
    "fast_ica",
    "fisher_z_test",
    "generate_sem",
    "orient_pc",
    "partial_correlation",
    "pc_skeleton",
    "run_ica_lingam",
    "run_pc",
    "run_ges",
]
