"""ICA-based linear non-Gaussian causal discovery.

Pipeline: FastICA unmixing -> row permutation with a dominant diagonal ->
coefficient matrix B = I - W' -> causal order minimizing the upper-triangular
mass of permuted B -> pruning. Permutation searches are exhaustive up to 8
columns and fall back to assignment/masking heuristics above that.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import permutations

import numpy as np
from scipy.optimize import linear_sum_assignment

from causalbench.graphs import WeightedGraph
from causalbench.ingest import Dataset

log = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 8


class LingamError(ValueError):
    code = "lingam_error"


@dataclass(frozen=True)
class FastIcaResult:
    unmixing: np.ndarray  # sources = X_centered @ unmixing.T
    converged: bool
    iterations: int


@dataclass(frozen=True)
class LingamResult:
    causal_order: tuple[str, ...]
    weights: WeightedGraph
    prune_threshold: float
    converged: bool


def fast_ica(
    data: np.ndarray,
    max_iter: int = 200,
    tol: float = 1e-6,
    restarts: int = 5,
    seed: int = 42,
) -> FastIcaResult:
    """Deflation fixed-point ICA with a tanh contrast.

    Data is centered and whitened first. Each component is iterated until the
    direction stabilizes (|<w_new, w_old>| > 1 - tol) and re-initialized up to
    `restarts` times on non-convergence; the best-effort result is returned
    with the flag cleared when any component failed to converge.
    """
    x = np.asarray(data, dtype=float)
    n, p = x.shape
    if n <= p:
        raise LingamError(f"need more samples ({n}) than columns ({p})")
    x = x - x.mean(axis=0)
    cov = (x.T @ x) / n
    eigvals, eigvecs = np.linalg.eigh(cov)
    floor = 1e-12
    if np.any(eigvals < floor):
        log.warning("near-singular covariance in ICA whitening; flooring eigenvalues")
        eigvals = np.maximum(eigvals, floor)
    whiten = (eigvecs / np.sqrt(eigvals)).T  # rows scale the principal axes
    z = x @ whiten.T

    rng = np.random.default_rng(seed)
    rows: list[np.ndarray] = []
    converged_all = True
    total_iters = 0
    for _ in range(p):
        w_best = None
        ok = False
        for _attempt in range(restarts):
            w = rng.standard_normal(p)
            w = _project(w, rows)
            w /= np.linalg.norm(w)
            for _it in range(max_iter):
                total_iters += 1
                u = z @ w
                g = np.tanh(u)
                g_prime = 1.0 - g**2
                w_new = (z.T @ g) / n - g_prime.mean() * w
                w_new = _project(w_new, rows)
                norm = np.linalg.norm(w_new)
                if norm < 1e-12:
                    break
                w_new /= norm
                if abs(w_new @ w) > 1.0 - tol:
                    w = w_new
                    ok = True
                    break
                w = w_new
            w_best = w
            if ok:
                break
        if not ok:
            converged_all = False
        rows.append(w_best)
    w_z = np.vstack(rows)
    return FastIcaResult(unmixing=w_z @ whiten, converged=converged_all, iterations=total_iters)


def _project(w: np.ndarray, rows: list[np.ndarray]) -> np.ndarray:
    for r in rows:
        w = w - (w @ r) * r
    return w


def _diagonal_permutation(w: np.ndarray) -> np.ndarray:
    """Row order making the diagonal dominant: minimize sum(1/|diag|)."""
    p = w.shape[0]
    cost = 1.0 / np.maximum(np.abs(w), 1e-12)
    if p <= EXHAUSTIVE_LIMIT:
        best, best_perm = np.inf, None
        for perm in permutations(range(p)):
            total = sum(cost[perm[i], i] for i in range(p))
            if total < best:
                best, best_perm = total, perm
        return np.array(best_perm)
    rows, cols = linear_sum_assignment(cost)
    return rows[np.argsort(cols)]


def _causal_order(b: np.ndarray) -> np.ndarray:
    """Permutation of variables minimizing the squared upper-triangular mass
    of the permuted coefficient matrix."""
    p = b.shape[0]
    if p <= EXHAUSTIVE_LIMIT:
        best, best_perm = np.inf, None
        for perm in permutations(range(p)):
            sub = b[np.ix_(perm, perm)]
            cost = float((np.triu(sub, k=1) ** 2).sum())
            if cost < best:
                best, best_perm = cost, perm
        return np.array(best_perm)
    return _masking_order(b)


def _masking_order(b: np.ndarray) -> np.ndarray:
    """Iterative masking: zero the smallest entries until some permutation
    makes the matrix strictly lower triangular."""
    p = b.shape[0]
    flat = np.argsort(np.abs(b), axis=None)
    masked = b.copy()
    masked[np.unravel_index(flat[: p * (p + 1) // 2], b.shape)] = 0.0
    for k in range(p * (p + 1) // 2, p * p + 1):
        perm = _strict_lower_permutation(masked)
        if perm is not None:
            return perm
        if k < p * p:
            masked[np.unravel_index(flat[k], b.shape)] = 0.0
    return np.arange(p)  # dense fallback; order is arbitrary


def _strict_lower_permutation(b: np.ndarray) -> np.ndarray | None:
    p = b.shape[0]
    remaining = list(range(p))
    work = b.copy()
    order = []
    for _ in range(p):
        row_mass = np.abs(work).sum(axis=1)
        zero_rows = [i for i, m in enumerate(row_mass) if m < 1e-12]
        if not zero_rows:
            return None
        pick = zero_rows[0]
        order.append(remaining[pick])
        remaining.pop(pick)
        keep = [i for i in range(work.shape[0]) if i != pick]
        work = work[np.ix_(keep, keep)]
    return np.array(order)


def run_ica_lingam(
    dataset: Dataset,
    prune_threshold: float = 0.05,
    seed: int = 42,
    max_iter: int = 200,
    tol: float = 1e-6,
    restarts: int = 5,
) -> LingamResult:
    """Estimate a weighted DAG under the linear non-Gaussian model.

    Entries of B below the prune threshold are zeroed, and everything above
    the causal order's diagonal is dropped so the result is always acyclic.
    Edge j -> i is emitted where B[i, j] survives.
    """
    x = dataset.matrix
    names = dataset.column_names
    p = x.shape[1]
    ica = fast_ica(x, max_iter=max_iter, tol=tol, restarts=restarts, seed=seed)
    w = ica.unmixing

    perm = _diagonal_permutation(w)
    w_tilde = w[perm]
    diag = np.diag(w_tilde).copy()
    diag[np.abs(diag) < 1e-12] = 1e-12
    w_norm = w_tilde / diag[:, None]
    b = np.eye(p) - w_norm

    order = _causal_order(b)
    sub = b[np.ix_(order, order)]
    sub = np.tril(sub, k=-1)
    if np.isfinite(prune_threshold):
        sub[np.abs(sub) < prune_threshold] = 0.0
    else:
        sub[:] = 0.0
    b_pruned = np.zeros_like(b)
    b_pruned[np.ix_(order, order)] = sub

    weights = WeightedGraph.from_weights(names, b_pruned.T)  # B[i, j] != 0 means j -> i
    return LingamResult(
        causal_order=tuple(names[i] for i in order),
        weights=weights,
        prune_threshold=float(prune_threshold),
        converged=ica.converged,
    )
