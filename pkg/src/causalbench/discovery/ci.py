"""Fisher-z conditional independence testing on partial correlations."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import stats

log = logging.getLogger(__name__)

_CLAMP_EPS = 1e-12


class CiError(ValueError):
    code = "ci_error"


@dataclass(frozen=True)
class CiParams:
    alpha: float = 0.05
    test_kind: str = "fisherZ"

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise CiError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.test_kind != "fisherZ":
            raise CiError(f"unsupported CI test {self.test_kind!r}")


@dataclass(frozen=True)
class CiVerdict:
    statistic: float
    independent: bool


def partial_correlation(data: np.ndarray, x: int, y: int, s=(), corr: np.ndarray | None = None) -> float:
    """Partial correlation of columns x and y given the columns in s.

    Computed as -inv(R)[x, y] / sqrt(inv(R)[x, x] * inv(R)[y, y]) on the sample
    correlation submatrix R over {x, y} | s, clamped into the open interval
    (-1, 1). A singular submatrix signals collinear data and is treated as
    maximal dependence (|r| = 1 - eps) with a warning, so the edge survives.
    """
    s = sorted(s)
    if x == y or x in s or y in s:
        raise CiError("x, y, and conditioning set must be distinct")
    n_samples = data.shape[0]
    if len(s) > n_samples - 4:
        raise CiError(f"conditioning set of size {len(s)} too large for {n_samples} samples")
    if corr is None:
        corr = np.corrcoef(data, rowvar=False)
        if corr.ndim == 0:  # single column
            corr = corr.reshape(1, 1)
    idx = [x, y] + list(s)
    sub = corr[np.ix_(idx, idx)]
    if np.isnan(sub).any():
        log.warning("degenerate correlation (constant column) for pair (%d, %d); keeping edge", x, y)
        return 1.0 - _CLAMP_EPS
    try:
        omega = np.linalg.inv(sub)
    except np.linalg.LinAlgError:
        log.warning("singular correlation submatrix for pair (%d, %d) given %s; keeping edge", x, y, s)
        return 1.0 - _CLAMP_EPS
    denom = omega[0, 0] * omega[1, 1]
    if denom <= 0:
        log.warning("ill-conditioned correlation submatrix for pair (%d, %d); keeping edge", x, y)
        return 1.0 - _CLAMP_EPS
    r = -omega[0, 1] / np.sqrt(denom)
    return float(np.clip(r, -1.0 + _CLAMP_EPS, 1.0 - _CLAMP_EPS))


def fisher_z_test(r: float, n_samples: int, cond_size: int, alpha: float) -> CiVerdict:
    """Classical Fisher z-transform test of a (partial) correlation.

    statistic = sqrt(n - |S| - 3) * |atanh(r)|; independence is accepted when
    it does not exceed the two-sided normal quantile at level alpha.
    """
    dof = n_samples - cond_size - 3
    if dof <= 0:
        raise CiError(f"need more than {cond_size + 3} samples for a conditioning set of size {cond_size}")
    r = float(np.clip(r, -1.0 + _CLAMP_EPS, 1.0 - _CLAMP_EPS))
    z = 0.5 * np.log((1.0 + r) / (1.0 - r))
    statistic = np.sqrt(dof) * abs(z)
    threshold = stats.norm.ppf(1.0 - alpha / 2.0)
    return CiVerdict(statistic=float(statistic), independent=bool(statistic <= threshold))
