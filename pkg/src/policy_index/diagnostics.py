"""Stationarity and dependence diagnostics.

Sample ACF, Ljung-Box, augmented Dickey-Fuller with tabulated p-values,
lagged cross-correlation and the lead/lag shape classifier.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import DegenerateSeriesError

__all__ = [
    "AdfResult",
    "CcfResult",
    "CcfClassification",
    "acf",
    "ljung_box",
    "adf_test",
    "adf_pvalue",
    "ccf",
    "classify_ccf",
    "classification_counts",
]

ADF_SPECS = ("NC", "C", "CT")

# Dickey-Fuller tau quantiles (Fuller 1976, Table 8.5.2), rows are sample
# sizes, columns the probabilities in _DF_PROBS.
_DF_SIZES = np.array([25.0, 50.0, 100.0, 250.0, 500.0, 1e5])
_DF_PROBS = np.array([0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99])
_DF_TABLES = {
    "NC": np.array(
        [
            [-2.66, -2.26, -1.95, -1.60, 0.92, 1.33, 1.70, 2.16],
            [-2.62, -2.25, -1.95, -1.61, 0.91, 1.31, 1.66, 2.08],
            [-2.60, -2.24, -1.95, -1.61, 0.90, 1.29, 1.64, 2.03],
            [-2.58, -2.23, -1.95, -1.62, 0.89, 1.29, 1.63, 2.01],
            [-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00],
            [-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00],
        ]
    ),
    "C": np.array(
        [
            [-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72],
            [-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66],
            [-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63],
            [-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62],
            [-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61],
            [-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60],
        ]
    ),
    "CT": np.array(
        [
            [-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15],
            [-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24],
            [-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28],
            [-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31],
            [-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32],
            [-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33],
        ]
    ),
}


def _as_series(x, name="x") -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if not np.isfinite(x).all():
        raise ValueError(f"{name} contains non-finite values")
    if x.size and np.ptp(x) == 0:
        raise DegenerateSeriesError(f"{name} is constant")
    return x


def acf(x, max_lag: int) -> np.ndarray:
    """Sample autocorrelations ``rho_0 .. rho_max_lag`` (divisor-n convention)."""
    x = _as_series(x)
    n = x.size
    if not 1 <= max_lag < n:
        raise ValueError("need 1 <= max_lag < len(x)")
    xc = x - x.mean()
    denom = xc @ xc
    return np.array([xc[k:] @ xc[: n - k] for k in range(max_lag + 1)]) / denom


def ljung_box(x, h: int) -> tuple[float, float]:
    """Ljung-Box portmanteau statistic over lags 1..h and its chi-square p-value."""
    x = _as_series(x)
    n = x.size
    if not 1 <= h < n:
        raise ValueError("need 1 <= h < len(x)")
    r = acf(x, h)[1:]
    q = n * (n + 2) * np.sum(r**2 / (n - np.arange(1, h + 1)))
    return float(q), float(stats.chi2.sf(q, h))


@dataclass(frozen=True)
class AdfResult:
    spec: str
    statistic: float
    p_value: float
    lags: int
    nobs: int = 0


def adf_pvalue(stat: float, spec: str, nobs: int) -> float:
    """Interpolated Dickey-Fuller p-value, clipped to [0.01, 0.99].

    Critical values are first interpolated linearly in sample size, then the
    probability is interpolated linearly in the statistic.
    """
    table = _DF_TABLES[spec]
    size = min(max(float(nobs), _DF_SIZES[0]), _DF_SIZES[-1])
    crit = np.array([np.interp(size, _DF_SIZES, table[:, j]) for j in range(table.shape[1])])
    return float(np.interp(stat, crit, _DF_PROBS))


def adf_test(x, spec: str = "C", lags=None) -> AdfResult:
    """Augmented Dickey-Fuller unit-root test.

    Regresses ``dy_t`` on ``y_{t-1}``, ``lags`` lagged differences and the
    deterministic terms of ``spec`` ("NC": none, "C": constant, "CT":
    constant and linear trend). The statistic is the t-ratio of the
    ``y_{t-1}`` coefficient.
    """
    spec = spec.upper()
    if spec not in ADF_SPECS:
        raise ValueError(f"spec must be one of {ADF_SPECS}")
    x = _as_series(x)
    n = x.size
    if lags is None:
        lags = int(np.floor((n - 1) ** (1.0 / 3.0)))
    lags = int(lags)
    if lags < 0:
        raise ValueError("lags must be non-negative")
    if n < 20 + lags:
        raise ValueError(f"series too short ({n}) for {lags} lags")

    dy = np.diff(x)
    rows = dy.size - lags
    target = dy[lags:]
    cols = [x[lags : lags + rows]]
    for i in range(1, lags + 1):
        cols.append(dy[lags - i : lags - i + rows])
    if spec in ("C", "CT"):
        cols.append(np.ones(rows))
    if spec == "CT":
        cols.append(np.arange(lags + 1, lags + 1 + rows, dtype=float))
    X = np.column_stack(cols)

    if np.linalg.matrix_rank(X) < X.shape[1]:
        raise DegenerateSeriesError("singular ADF regression")
    beta, *_ = np.linalg.lstsq(X, target, rcond=None)
    resid = target - X @ beta
    dof = rows - X.shape[1]
    s2 = resid @ resid / dof
    cov = s2 * np.linalg.inv(X.T @ X)
    stat = float(beta[0] / np.sqrt(cov[0, 0]))
    return AdfResult(spec, stat, adf_pvalue(stat, spec, rows), lags, rows)


@dataclass(frozen=True)
class CcfResult:
    """Cross-correlations ``rho[k] = corr(y_t, x_{t-k})`` for ``k = -K..K``.

    Positive ``k`` pairs ``y`` with earlier values of ``x``: large values
    there mean ``y`` follows ``x``.
    """

    max_lag: int
    rho: np.ndarray  # length 2K+1, position K holds lag 0
    n: int

    @property
    def lags(self) -> np.ndarray:
        return np.arange(-self.max_lag, self.max_lag + 1)

    @property
    def band(self) -> float:
        return 2.0 / np.sqrt(self.n)

    def at(self, k: int) -> float:
        if abs(k) > self.max_lag:
            raise IndexError(k)
        return float(self.rho[k + self.max_lag])


def ccf(y, x, K: int) -> CcfResult:
    y = _as_series(y, "y")
    x = _as_series(x, "x")
    if y.size != x.size:
        raise ValueError("series lengths differ")
    n = y.size
    if K < 0 or n <= 2 * K:
        raise ValueError(f"need 0 <= K and n > 2K (n={n}, K={K})")
    yc = y - y.mean()
    xc = x - x.mean()
    denom = np.sqrt((yc @ yc) * (xc @ xc))
    rho = np.empty(2 * K + 1)
    for k in range(-K, K + 1):
        if k >= 0:
            num = yc[k:] @ xc[: n - k]
        else:
            num = yc[: n + k] @ xc[-k:]
        rho[k + K] = num / denom
    return CcfResult(K, rho, n)


@dataclass(frozen=True)
class CcfClassification:
    right_volatility_bias: bool
    short_negative: bool
    long_positive: bool


SHORT_HORIZON = 7
SHORT_MAJORITY = 5


def classify_ccf(c: CcfResult, short_horizon=SHORT_HORIZON, short_majority=SHORT_MAJORITY) -> CcfClassification:
    """Lead/lag shape flags for a CCF of a province (y) against the centre (x).

    * right volatility bias: more squared correlation mass at positive lags
      than at negative lags;
    * short-time negative: lags ``0..short_horizon`` average below zero and at
      least ``short_majority`` of them are negative;
    * long-time positive: some lag beyond ``short_horizon`` exceeds ``2/sqrt(n)``.
    """
    K = c.max_lag
    if K < short_horizon + 1:
        raise ValueError(f"max_lag must be >= {short_horizon + 1}")
    pos = c.rho[K + 1 :]
    neg = c.rho[:K][::-1]
    short = c.rho[K : K + short_horizon + 1]
    long_ = c.rho[K + short_horizon + 1 :]
    return CcfClassification(
        right_volatility_bias=bool(np.sum(pos**2) > np.sum(neg**2)),
        short_negative=bool(short.mean() < 0 and np.sum(short < 0) >= short_majority),
        long_positive=bool(np.any(long_ > c.band)),
    )


def classification_counts(results) -> dict:
    """Number of ``True`` flags per property over an iterable of classifications."""
    results = list(results)
    return {
        "right_volatility_bias": sum(r.right_volatility_bias for r in results),
        "short_negative": sum(r.short_negative for r in results),
        "long_positive": sum(r.long_positive for r in results),
    }
