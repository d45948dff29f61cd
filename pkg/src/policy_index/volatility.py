"""AR(1)-GARCH(1,1) and two-stage DCC(1,1) estimation.

Stage one fits each series separately by Gaussian maximum likelihood::

    r_t      = mu + ar1 * r_{t-1} + eps_t
    sigma2_t = omega + alpha1 * eps_{t-1}**2 + beta1 * sigma2_{t-1}

Stage two takes the standardised residuals ``u_t = eps_t / sigma_t`` and
fits the correlation recursion::

    Q_t = (1 - a - b) * Qbar + a * u_{t-1} u_{t-1}' + b * Q_{t-1}
    R_t = diag(Q_t)^{-1/2} Q_t diag(Q_t)^{-1/2}

Both stages optimise in an unconstrained parameterisation (log for
positivity, a logistic pair for ``a + b < 1``) and report standard errors
from the numerical Hessian in the natural parameterisation, falling back to
the outer product of gradients when the Hessian is not invertible.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from scipy import optimize, signal, stats
from scipy.special import expit, logit

from .errors import DegenerateSeriesError, EstimationError

__all__ = [
    "GARCH_PARAMS",
    "GarchFit",
    "DccFit",
    "garch_variance",
    "garch_nll_unconstrained",
    "fit_ar1_garch11",
    "dcc_correlation_path",
    "dcc_nll",
    "fit_dcc",
    "fit_dcc_garch",
    "dcc_covariance_series",
    "covariance_frame",
    "group_volatility",
    "param_table",
    "write_param_table",
    "read_param_table",
    "simulate_ar1_garch",
    "simulate_dcc",
]

log = logging.getLogger(__name__)

GARCH_PARAMS = ("mu", "ar1", "omega", "alpha1", "beta1")
DCC_PARAMS = ("dcca1", "dccb1")
TABLE_COLUMNS = ("Estimate", "Std. Error", "t value", "Pr(>|t|)")

N_RESTARTS = 5
BOUNDARY_TOL = 1e-4
_LOG2PI = np.log(2.0 * np.pi)


# --- helpers ----------------------------------------------------------------


def _numerical_hessian(f, x, rel_step=1e-4, floor=1e-2):
    """Central-difference Hessian of scalar ``f`` at ``x``."""
    x = np.asarray(x, dtype=float)
    k = x.size
    h = rel_step * np.maximum(np.abs(x), floor)
    H = np.empty((k, k))
    f0 = f(x)
    for i in range(k):
        ei = np.zeros(k)
        ei[i] = h[i]
        H[i, i] = (f(x + ei) - 2.0 * f0 + f(x - ei)) / h[i] ** 2
        for j in range(i + 1, k):
            ej = np.zeros(k)
            ej[j] = h[j]
            H[i, j] = H[j, i] = (
                f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
            ) / (4.0 * h[i] * h[j])
    return H


def _numerical_jacobian(f, x, rel_step=1e-5, floor=1e-2):
    x = np.asarray(x, dtype=float)
    h = rel_step * np.maximum(np.abs(x), floor)
    cols = []
    for i in range(x.size):
        e = np.zeros(x.size)
        e[i] = h[i]
        cols.append((f(x + e) - f(x - e)) / (2.0 * h[i]))
    return np.column_stack(cols)


def _inference(terms, estimate):
    """Standard errors, t values and two-sided normal p-values.

    ``terms(p)`` returns per-observation negative log-likelihood
    contributions. The covariance is the inverse Hessian of their sum; where
    that is not positive definite (typically an estimate on a constraint
    boundary) the outer product of per-observation gradients is used instead.
    """
    k = estimate.size
    with np.errstate(all="ignore"):
        H = _numerical_hessian(lambda p: float(np.sum(terms(p))), estimate)
        var = np.full(k, np.nan)
        if np.isfinite(H).all():
            try:
                var = np.diag(np.linalg.inv(H))
            except np.linalg.LinAlgError:
                pass
        if not (np.isfinite(var).all() and (var > 0).all()):
            J = _numerical_jacobian(terms, estimate)
            try:
                var = np.diag(np.linalg.inv(J.T @ J)) if np.isfinite(J).all() else var
            except np.linalg.LinAlgError:
                pass
        se = np.where(var > 0, np.sqrt(np.abs(var)), np.nan)
        t = estimate / se
        p = 2.0 * stats.norm.sf(np.abs(t))
    return se, t, p


def _split_persistence(theta_s, theta_r):
    """Map two reals to ``(a, b)`` with ``a, b > 0`` and ``a + b < 1``."""
    s = expit(theta_s)
    r = expit(theta_r)
    return s * r, s * (1.0 - r)


def _join_persistence(a, b):
    s = a + b
    return logit(s), logit(a / s)


def _minimize(objective, base, restarts, persistence, tie_tol=1e-8):
    """BFGS from every base start; jittered restarts only if none converged.

    The lowest objective wins. Optima within ``tie_tol`` of it count as ties
    and the one with the smallest ``persistence(x)`` is kept: with the ARCH
    term at zero the likelihood is flat along the persistence ridge, and the
    least persistent point is the parsimonious choice.
    Returns ``(result, converged)``.
    """
    done, failed = [], []
    for batch in (base, restarts):
        for x0 in batch:
            with np.errstate(all="ignore"):
                res = optimize.minimize(objective, x0, method="BFGS", options={"gtol": 1e-6, "maxiter": 2000})
            if not np.isfinite(res.fun):
                continue
            grad_ok = res.jac is not None and np.all(np.isfinite(res.jac)) and np.max(np.abs(res.jac)) < 1e-4
            (done if res.success or grad_ok else failed).append(res)
        if done:
            best = min(r.fun for r in done)
            ties = [r for r in done if r.fun <= best + tie_tol]
            return min(ties, key=lambda r: persistence(r.x)), True
    if not failed:
        return None, False
    return min(failed, key=lambda r: r.fun), False


# --- univariate stage -------------------------------------------------------


def garch_variance(eps, omega, alpha1, beta1, sigma2_0=None):
    """Conditional variance path, ``sigma2[0]`` set to ``sigma2_0``.

    ``sigma2_0`` defaults to the mean square of ``eps``.
    """
    eps = np.asarray(eps, dtype=float)
    if sigma2_0 is None:
        sigma2_0 = eps @ eps / eps.size
    drive = np.empty_like(eps)
    drive[0] = sigma2_0
    drive[1:] = omega + alpha1 * eps[:-1] ** 2
    return signal.lfilter([1.0], [1.0, -beta1], drive)


def _ar1_residuals(y, mu, ar1):
    return y[1:] - mu - ar1 * y[:-1]


def _garch_nll_terms(params, y):
    mu, ar1, omega, alpha1, beta1 = params
    eps = _ar1_residuals(y, mu, ar1)
    s2 = garch_variance(eps, omega, alpha1, beta1)
    if not np.all(s2 > 0):
        return np.full(eps.size, np.inf)
    return 0.5 * (_LOG2PI + np.log(s2) + eps**2 / s2)


def _garch_nll_natural(params, y):
    return float(np.sum(_garch_nll_terms(params, y)))


def _garch_from_theta(theta):
    mu, ar1, log_omega, ts, tr = theta
    alpha1, beta1 = _split_persistence(ts, tr)
    return np.array([mu, ar1, np.exp(log_omega), alpha1, beta1])


def garch_nll_unconstrained(theta, y):
    """Negative log-likelihood per observation in the unconstrained space.

    ``theta = (mu, ar1, log omega, logit(alpha1 + beta1), logit(alpha1 / (alpha1 + beta1)))``.
    """
    val = _garch_nll_natural(_garch_from_theta(theta), y)
    return val / (y.size - 1) if np.isfinite(val) else 1e10


@dataclass(frozen=True)
class GarchFit:
    name: str
    mu: float
    ar1: float
    omega: float
    alpha1: float
    beta1: float
    se: np.ndarray = field(repr=False)
    tvalues: np.ndarray = field(repr=False)
    pvalues: np.ndarray = field(repr=False)
    loglik: float
    eps: np.ndarray = field(repr=False)
    sigma2: np.ndarray = field(repr=False)
    u: np.ndarray = field(repr=False)
    boundary: tuple = ()
    scale: float = 1.0
    theta: np.ndarray = field(default=None, repr=False)  # unconstrained, scaled data

    @property
    def params(self) -> np.ndarray:
        return np.array([self.mu, self.ar1, self.omega, self.alpha1, self.beta1])

    @property
    def persistence(self) -> float:
        return self.alpha1 + self.beta1

    @property
    def unconditional_variance(self) -> float:
        return self.omega / (1.0 - self.persistence)


def _garch_starts(y, rng):
    """Base starts spanning low to high persistence, plus jittered restarts."""
    yc = y - y.mean()
    r1 = float(np.clip((yc[1:] @ yc[:-1]) / (yc @ yc), -0.9, 0.9))
    mu0 = y.mean() * (1.0 - r1)
    var0 = np.var(_ar1_residuals(y, mu0, r1))
    base = []
    for a0, b0 in ((0.05, 0.90), (0.10, 0.80), (0.20, 0.50), (0.05, 0.05)):
        ts, tr = _join_persistence(a0, b0)
        base.append(np.array([mu0, r1, np.log(var0 * (1 - a0 - b0)), ts, tr]))
    restarts = [base[0] + rng.normal(scale=[0.1, 0.1, 0.5, 0.5, 0.5]) for _ in range(N_RESTARTS)]
    return base, restarts


def fit_ar1_garch11(x, name: str = "x", seed: int = 0) -> GarchFit:
    """Gaussian MLE of an AR(1) mean with GARCH(1,1) errors.

    The series is divided by its standard deviation before optimisation and
    the estimates are mapped back, so inputs on any scale behave alike.
    Standard errors come from the inverse numerical Hessian of the negative
    log-likelihood in ``(mu, ar1, omega, alpha1, beta1)``.

    Raises
    ------
    DegenerateSeriesError
        Constant input.
    EstimationError
        No start (initial plus jittered restarts) converged.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 50:
        raise ValueError("need a one-dimensional series of length >= 50")
    if not np.isfinite(x).all():
        raise ValueError("series contains non-finite values")
    scale = float(np.std(x))
    if scale == 0:
        raise DegenerateSeriesError(f"series {name!r} is constant")
    y = x / scale
    rng = np.random.default_rng(seed)

    objective = lambda th: garch_nll_unconstrained(th, y)  # noqa: E731
    res, ok = _minimize(objective, *_garch_starts(y, rng), persistence=lambda th: expit(th[3]))
    if res is None or not ok:
        best = -res.fun * (y.size - 1) if res is not None else float("nan")
        raise EstimationError(f"GARCH fit for {name!r} did not converge", best)

    est_y = _garch_from_theta(res.x)
    se_y, _, _ = _inference(lambda p: _garch_nll_terms(p, y), est_y)
    unscale = np.array([scale, 1.0, scale**2, 1.0, 1.0])
    est = est_y * unscale
    se = se_y * unscale
    with np.errstate(all="ignore"):
        tvals = est / se
        pvals = 2.0 * stats.norm.sf(np.abs(tvals))

    mu, ar1, omega, alpha1, beta1 = est
    eps = _ar1_residuals(x, mu, ar1)
    sigma2 = garch_variance(eps, omega, alpha1, beta1)
    loglik = -_garch_nll_natural(est_y, y) - (y.size - 1) * np.log(scale)
    boundary = tuple(
        p
        for p, flag in zip(
            GARCH_PARAMS,
            (False, False, est_y[2] < BOUNDARY_TOL * 1e-2, alpha1 < BOUNDARY_TOL, beta1 < BOUNDARY_TOL),
        )
        if flag
    )
    if alpha1 + beta1 > 1.0 - BOUNDARY_TOL:
        boundary += ("alpha1+beta1",)
    return GarchFit(
        name=name,
        mu=float(mu),
        ar1=float(ar1),
        omega=float(omega),
        alpha1=float(alpha1),
        beta1=float(beta1),
        se=se,
        tvalues=tvals,
        pvalues=pvals,
        loglik=float(loglik),
        eps=eps,
        sigma2=sigma2,
        u=eps / np.sqrt(sigma2),
        boundary=boundary,
        scale=scale,
        theta=res.x,
    )


# --- correlation stage ------------------------------------------------------


def _as_panel(u) -> np.ndarray:
    if isinstance(u, pd.DataFrame):
        u = u.to_numpy(float)
    elif isinstance(u, (list, tuple)):
        lengths = {len(s) for s in u}
        if len(lengths) != 1:
            raise ValueError("series lengths differ")
        u = np.column_stack([np.asarray(s, dtype=float) for s in u])
    u = np.asarray(u, dtype=float)
    if u.ndim != 2:
        raise ValueError("expected a (T, k) panel")
    return u


def _correlation(Q):
    d = np.sqrt(np.einsum("tii->ti", Q))
    R = Q / (d[:, :, None] * d[:, None, :])
    idx = np.arange(Q.shape[1])
    R[:, idx, idx] = 1.0
    return R


def dcc_correlation_path(u, alpha, beta, qbar=None):
    """Run the DCC recursion from ``Q_1 = Qbar``; returns ``(Q, R)`` as (T, k, k)."""
    u = _as_panel(u)
    if qbar is None:
        qbar = _sample_correlation(u)
    T = u.shape[0]
    drive = np.empty((T,) + qbar.shape)
    drive[0] = qbar
    drive[1:] = (1.0 - alpha - beta) * qbar + alpha * (u[:-1, :, None] * u[:-1, None, :])
    Q = signal.lfilter([1.0], [1.0, -beta], drive, axis=0)
    return Q, _correlation(Q)


def _sample_correlation(u):
    qbar = np.corrcoef(u, rowvar=False)
    np.fill_diagonal(qbar, 1.0)
    return qbar


def _dcc_nll_terms(u, alpha, beta, qbar):
    _, R = dcc_correlation_path(u, alpha, beta, qbar)
    sign, logdet = np.linalg.slogdet(R)
    if np.any(sign <= 0):
        return np.full(u.shape[0], np.inf)
    quad = np.einsum("ti,ti->t", u, np.linalg.solve(R, u[:, :, None])[:, :, 0])
    return 0.5 * (logdet + quad - np.einsum("ti,ti->t", u, u))


def dcc_nll(u, alpha, beta, qbar=None) -> float:
    """Negative correlation-part log-likelihood.

    ``0.5 * sum_t (ln|R_t| + u_t' R_t^{-1} u_t - u_t' u_t)``.
    """
    u = _as_panel(u)
    if qbar is None:
        qbar = _sample_correlation(u)
    return float(np.sum(_dcc_nll_terms(u, alpha, beta, qbar)))


@dataclass(frozen=True)
class DccFit:
    names: tuple
    fits: Optional[tuple]
    alpha: float
    beta: float
    qbar: np.ndarray = field(repr=False)
    Q_path: np.ndarray = field(repr=False)
    R_path: np.ndarray = field(repr=False)
    H_path: np.ndarray = field(repr=False)
    se: np.ndarray = field(repr=False)
    tvalues: np.ndarray = field(repr=False)
    pvalues: np.ndarray = field(repr=False)
    loglik: float
    boundary: tuple = ()
    dates: Optional[tuple] = None

    @property
    def k(self) -> int:
        return self.qbar.shape[0]


def fit_dcc(u, fits: Optional[Sequence[GarchFit]] = None, names=None, fixed=None, seed: int = 0, dates=None) -> DccFit:
    """Estimate the DCC(1,1) correlation stage from standardised residuals.

    Parameters
    ----------
    u : (T, k) array, DataFrame or list of equal-length series
    fits : GarchFit sequence, optional
        Univariate fits the residuals came from; their variances scale
        ``R_t`` into ``H_t``. Without them ``H_t = R_t``.
    fixed : (alpha, beta), optional
        Skip estimation and evaluate the recursion at these values.
    """
    u = _as_panel(u)
    T, k = u.shape
    if k < 2:
        raise ValueError("need at least two series")
    if T < 50:
        raise ValueError("need at least 50 observations")
    if fits is not None:
        if len(fits) != k or any(f.sigma2.size != T for f in fits):
            raise ValueError("fits do not match residual panel")
    if names is None:
        names = tuple(f.name for f in fits) if fits is not None else tuple(f"s{i + 1}" for i in range(k))
    if len(names) != k:
        raise ValueError("names do not match residual panel")
    if isinstance(u, pd.DataFrame):
        u = u.to_numpy(float)

    qbar = _sample_correlation(u)
    eig = np.linalg.eigvalsh(qbar)
    if not eig.min() > 0:
        raise EstimationError("sample correlation of residuals is not positive definite")

    if fixed is not None:
        alpha, beta = map(float, fixed)
        if alpha < 0 or beta < 0 or alpha + beta >= 1:
            raise ValueError("fixed parameters violate a, b >= 0, a + b < 1")
        se = tvals = pvals = np.full(2, np.nan)
    else:
        def objective(theta):
            a, b = _split_persistence(*theta)
            val = dcc_nll(u, a, b, qbar)
            return val / T if np.isfinite(val) else 1e10

        rng = np.random.default_rng(seed)
        base = [np.array(_join_persistence(a0, b0)) for a0, b0 in ((0.05, 0.90), (0.02, 0.95), (0.10, 0.60), (0.02, 0.05))]
        restarts = [base[0] + rng.normal(scale=0.5, size=2) for _ in range(N_RESTARTS)]
        res, ok = _minimize(objective, base, restarts, persistence=lambda th: expit(th[0]))
        if res is None or not ok:
            best = -res.fun * T if res is not None else float("nan")
            raise EstimationError("DCC correlation stage did not converge", best)
        alpha, beta = map(float, _split_persistence(*res.x))
        se, tvals, pvals = _inference(lambda p: _dcc_nll_terms(u, p[0], p[1], qbar), np.array([alpha, beta]))

    Q, R = dcc_correlation_path(u, alpha, beta, qbar)
    if fits is not None:
        sd = np.sqrt(np.column_stack([f.sigma2 for f in fits]))
    else:
        sd = np.ones((T, k))
    H = R * sd[:, :, None] * sd[:, None, :]
    boundary = tuple(n for n, v in zip(DCC_PARAMS, (alpha, beta)) if v < BOUNDARY_TOL)
    if alpha + beta > 1.0 - BOUNDARY_TOL:
        boundary += ("dcca1+dccb1",)
    return DccFit(
        names=tuple(names),
        fits=tuple(fits) if fits is not None else None,
        alpha=alpha,
        beta=beta,
        qbar=qbar,
        Q_path=Q,
        R_path=R,
        H_path=H,
        se=np.asarray(se, dtype=float),
        tvalues=np.asarray(tvals, dtype=float),
        pvalues=np.asarray(pvals, dtype=float),
        loglik=-dcc_nll(u, alpha, beta, qbar),
        boundary=boundary,
        dates=tuple(dates) if dates is not None else None,
    )


def fit_dcc_garch(data, names=None, dates=None, seed: int = 0) -> DccFit:
    """Both stages: AR(1)-GARCH(1,1) per column, then DCC(1,1).

    ``data`` is a (T, k) array or a DataFrame (column names and index are
    used for ``names`` and ``dates``). The first observation is consumed by
    the AR(1) lag, so the paths cover ``dates[1:]``.
    """
    if isinstance(data, pd.DataFrame):
        names = tuple(data.columns) if names is None else names
        dates = tuple(data.index) if dates is None else dates
        data = data.to_numpy(float)
    data = np.asarray(data, dtype=float)
    k = data.shape[1]
    names = tuple(names) if names is not None else tuple(f"s{i + 1}" for i in range(k))
    fits = [fit_ar1_garch11(data[:, i], name=str(names[i]), seed=seed) for i in range(k)]
    u = np.column_stack([f.u for f in fits])
    return fit_dcc(u, fits=fits, names=names, seed=seed, dates=dates[1:] if dates is not None else None)


# --- derived outputs --------------------------------------------------------


def dcc_covariance_series(d: DccFit) -> np.ndarray:
    """Conditional covariance path ``H_t = D_t R_t D_t`` as a (T, k, k) array."""
    return d.H_path


def covariance_frame(d: DccFit) -> pd.DataFrame:
    """Variances and pairwise covariances as columns ``"a~a"``, ``"a~b"``, ...

    Columns follow the upper triangle of ``H_t`` row by row.
    """
    cols = {}
    for i in range(d.k):
        for j in range(i, d.k):
            cols[f"{d.names[i]}~{d.names[j]}"] = d.H_path[:, i, j]
    index = pd.Index(d.dates, name="date") if d.dates is not None else None
    return pd.DataFrame(cols, index=index)


def group_volatility(H_path, groups: dict) -> dict:
    """Sum of every covariance entry within each group, per time step.

    ``groups`` maps a group name to the series indices it contains.
    """
    H = np.asarray(H_path, dtype=float)
    k = H.shape[1]
    out = {}
    for name, members in groups.items():
        idx = sorted(set(int(i) for i in members))
        if not idx:
            raise ValueError(f"group {name!r} is empty")
        if idx[0] < 0 or idx[-1] >= k:
            raise ValueError(f"group {name!r} has an index outside 0..{k - 1}")
        out[name] = H[:, idx][:, :, idx].sum(axis=(1, 2))
    return out


def param_table(d: DccFit, footnotes: bool = False) -> pd.DataFrame:
    """Estimate / Std. Error / t value / Pr(>|t|) for every parameter.

    Rows are ``[name].mu .. [name].beta1`` per series, then ``[Joint]dcca1``
    and ``[Joint]dccb1``. With ``footnotes=True`` a ``note`` column marks
    estimates on a constraint boundary, whose normal p-values are unreliable.
    """
    rows, labels, notes = [], [], []
    if d.fits is not None:
        for f in d.fits:
            for j, p in enumerate(GARCH_PARAMS):
                labels.append(f"[{f.name}].{p}")
                rows.append((f.params[j], f.se[j], f.tvalues[j], f.pvalues[j]))
                on_sum = p in ("alpha1", "beta1") and "alpha1+beta1" in f.boundary
                notes.append("boundary" if p in f.boundary or on_sum else "")
    for j, p in enumerate(DCC_PARAMS):
        labels.append(f"[Joint]{p}")
        rows.append(((d.alpha, d.beta)[j], d.se[j], d.tvalues[j], d.pvalues[j]))
        notes.append("boundary" if p in d.boundary or "dcca1+dccb1" in d.boundary else "")
    table = pd.DataFrame(rows, index=pd.Index(labels, name="parameter"), columns=list(TABLE_COLUMNS))
    if footnotes:
        table["note"] = notes
    return table


def write_param_table(table: pd.DataFrame, path) -> None:
    table.to_csv(path, float_format="%.10g", lineterminator="\n")


def read_param_table(path) -> pd.DataFrame:
    table = pd.read_csv(path, index_col=0, keep_default_na=True, float_precision="round_trip")
    if "note" in table.columns:
        table["note"] = table["note"].fillna("")
    return table


# --- simulation -------------------------------------------------------------


def simulate_ar1_garch(n, mu=0.0, ar1=0.0, omega=0.1, alpha1=0.1, beta1=0.8, rng=None, burn=500):
    """Draw an AR(1)-GARCH(1,1) path with Gaussian innovations."""
    rng = np.random.default_rng(rng)
    total = n + burn
    z = rng.standard_normal(total)
    x = np.zeros(total)
    s2 = omega / (1.0 - alpha1 - beta1)
    e_prev = 0.0
    for t in range(total):
        s2 = omega + alpha1 * e_prev**2 + beta1 * s2
        e_prev = np.sqrt(s2) * z[t]
        x[t] = mu + ar1 * (x[t - 1] if t else 0.0) + e_prev
    return x[burn:]


def simulate_dcc(n, corr, alpha, beta, rng=None, burn=200):
    """Draw unit-variance residuals whose correlations follow DCC(1,1).

    Returns ``(u, R)`` with ``R`` the true (n, k, k) correlation path.
    """
    rng = np.random.default_rng(rng)
    corr = np.asarray(corr, dtype=float)
    k = corr.shape[0]
    total = n + burn
    u = np.zeros((total, k))
    Rs = np.zeros((total, k, k))
    Q = corr.copy()
    for t in range(total):
        if t:
            Q = (1 - alpha - beta) * corr + alpha * np.outer(u[t - 1], u[t - 1]) + beta * Q
        dq = np.sqrt(np.diag(Q))
        R = Q / np.outer(dq, dq)
        Rs[t] = R
        u[t] = np.linalg.cholesky(R) @ rng.standard_normal(k)
    return u[burn:], Rs[burn:]
