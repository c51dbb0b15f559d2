"""Finite-size scaling of the stabilizer Rényi entropy.

The conformal ansatz ``M_alpha(L) = m L + b ln L - c`` is linear in its
parameters, so :class:`CFTScalingRegressor` is an ordinary least-squares
estimator over the basis ``{L, ln L, 1}`` with the scikit-learn
``fit``/``predict``/``get_params`` protocol.  The reported ``c_`` already
carries the ansatz's minus sign, i.e. it is directly comparable to the
predicted universal constant.
"""

import csv
import io
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted, check_X_y, column_or_1d

from ._validation import check_alpha
from .entropy import check_purity
from .exceptions import DomainError, FitError
from .identities import table2_closed
from .minors import spm
from .models import ModelSpec, build_matrix

__all__ = [
    "CFTScalingRegressor",
    "ScalingFit",
    "entropy_series",
    "fit_scaling",
    "cft_prediction",
    "series_to_csv",
    "CLOSED_ALPHAS",
    "L_MIN",
]

CLOSED_ALPHAS = (0.5, 2.0, 4.0)
L_MIN = 20
_SOURCES = ("brute", "closed")


def cft_prediction(alpha, boundary):
    """Predicted ``(b, c)``; ``c`` is None unless ``b == 0`` and a value is known.

    Periodic: b = 0, c = ln(alpha) / (2 (alpha - 1)) for alpha <= 4 and
    ln 2 / (1 - alpha) above.  Open: b = -1/4, -1/6, 0 for alpha below, at,
    above 4, with no universal constant.
    """
    alpha = check_alpha(alpha, allow_one=False)
    boundary = boundary.lower()
    if boundary == "pbc":
        c = math.log(alpha) / (2 * (alpha - 1)) if alpha <= 4 else math.log(2) / (1 - alpha)
        return 0.0, c
    if boundary == "obc":
        if alpha < 4:
            return -0.25, None
        if alpha == 4:
            return -1.0 / 6.0, None
        return 0.0, None
    raise DomainError(f"unknown boundary {boundary!r}")


def _design(L):
    L = np.asarray(L, dtype=np.float64).reshape(-1)
    return np.column_stack([L, np.log(L), np.ones_like(L)])


def _lstsq_refined(A, y, steps=2):
    # column equilibration plus residual refinement; {L, ln L, 1} is badly scaled
    scale = np.linalg.norm(A, axis=0)
    As = A / scale

    def solve(b):
        return np.linalg.lstsq(As, b, rcond=None)[0] / scale

    coef = solve(y)
    for _ in range(steps):
        coef = coef + solve(y - A @ coef)
    return coef


class CFTScalingRegressor(RegressorMixin, BaseEstimator):
    """Least-squares fit of ``y = m L + b ln L - c``.

    Parameters
    ----------
    l_min : float, default=0
        Sizes below ``l_min`` are dropped before fitting.

    Attributes
    ----------
    m_ : float
        Extensive slope.
    b_ : float
        Logarithmic coefficient.
    c_ : float
        Constant term, sign as in the ansatz (``y = ... - c_``).
    residual_rms_ : float
    n_samples_fit_ : int
    """

    def __init__(self, l_min=0):
        self.l_min = l_min

    def fit(self, X, y):
        X, y = check_X_y(np.asarray(X, dtype=float).reshape(-1, 1), y, y_numeric=True)
        L = X[:, 0]
        if np.any(L <= 0):
            raise FitError("system sizes must be positive")
        keep = L >= self.l_min
        L, y = L[keep], y[keep]
        if len(L) < 4:
            raise FitError(f"need at least 4 sizes to fit three parameters, got {len(L)}")
        A = _design(L)
        if np.linalg.matrix_rank(A) < 3:
            raise FitError("design matrix {L, ln L, 1} is rank deficient; use at least three distinct sizes")
        coef = _lstsq_refined(A, y)
        self.m_, self.b_, self.c_ = float(coef[0]), float(coef[1]), float(-coef[2])
        self.coef_ = coef
        self.residual_rms_ = float(np.sqrt(np.mean((A @ coef - y) ** 2)))
        self.n_samples_fit_ = len(L)
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        L = column_or_1d(np.asarray(X, dtype=float).reshape(-1))
        return _design(L) @ self.coef_


@dataclass
class ScalingFit:
    alpha: float
    boundary: str
    L_grid: list
    values: list
    fitted: Tuple[float, float, float]
    residual_rms: float
    predicted: Tuple[float, Optional[float]]
    caveat: Optional[str] = None
    source: str = "closed"

    @property
    def m_alpha(self):
        return self.fitted[0]

    @property
    def b_alpha(self):
        return self.fitted[1]

    @property
    def c_alpha(self):
        return self.fitted[2]

    def to_dict(self):
        b_pred, c_pred = self.predicted
        return {
            "schema_version": 1,
            "alpha": self.alpha,
            "boundary": self.boundary,
            "source": self.source,
            "L_grid": list(self.L_grid),
            "values": list(self.values),
            "fitted": {"m_alpha": self.m_alpha, "b_alpha": self.b_alpha, "c_alpha": self.c_alpha},
            "residual_rms": self.residual_rms,
            "predicted": {"b_alpha": b_pred, "c_alpha": c_pred},
            "caveat": self.caveat,
        }


def _log_det_brute(spec, alpha, workers):
    g = build_matrix(spec)
    check_purity(g)
    return spm(g, 2 * alpha, workers=workers).log_total


def entropy_series(alpha, L_grid, boundary="pbc", source="closed", family="tfi", n=None, m=None, workers=None):
    """``[(L, M_alpha(L)), ...]`` from closed forms or enumeration.

    ``M_alpha(L) = (log Det_{2 alpha}(L) - alpha L log 2) / (1 - alpha)``.
    Closed forms exist only for the Ising chain at alpha = 1/2, 2, 4; the
    brute source accepts any G-model within the enumeration budget.
    """
    alpha = check_alpha(alpha, allow_one=False)
    boundary = boundary.lower()
    if source not in _SOURCES:
        raise DomainError(f"source must be one of {_SOURCES}, got {source!r}")
    if source == "closed" and (family != "tfi" or alpha not in CLOSED_ALPHAS):
        raise DomainError(
            f"no closed form for family={family!r}, alpha={alpha:g}; closed forms cover tfi at "
            f"alpha in {{0.5, 2, 4}}; use source='brute' for anything else"
        )
    out = []
    for L in L_grid:
        L = int(L)
        if source == "closed":
            log_det = table2_closed(boundary, alpha, L)
        else:
            spec = ModelSpec(family, boundary, L, n=n, m=m)
            if not spec.is_g_model:
                raise DomainError(f"family {family!r} has no correlation matrix G")
            log_det = _log_det_brute(spec, alpha, workers)
        out.append((L, (log_det - alpha * L * math.log(2)) / (1 - alpha)))
    return out


def fit_scaling(series, alpha, boundary, source="closed", l_min=None):
    """Fit the conformal ansatz to a series from :func:`entropy_series`.

    Closed-form series drop ``L < 20`` by default.  Series whose largest size
    is below 20 get a finite-size caveat in the result.
    """
    if l_min is None:
        l_min = L_MIN if source == "closed" else 0
    L = np.array([p[0] for p in series], dtype=float)
    y = np.array([p[1] for p in series], dtype=float)
    if len(L) < 4:
        raise FitError(f"need at least 4 sizes, got {len(L)}")
    est = CFTScalingRegressor(l_min=l_min).fit(L, y)
    caveat = None
    if L.max() < L_MIN:
        caveat = "finite-size: all sizes below 20, corrections beyond the ansatz are not negligible"
    return ScalingFit(
        alpha=float(alpha),
        boundary=boundary,
        L_grid=[int(x) for x in L],
        values=[float(v) for v in y],
        fitted=(est.m_, est.b_, est.c_),
        residual_rms=est.residual_rms_,
        predicted=cft_prediction(alpha, boundary),
        caveat=caveat,
        source=source,
    )


def series_to_csv(series, alpha, boundary, source):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["alpha", "boundary", "L", "M_alpha", "source"])
    for L, val in series:
        writer.writerow([f"{alpha:g}", boundary, L, repr(float(val)), source])
    return buf.getvalue()
