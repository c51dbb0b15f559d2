"""Rényi entropies of fermionic Gaussian states from power sums.

* Shannon-Rényi entropy of ``|R, C>`` in the occupation basis:
  ``H_alpha = ln(Pf_{2 alpha}(R) / N_R^{2 alpha}) / (1 - alpha)`` with
  ``N_R = det(I + R^dagger R)^{1/4}``.
* Stabilizer Rényi entropy from the correlation matrix ``G``:
  ``M_alpha = ln(Det_{2 alpha}(G) / Det_2(G)^alpha) / (1 - alpha)``, where
  purity fixes ``Det_2(G) = 2^L``.

Everything is natural-log units and is carried in log space.  ``alpha = 1``
is handled by :func:`shannon_limit`, which enumerates the distribution
itself.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_alpha, check_skew, check_square
from .exceptions import ModelError
from .minors import FLUSH, log_spm_fast2, reduce_minors, reduce_pfaffians, spm, spp

__all__ = [
    "EntropyResult",
    "Normalization",
    "normalization",
    "shannon_renyi",
    "stabilizer_renyi",
    "shannon_limit",
    "check_purity",
    "PURITY_RTOL",
]

PURITY_RTOL = 1e-8
_NORM_RTOL = 1e-8


@dataclass(frozen=True)
class EntropyResult:
    alpha: float
    value: float
    numerator_log: float
    normalization_log: float
    model: str = "raw"
    kind: str = "SRE"

    def as_row(self):
        return {
            "kind": self.kind,
            "model": self.model,
            "alpha": self.alpha,
            "value": self.value,
            "numerator_log": self.numerator_log,
            "normalization_log": self.normalization_log,
        }


@dataclass(frozen=True)
class Normalization:
    log_nr: float

    @property
    def value(self):
        return math.exp(self.log_nr)


def normalization(r):
    """``log N_R`` with ``N_R = det(I + R^dagger R)^{1/4}``, never exponentiated."""
    r = check_skew(r, even=False)
    if r.shape[0] == 0:
        return Normalization(0.0)
    _, logdet = np.linalg.slogdet(np.eye(r.shape[0]) + r.conj().T @ r)
    return Normalization(float(logdet) / 4)


def _renyi(alpha, num_log, norm_log, model, kind):
    value = (num_log - norm_log) / (1 - alpha)
    return EntropyResult(alpha, value, num_log, norm_log, model, kind)


def shannon_renyi(r, alpha, model="raw", workers=None, max_terms=None):
    """Shannon-Rényi entropy of the Gaussian state with pairing matrix ``r``."""
    alpha = check_alpha(alpha, allow_one=False)
    r = check_skew(r)
    num = spp(r, 2 * alpha, workers=workers, max_terms=max_terms)
    norm = normalization(r)
    return _renyi(alpha, num.log_total, 2 * alpha * norm.log_nr, model, "SR")


def check_purity(g, rtol=PURITY_RTOL):
    """Raise :class:`ModelError` unless ``Det_2(G) = 2^L`` to ``rtol``.

    Returns ``log Det_2(G)``.
    """
    g = check_square(g)
    L = g.shape[0]
    log_det2 = log_spm_fast2(g)
    if abs(math.expm1(log_det2 - L * math.log(2))) > rtol:
        raise ModelError(
            f"purity violated: Det_2(G) = exp({log_det2:.12g}) but 2^L = exp({L * math.log(2):.12g}); "
            "the correlation matrix is not orthogonal"
        )
    return log_det2


def stabilizer_renyi(g, alpha, model="raw", workers=None, max_terms=None, log_numerator=None):
    """Stabilizer Rényi entropy from the correlation matrix ``g``.

    Parameters
    ----------
    g : array_like, shape (L, L)
    alpha : float
        Rényi index, positive and not 1.
    log_numerator : float, optional
        ``log Det_{2 alpha}(G)`` from a closed form; skips enumeration.

    Raises
    ------
    ModelError
        If the purity check ``Det_2(G) = 2^L`` fails.
    """
    alpha = check_alpha(alpha, allow_one=False)
    g = check_square(g)
    L = g.shape[0]
    check_purity(g)
    if log_numerator is None:
        log_numerator = spm(g, 2 * alpha, workers=workers, max_terms=max_terms).log_total
    return _renyi(alpha, float(log_numerator), alpha * L * math.log(2), model, "SRE")


def _entropy_terms(log_norm):
    # summand -q ln q with q = mag^2 / norm
    def term(mag):
        mag = np.where(mag < FLUSH, 0.0, mag)
        q = mag**2 * math.exp(-log_norm)
        out = np.zeros_like(q)
        pos = q > 0
        out[pos] = -q[pos] * np.log(q[pos])
        return out

    return term


def _prob_terms(log_norm):
    def term(mag):
        mag = np.where(mag < FLUSH, 0.0, mag)
        return mag**2 * math.exp(-log_norm)

    return term


def shannon_limit(mat, which="SRE", model="raw", workers=None, max_terms=None):
    """The alpha -> 1 entropy by explicit enumeration of the distribution.

    ``which="SRE"``: q_{I,J} = |det G[I,J]|^2 / 2^L over all minors.
    ``which="SR"``: p_S = |pf R[S,S]|^2 / N_R^2 over even principal sets.
    The distribution is checked to sum to 1 within 1e-8.
    """
    which = which.upper()
    if which == "SRE":
        g = check_square(mat)
        log_norm = g.shape[0] * math.log(2)
        reduce = reduce_minors
    elif which == "SR":
        g = check_skew(mat)
        log_norm = 2 * normalization(g).log_nr
        reduce = reduce_pfaffians
    else:
        raise ValueError(f"which must be 'SR' or 'SRE', got {which!r}")
    probs, _ = reduce(g, _prob_terms(log_norm), workers, max_terms)
    total = math.fsum(probs)
    if abs(total - 1) > _NORM_RTOL:
        raise ModelError(f"{which} distribution sums to {total!r}, not 1")
    ent, _ = reduce(g, _entropy_terms(log_norm), workers, max_terms)
    value = math.fsum(ent)
    # numerator_log holds log(sum of probabilities), 0 up to rounding
    return EntropyResult(1.0, value, math.log(total), log_norm, model, which)
