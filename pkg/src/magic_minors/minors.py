"""Exhaustive sums over minors and principal Pfaffians.

``spm(M, beta)`` is the sum of ``|det M[I, J]|**beta`` over all pairs of
equal-size row/column subsets, ``spp(A, beta)`` the sum of
``|pf A[S, S]|**beta`` over all even-size principal subsets.  Both are
resolved by rank (``|I| = r`` or ``|S| = 2r``), which doubles as the
coefficient list of the generating polynomial ``sum_r S^(r) t^r``.

Enumeration is split into chunks whose boundaries depend only on the matrix
size, never on the worker count.  Each chunk is reduced with ``math.fsum``
and chunk partials are combined in chunk order, so results are bit-identical
for any number of workers.
"""

import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Tuple

import numpy as np

from ._validation import check_alpha, check_skew, check_square
from .exceptions import CapacityError
from .matrix import pfaffian_batch

__all__ = [
    "PowerSums",
    "spm",
    "spp",
    "spm_fast2",
    "log_spm_fast2",
    "minor_gf",
    "minor_terms",
    "pfaffian_terms",
    "term_budget",
    "reduce_minors",
    "reduce_pfaffians",
    "FLUSH",
    "SPM_SIZE_CAP",
    "SPP_SIZE_CAP",
]

FLUSH = 1e-14
SPM_SIZE_CAP = 16
SPP_SIZE_CAP = 28
ENV_BUDGET = "MAGIC_MINORS_MAX_TERMS"

# entries per chunk (chunk_subsets * r * r); fixed, so chunking is reproducible
_CHUNK_ENTRIES = 1 << 18


@dataclass(frozen=True)
class PowerSums:
    """Rank-resolved power sums.

    Attributes
    ----------
    beta : float
        The power applied to each |minor| or |Pfaffian|.
    by_rank : tuple of float
        ``S^(r)`` for r = 0..L (minors) or r = 0..n/2 (Pfaffians).
        ``by_rank[0]`` is always exactly 1.
    total : float
        Sum of ``by_rank``.
    term_count : int
        Number of subsets (pairs) enumerated.
    """

    beta: float
    by_rank: Tuple[float, ...]
    total: float
    term_count: int

    @property
    def coefficients(self):
        """Coefficients of the generating polynomial, lowest degree first."""
        return np.array(self.by_rank)

    @property
    def log_total(self):
        return math.log(self.total)


def minor_terms(L):
    """Number of (I, J) pairs with |I| = |J|, i.e. C(2L, L)."""
    return math.comb(2 * L, L)


def pfaffian_terms(n):
    """Number of even-size subsets of an n-set."""
    return 1 if n == 0 else 2 ** (n - 1)


def term_budget(kind, max_terms=None):
    """Resolve the enumeration budget: explicit argument, env var, size cap."""
    if max_terms is not None:
        return int(max_terms)
    env = os.environ.get(ENV_BUDGET)
    if env:
        try:
            return int(float(env))
        except ValueError:
            raise CapacityError(f"{ENV_BUDGET}={env!r} is not a number") from None
    return minor_terms(SPM_SIZE_CAP) if kind == "spm" else pfaffian_terms(SPP_SIZE_CAP)


def _check_budget(kind, size, max_terms):
    count = minor_terms(size) if kind == "spm" else pfaffian_terms(size)
    budget = term_budget(kind, max_terms)
    if count > budget:
        cap = SPM_SIZE_CAP if kind == "spm" else SPP_SIZE_CAP
        raise CapacityError(
            f"{kind} on a {size}x{size} matrix needs {count} terms, over the budget of {budget} "
            f"(default cap: size {cap}; override with --max-terms or {ENV_BUDGET})"
        )
    if max_terms is not None and count > term_budget(kind):
        print(f"warning: enumerating {count:.3e} {kind} terms beyond the default cap", file=sys.stderr)
    return count


def _combos(n, r):
    if r == 0:
        return np.zeros((1, 0), dtype=np.intp)
    return np.array(list(combinations(range(n), r)), dtype=np.intp)


def _power_terms(beta):
    def term(mag):
        mag = np.where(mag < FLUSH, 0.0, mag)
        return mag**beta

    return term


def _run(tasks, workers):
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(tasks) <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: t(), tasks))


def reduce_minors(m, term, workers=None, max_terms=None):
    """Apply ``term`` to all |minors| of ``m`` and sum per rank.

    ``term`` maps an array of magnitudes to an array of summands.  Returns
    ``(by_rank, term_count)``; the rank-0 entry is ``term(1.0)``.
    """
    m = check_square(m)
    L = m.shape[0]
    count = _check_budget("spm", L, max_terms)
    by_rank = [float(term(np.array([1.0]))[0])]
    for r in range(1, L + 1):
        sets = _combos(L, r)
        n_sets = len(sets)
        rows_per_chunk = max(1, _CHUNK_ENTRIES // (n_sets * r * r))

        def chunk(lo, hi, sets=sets, r=r):
            rows = sets[lo:hi]
            sub = m[rows[:, None, :, None], sets[None, :, None, :]].reshape(-1, r, r)
            mags = np.abs(np.linalg.det(sub)) if r > 1 else np.abs(sub[:, 0, 0])
            return math.fsum(term(mags))

        tasks = [
            (lambda lo=lo: chunk(lo, min(lo + rows_per_chunk, n_sets)))
            for lo in range(0, n_sets, rows_per_chunk)
        ]
        by_rank.append(math.fsum(_run(tasks, workers)))
    return by_rank, count


def reduce_pfaffians(a, term, workers=None, max_terms=None):
    """Apply ``term`` to all |pf a[S, S]| over even-size S, summed per |S|/2."""
    a = check_skew(a)
    n = a.shape[0]
    count = _check_budget("spp", n, max_terms)
    by_rank = [float(term(np.array([1.0]))[0])]
    for r in range(1, n // 2 + 1):
        sets = _combos(n, 2 * r)
        per_chunk = max(1, _CHUNK_ENTRIES // (4 * r * r))

        def chunk(lo, hi, sets=sets):
            s = sets[lo:hi]
            sub = a[s[:, :, None], s[:, None, :]]
            return math.fsum(term(np.abs(pfaffian_batch(sub))))

        tasks = [(lambda lo=lo: chunk(lo, min(lo + per_chunk, len(sets)))) for lo in range(0, len(sets), per_chunk)]
        by_rank.append(math.fsum(_run(tasks, workers)))
    return by_rank, count


def spm(m, beta, workers=None, max_terms=None):
    """Sum of powers of minors, ``Det_beta(M)``.

    Parameters
    ----------
    m : array_like, shape (L, L)
    beta : float
        Positive power.  Magnitudes below 1e-14 count as exactly zero.
    workers : int, optional
        Thread count; the result does not depend on it.
    max_terms : int, optional
        Enumeration budget override.

    Examples
    --------
    >>> spm([[2.0]], 3).by_rank
    (1.0, 8.0)
    """
    beta = check_alpha(beta, "beta")
    by_rank, count = reduce_minors(m, _power_terms(beta), workers, max_terms)
    return PowerSums(beta, tuple(by_rank), math.fsum(by_rank), count)


def spp(a, beta, workers=None, max_terms=None):
    """Sum of powers of principal Pfaffians, ``Pf_beta(A)``."""
    beta = check_alpha(beta, "beta")
    by_rank, count = reduce_pfaffians(a, _power_terms(beta), workers, max_terms)
    return PowerSums(beta, tuple(by_rank), math.fsum(by_rank), count)


def minor_gf(m, alpha, workers=None, max_terms=None):
    """Generating-function coefficients ``S^(r)_alpha``; same data as ``spm``."""
    return spm(m, alpha, workers=workers, max_terms=max_terms)


def log_spm_fast2(m):
    """``log det(I + M M^dagger)``, the log of ``Det_2(M)`` by Cauchy-Binet."""
    m = check_square(m)
    if m.shape[0] == 0:
        return 0.0
    sign, logdet = np.linalg.slogdet(np.eye(m.shape[0]) + m @ m.conj().T)
    return float(logdet)


def spm_fast2(m):
    """``Det_2(M) = det(I + M M^dagger)`` in O(L^3)."""
    return math.exp(log_spm_fast2(m))
