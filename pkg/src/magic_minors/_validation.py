"""Input validation helpers in the spirit of ``sklearn.utils.validation``."""

import numbers

import numpy as np

from .exceptions import DimensionError, DomainError

SKEW_TOL = 1e-12


def _as_array(a):
    arr = np.asarray(a)
    if arr.dtype == object or not np.issubdtype(arr.dtype, np.number):
        raise DimensionError(f"expected a numeric array, got dtype {arr.dtype}")
    if np.iscomplexobj(arr):
        arr = arr.astype(np.complex128, copy=False)
    else:
        arr = arr.astype(np.float64, copy=False)
    return arr


def check_matrix(a):
    """Return ``a`` as a 2-D float64/complex128 array."""
    arr = _as_array(a)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {arr.shape}")
    return arr


def check_square(a):
    arr = check_matrix(a)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def check_skew(a, tol=SKEW_TOL, even=True):
    """Antisymmetrize ``a`` as (A - A^T)/2 and return a read-only copy.

    Raises DimensionError when the correction exceeds ``tol`` in max-norm or,
    with ``even=True``, when the dimension is odd.
    """
    arr = check_square(a)
    if even and arr.shape[0] % 2:
        raise DimensionError(f"skew matrix must have even dimension, got {arr.shape[0]}")
    skew = (arr - arr.T) / 2
    if arr.size and np.max(np.abs(skew - arr)) > tol:
        raise DimensionError(
            f"matrix is not antisymmetric: max |A + A^T|/2 = {np.max(np.abs(skew - arr)):.3e} > {tol}"
        )
    skew.setflags(write=False)
    return skew


def check_alpha(alpha, name="alpha", allow_one=True):
    if not isinstance(alpha, numbers.Real) or isinstance(alpha, bool):
        raise DomainError(f"{name} must be a real number, got {alpha!r}")
    alpha = float(alpha)
    if not np.isfinite(alpha) or alpha <= 0:
        raise DomainError(f"{name} must be positive and finite, got {alpha}")
    if not allow_one and alpha == 1.0:
        raise DomainError(f"{name} = 1 is singular here; use the Shannon limit instead")
    return alpha


def check_index_set(indices, n):
    """Validate a strictly increasing tuple of 0-based indices in ``range(n)``."""
    idx = tuple(int(i) for i in indices)
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise DimensionError(f"index set must be strictly increasing, got {idx}")
    if idx and (idx[0] < 0 or idx[-1] >= n):
        raise DimensionError(f"index set {idx} out of range for dimension {n}")
    return idx


def check_permutation(perm, n):
    p = np.asarray(perm, dtype=np.intp)
    if p.shape != (n,) or not np.array_equal(np.sort(p), np.arange(n)):
        raise DimensionError(f"not a permutation of range({n}): {perm!r}")
    return p
