"""Dense kernels: determinants, Pfaffians, submatrices and gauge conjugations.

Matrices are plain numpy arrays (float64 or complex128).  Skew-symmetric
inputs go through :func:`~magic_minors._validation.check_skew`, which
antisymmetrizes and rejects anything further than 1e-12 from skew.  Index
sets and permutations are 0-based.

The text format used by the CLI is::

    n_rows n_cols real|complex
    a11 a12 ...
    ...

with complex entries written as ``a+bi`` and every number printed with 17
significant digits, so that a dump/load round trip is exact.
"""

import numpy as np

from ._validation import (
    check_index_set,
    check_matrix,
    check_permutation,
    check_skew,
    check_square,
)
from .exceptions import DimensionError

__all__ = [
    "determinant",
    "pfaffian",
    "pfaffian_batch",
    "slogpf",
    "log_abs_pfaffian",
    "submatrix",
    "conjugate",
    "permutation_matrix",
    "format_matrix",
    "parse_matrix",
]


def determinant(m):
    """Determinant by pivoted LU; the 0x0 determinant is 1."""
    m = check_square(m)
    if m.shape[0] == 0:
        return 1.0
    d = np.linalg.det(m)
    return complex(d) if np.iscomplexobj(d) else float(d)


def pfaffian_batch(a):
    """Pfaffians of a stack of skew matrices, shape ``(B, n, n)`` -> ``(B,)``.

    Skew-symmetric Gaussian elimination (Parlett-Reid) with partial pivoting
    on the column below the current 2x2 pivot.  Each row/column swap flips
    the sign.  A zero pivot column makes that Pfaffian exactly zero.  The
    input is not validated for skewness; callers pass principal submatrices
    of an already validated matrix.
    """
    a = np.array(a, dtype=np.result_type(a, np.float64), copy=True)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise DimensionError(f"expected a stack of square matrices, got shape {a.shape}")
    batch, n = a.shape[0], a.shape[1]
    out = np.ones(batch, dtype=a.dtype)
    if n % 2:
        return np.zeros(batch, dtype=a.dtype)
    dead = np.zeros(batch, dtype=bool)
    rows = np.arange(batch)
    for k in range(0, n - 1, 2):
        piv_idx = k + 1 + np.argmax(np.abs(a[:, k + 1 :, k]), axis=1)
        swap = piv_idx != k + 1
        if swap.any():
            b, p = rows[swap], piv_idx[swap]
            tmp = a[b, k + 1, :].copy()
            a[b, k + 1, :] = a[b, p, :]
            a[b, p, :] = tmp
            tmp = a[b, :, k + 1].copy()
            a[b, :, k + 1] = a[b, :, p]
            a[b, :, p] = tmp
            out[swap] = -out[swap]
        piv = a[:, k, k + 1]
        zero = piv == 0
        dead |= zero
        out = out * piv
        if k + 2 < n:
            safe = np.where(zero, 1.0, piv)
            tau = a[:, k, k + 2 :] / safe[:, None]
            col = a[:, k + 2 :, k + 1]
            a[:, k + 2 :, k + 2 :] += tau[:, :, None] * col[:, None, :] - col[:, :, None] * tau[:, None, :]
    out[dead] = 0
    return out


def pfaffian(a):
    """Pfaffian of an even-dimensional skew matrix; pf of 0x0 is 1.

    >>> pfaffian([[0, 3], [-3, 0]])
    3.0
    """
    a = check_skew(a)
    val = pfaffian_batch(a[None])[0]
    return complex(val) if np.iscomplexobj(val) else float(val)


def slogpf(a):
    """Sign (or unit phase) and log-magnitude of the Pfaffian.

    Same elimination as :func:`pfaffian` but accumulated in log space, for
    matrices whose Pfaffian would overflow.
    """
    a = np.array(check_skew(a), copy=True)
    n = a.shape[0]
    sign = 1.0 + 0j if np.iscomplexobj(a) else 1.0
    logabs = 0.0
    for k in range(0, n - 1, 2):
        p = k + 1 + int(np.argmax(np.abs(a[k + 1 :, k])))
        if p != k + 1:
            a[[k + 1, p], :] = a[[p, k + 1], :]
            a[:, [k + 1, p]] = a[:, [p, k + 1]]
            sign = -sign
        piv = a[k, k + 1]
        if piv == 0:
            return 0.0 * sign, -np.inf
        sign = sign * (piv / abs(piv))
        logabs += np.log(abs(piv))
        if k + 2 < n:
            tau = a[k, k + 2 :] / piv
            col = a[k + 2 :, k + 1].copy()
            a[k + 2 :, k + 2 :] += np.outer(tau, col) - np.outer(col, tau)
    return sign, float(logabs)


def log_abs_pfaffian(a):
    """``log |pf A|`` as half of ``log |det A|``.

    Uses LAPACK LU instead of the Python-level elimination loop, which is the
    bottleneck for the 4000x4000 matrices of the open-boundary closed form.
    """
    a = check_skew(a)
    if a.shape[0] == 0:
        return 0.0
    _, logdet = np.linalg.slogdet(a)
    return float(logdet) / 2


def submatrix(m, rows, cols):
    """Select ``m[rows, cols]`` preserving order; empty sets give a 0x0 matrix."""
    m = check_matrix(m)
    r = check_index_set(rows, m.shape[0])
    c = check_index_set(cols, m.shape[1])
    return m[np.ix_(r, c)]


def permutation_matrix(perm):
    """Matrix P with ``(P.T @ M @ P)[i, j] == M[perm[i], perm[j]]``."""
    p = check_permutation(perm, len(perm))
    out = np.zeros((len(p), len(p)))
    out[p, np.arange(len(p))] = 1.0
    return out


def conjugate(m, perm=None, phases=None):
    """Return ``D P^T M P D*`` for a permutation and a unit-modulus diagonal.

    Parameters
    ----------
    m : array_like, shape (n, n)
    perm : array_like of int, optional
        0-based permutation; ``None`` is the identity.
    phases : array_like, optional
        Diagonal of ``D``.  Entries must have modulus 1.
    """
    m = check_square(m)
    n = m.shape[0]
    out = m
    if perm is not None:
        p = check_permutation(perm, n)
        out = out[np.ix_(p, p)]
    if phases is not None:
        d = np.asarray(phases)
        if d.shape != (n,):
            raise DimensionError(f"phase vector has shape {d.shape}, expected ({n},)")
        if np.any(np.abs(np.abs(d) - 1) > 1e-12):
            raise DimensionError("diagonal gauge entries must have unit modulus")
        out = d[:, None] * out * np.conj(d)[None, :]
        if not np.iscomplexobj(m) and np.all(np.isreal(d)):
            out = out.real
    return np.array(out, copy=True)


def _fmt(x):
    return f"{x:.17g}"


def format_matrix(m):
    """Serialize to the whitespace text format (deterministic output)."""
    m = check_matrix(m)
    kind = "complex" if np.iscomplexobj(m) else "real"
    lines = [f"{m.shape[0]} {m.shape[1]} {kind}"]
    for row in m:
        if kind == "real":
            lines.append(" ".join(_fmt(x) for x in row))
        else:
            lines.append(" ".join(f"{_fmt(z.real)}{'+' if not z.imag < 0 else '-'}{_fmt(abs(z.imag))}i" for z in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text):
    """Inverse of :func:`format_matrix`."""
    tokens = text.split()
    if len(tokens) < 3:
        raise DimensionError("matrix text needs a 'n_rows n_cols real|complex' header")
    try:
        n_rows, n_cols = int(tokens[0]), int(tokens[1])
    except ValueError as exc:
        raise DimensionError(f"bad matrix header: {' '.join(tokens[:3])}") from exc
    kind = tokens[2]
    if kind not in ("real", "complex"):
        raise DimensionError(f"matrix kind must be 'real' or 'complex', got {kind!r}")
    body = tokens[3:]
    if len(body) != n_rows * n_cols:
        raise DimensionError(f"expected {n_rows * n_cols} entries, found {len(body)}")
    try:
        if kind == "real":
            vals = np.array([float(t) for t in body], dtype=np.float64)
        else:
            vals = np.array([complex(t.replace("i", "j")) for t in body], dtype=np.complex128)
    except ValueError as exc:
        raise DimensionError(f"unparseable matrix entry: {exc}") from exc
    return vals.reshape(n_rows, n_cols)
