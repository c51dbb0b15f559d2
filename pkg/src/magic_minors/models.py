"""Correlation matrices of the critical free-fermion chains.

Two families of constructors:

* closed-form lattice matrices of the critical transverse-field Ising chain
  (``G``) and the XX chain (``R``, checkerboard reference configuration),
  for periodic and open boundaries;
* the half-shifted correlation matrix ``G^(f)`` of a translation-invariant
  chain with dispersion polynomial ``f``, built from its unit-circle symbol
  ``s(theta) = f(e^{i theta}) / |f(e^{i theta})|``.

Site labels j, k run from 1 to L inside the formulas, exactly as the
half-shifted arguments are written; the returned arrays are 0-indexed as usual.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._validation import check_skew
from .exceptions import ModelError, SingularSymbolError, SpecError

__all__ = [
    "FAMILIES",
    "G_FAMILIES",
    "ModelSpec",
    "tfi_g",
    "xx_r",
    "symbol_g",
    "symbol",
    "build_matrix",
]

FAMILIES = ("tfi", "xx", "zn+1", "chiral")
G_FAMILIES = ("tfi", "zn+1", "chiral")
BOUNDARIES = ("pbc", "obc")

_ZERO_TOL = 1e-12
_IMAG_TOL = 1e-12


@dataclass(frozen=True)
class ModelSpec:
    """Which chain, which boundary, how many sites.

    ``n`` is the power in ``f(z) = z^n + 1`` and ``m`` the power in
    ``f(z) = z^m + z^-m``; both default to 1 for their family.
    """

    family: str
    boundary: str = "pbc"
    L: int = 2
    n: Optional[int] = None
    m: Optional[int] = None

    def __post_init__(self):
        fam = str(self.family).lower()
        bc = str(self.boundary).lower()
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "boundary", bc)
        if fam not in FAMILIES:
            raise SpecError(f"unknown model family {self.family!r}; choose from {FAMILIES}")
        if bc not in BOUNDARIES:
            raise SpecError(f"unknown boundary {self.boundary!r}; choose pbc or obc")
        if not isinstance(self.L, (int, np.integer)) or self.L < 1:
            raise SpecError(f"L must be a positive integer, got {self.L!r}")
        if fam == "zn+1":
            n = 1 if self.n is None else int(self.n)
            object.__setattr__(self, "n", n)
            if n < 1:
                raise SpecError(f"zn+1 needs n >= 1, got {n}")
            if self.L % (2 * n):
                raise SpecError(f"zn+1 requires 2n | L (n={n}, L={self.L})")
        elif fam == "chiral":
            m = 1 if self.m is None else int(self.m)
            object.__setattr__(self, "m", m)
            if m < 1:
                raise SpecError(f"chiral needs m >= 1, got {m}")
            if self.L % (2 * m) or (self.L // (2 * m)) % 2:
                raise SpecError(f"chiral requires 2m | L and L/(2m) even (m={m}, L={self.L})")
        elif fam == "xx" and self.L % 2:
            raise SpecError(f"XX chain requires even L, got {self.L}")
        if fam in ("zn+1", "chiral") and bc != "pbc":
            raise SpecError(f"{fam} family is defined for periodic boundaries only")

    @property
    def is_g_model(self):
        """True when the model is described by a correlation matrix G."""
        return self.family in G_FAMILIES

    @property
    def tag(self):
        extra = f",n={self.n}" if self.family == "zn+1" else f",m={self.m}" if self.family == "chiral" else ""
        return f"{self.family}[{self.boundary},L={self.L}{extra}]"


def _sites(L):
    j = np.arange(1, L + 1, dtype=np.float64)
    return j[:, None], j[None, :]


def tfi_g(boundary, L):
    """Correlation matrix of the critical transverse-field Ising chain."""
    boundary = ModelSpec("tfi", boundary, L).boundary
    j, k = _sites(L)
    sign = (-1.0) ** (j - k)
    if boundary == "pbc":
        return sign / L / np.sin(np.pi / L * (j - k + 0.5))
    d = 2 * L + 1
    return sign / d * (1 / np.sin(np.pi / d * (j - k + 0.5)) + 1 / np.sin(np.pi / d * (j + k - 0.5)))


def xx_r(boundary, L):
    """Antisymmetric R matrix of the XX chain ground state, checkerboard 1010... reference.

    Entries with j + k even are exactly zero.  For open boundaries the
    two-cosecant expression is used for every (j odd, k even) pair in either
    order and the antisymmetric image fills (j even, k odd).
    """
    boundary = ModelSpec("xx", boundary, L).boundary
    j, k = _sites(L)
    odd_sum = ((j + k) % 2) == 1
    r = np.zeros((L, L))
    if boundary == "pbc":
        upper = odd_sum & (j < k)
        with np.errstate(divide="ignore"):
            vals = (-1.0) ** ((j + k + 1) // 2) * (2.0 / L) / np.sin(np.pi * (j - k) / L)
        r[upper] = vals[upper]
        r = r - r.T
    else:
        theta = np.pi / (L + 1)
        sel = (j % 2 == 1) & (k % 2 == 0)
        with np.errstate(divide="ignore"):
            vals = (1 / np.sin((k - j) / 2 * theta) + 1 / np.sin((k + j) / 2 * theta)) / (L + 1)
        r[sel] = vals[sel]
        r = r - r.T
    return np.array(check_skew(r))


def symbol(spec):
    """Return ``f`` as a callable on the unit circle for a symbol family."""
    if spec.family == "tfi":
        return lambda z: z + 1
    if spec.family == "zn+1":
        n = spec.n
        return lambda z: z**n + 1
    if spec.family == "chiral":
        m = spec.m
        return lambda z: z**m + z ** (-m)
    raise SpecError(f"family {spec.family!r} has no symbol representation")


def symbol_g(spec):
    """Half-shifted correlation matrix ``G^(f)`` on the grid theta_k = 2pi(k - 1/2)/L.

    ``tfi`` is treated as ``f(z) = z + 1`` (periodic only).  The matrix is real
    for all supported families; an imaginary residue above 1e-12 is a bug and
    raises :class:`ModelError`.
    """
    if spec.boundary != "pbc":
        raise SpecError("symbol matrices are defined for periodic boundaries only")
    L = spec.L
    theta = 2 * np.pi / L * (np.arange(1, L + 1) - 0.5)
    fz = symbol(spec)(np.exp(1j * theta))
    mag = np.abs(fz)
    if np.any(mag < _ZERO_TOL):
        k = int(np.argmin(mag)) + 1
        raise SingularSymbolError(f"grid point theta_{k} hits a zero of f for {spec.tag}")
    s = fz / mag
    d = np.arange(-(L - 1), L)
    # kernel[d] = (-1)^d / L * sum_k s_k exp(i theta_k d)
    kernel = ((-1.0) ** d) / L * (np.exp(1j * np.outer(d, theta)) @ s)
    if np.max(np.abs(kernel.imag)) > _IMAG_TOL:
        raise ModelError(f"{spec.tag}: correlation matrix is not real (|Im| = {np.max(np.abs(kernel.imag)):.2e})")
    j = np.arange(L)
    return kernel.real[(j[:, None] - j[None, :]) + (L - 1)]


def build_matrix(spec):
    """The natural matrix of a model: ``G`` for Ising/symbol families, ``R`` for XX."""
    if spec.family == "tfi":
        return tfi_g(spec.boundary, spec.L)
    if spec.family == "xx":
        return xx_r(spec.boundary, spec.L)
    return symbol_g(spec)
