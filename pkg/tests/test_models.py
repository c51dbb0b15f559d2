import math

import numpy as np
import pytest

from magic_minors.exceptions import ModelError, SingularSymbolError, SpecError
from magic_minors.models import ModelSpec, build_matrix, symbol_g, tfi_g, xx_r
from oracles import tfi_pbc_entry

S = math.sqrt(2) / 2


def test_tfi_small_values():
    assert tfi_g("pbc", 1).tolist() == [[1.0]]
    np.testing.assert_allclose(tfi_g("pbc", 2), [[S, S], [-S, S]], atol=1e-15)


def test_tfi_pbc_entrywise_against_formula():
    L = 7
    g = tfi_g("pbc", L)
    for j in range(1, L + 1):
        for k in range(1, L + 1):
            assert g[j - 1, k - 1] == pytest.approx(tfi_pbc_entry(j, k, L), rel=1e-13)


def test_tfi_obc_l2_denominator_five():
    g = tfi_g("obc", 2)
    d = 5

    def entry(j, k):
        return (-1) ** (j - k) / d * (
            1 / math.sin(math.pi / d * (j - k + 0.5)) + 1 / math.sin(math.pi / d * (j + k - 0.5))
        )

    np.testing.assert_allclose(g, [[entry(1, 1), entry(1, 2)], [entry(2, 1), entry(2, 2)]], rtol=1e-14)


def test_xx_pbc_l2():
    np.testing.assert_allclose(xx_r("pbc", 2), [[0, -1], [1, 0]], atol=1e-15)


@pytest.mark.parametrize("bc", ["pbc", "obc"])
@pytest.mark.parametrize("L", [2, 4, 6, 8, 10, 12])
def test_xx_structure(bc, L):
    r = xx_r(bc, L)
    assert np.array_equal(r, -r.T)
    j = np.arange(L)
    same_parity = (j[:, None] + j[None, :]) % 2 == 0
    assert np.all(r[same_parity] == 0)


@pytest.mark.parametrize(
    "spec",
    [ModelSpec("tfi", bc, L) for bc in ("pbc", "obc") for L in range(1, 13)]
    + [ModelSpec("zn+1", "pbc", L, n=n) for n in (1, 2, 3) for L in range(2 * n, 13, 2 * n)]
    + [ModelSpec("chiral", "pbc", L, m=m) for m in (1, 2, 3) for L in range(4 * m, 13, 4 * m)],
    ids=lambda s: s.tag,
)
def test_g_models_are_orthogonal(spec):
    g = build_matrix(spec)
    assert g.dtype == np.float64
    np.testing.assert_allclose(g @ g.T, np.eye(spec.L), atol=1e-12)


@pytest.mark.parametrize("L", [2, 4, 6, 8, 10])
def test_z_plus_one_is_alternating_gauge_of_tfi(L):
    # the half-shifted construction and the Ising chain differ by D = diag(+1, -1, ...)
    d = (-1.0) ** np.arange(L)
    g = symbol_g(ModelSpec("zn+1", "pbc", L, n=1))
    np.testing.assert_allclose(g, d[:, None] * tfi_g("pbc", L) * d[None, :], atol=1e-13)
    np.testing.assert_allclose(symbol_g(ModelSpec("tfi", "pbc", L)), g, atol=1e-15)


def test_chiral_l4_real_orthogonal():
    g = symbol_g(ModelSpec("chiral", "pbc", 4, m=1))
    np.testing.assert_allclose(g @ g.T, np.eye(4), atol=1e-12)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(family="xx", L=3),
        dict(family="zn+1", L=6, n=2),
        dict(family="chiral", L=6, m=1),
        dict(family="chiral", L=12, m=2),
        dict(family="zn+1", boundary="obc", L=4),
        dict(family="tfi", L=0),
        dict(family="heisenberg", L=4),
        dict(family="tfi", boundary="twisted", L=4),
    ],
)
def test_spec_validation(kwargs):
    with pytest.raises(SpecError):
        ModelSpec(**kwargs)


def test_singular_symbol_detected():
    # bypass validation: on the L = 2 grid theta = pi/2, 3pi/2 both hit zeros of z^2 + 1
    spec = ModelSpec("zn+1", "pbc", 4, n=2)
    object.__setattr__(spec, "L", 2)
    with pytest.raises(SingularSymbolError):
        symbol_g(spec)
    assert issubclass(SingularSymbolError, ModelError)


def test_build_matrix_dispatch():
    assert build_matrix(ModelSpec("xx", "pbc", 4)).shape == (4, 4)
    assert ModelSpec("XX", "PBC", 4).tag == "xx[pbc,L=4]"
    assert not ModelSpec("xx", "obc", 4).is_g_model
