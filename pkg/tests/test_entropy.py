import math

import numpy as np
import pytest

from magic_minors.entropy import normalization, shannon_limit, shannon_renyi, stabilizer_renyi
from magic_minors.exceptions import ModelError
from magic_minors.identities import doubled_r
from magic_minors.models import ModelSpec, build_matrix, tfi_g, xx_r
from oracles import det_laplace

LN2 = math.log(2)
GRID = (0.5, 0.99, 1.0, 1.01, 2.0, 3.0, 4.0, 6.0)


def test_normalization_examples():
    assert normalization(np.zeros((4, 4))).log_nr == 0.0
    assert normalization([[0, 1], [-1, 0]]).log_nr == pytest.approx(LN2 / 2, rel=1e-15)


@pytest.mark.parametrize("L", [2, 4, 6])
@pytest.mark.parametrize("bc", ["pbc", "obc"])
def test_xx_normalization_is_power_of_two(L, bc):
    assert 2 * normalization(xx_r(bc, 2 * L)).log_nr == pytest.approx(L * LN2, rel=1e-12)


def test_vacuum_has_zero_shannon_renyi():
    for a in (0.5, 2, 3):
        assert shannon_renyi(np.zeros((4, 4)), a).value == pytest.approx(0.0, abs=1e-15)
    assert shannon_limit(np.zeros((4, 4)), "SR").value == 0.0


def test_sr_equals_sre_l4():
    h = shannon_renyi(xx_r("pbc", 8), 2).value
    m = stabilizer_renyi(tfi_g("pbc", 4), 2).value
    assert h == pytest.approx(m, rel=1e-12)


def test_sr_half_xx4():
    pf1 = 2 + 2 * math.sqrt(2)
    nr = math.exp(normalization(xx_r("pbc", 4)).log_nr)
    assert shannon_renyi(xx_r("pbc", 4), 0.5).value == pytest.approx(2 * math.log(pf1 / nr), rel=1e-13)


def test_sre_tfi_l2():
    g = tfi_g("pbc", 2)
    assert stabilizer_renyi(g, 2).value == pytest.approx(math.log(16 / 3), rel=1e-13)
    # Det_8 = 2^-2 * 3^2, so M_4 = ln(2^8 / (9/4)) / 3
    assert stabilizer_renyi(g, 4).value == pytest.approx(math.log(1024 / 9) / 3, rel=1e-13)
    assert stabilizer_renyi(g, 4).value == pytest.approx(1.5780824, abs=1e-7)


@pytest.mark.parametrize("L", [1, 3, 5])
def test_identity_g(L):
    # every nonzero minor of I is a principal 1, so Det_beta(I) = 2^L for all beta
    for a in (0.5, 2, 4):
        assert stabilizer_renyi(np.eye(L), a).value == pytest.approx(L * LN2, rel=1e-13)
    assert shannon_limit(np.eye(L), "SRE").value == pytest.approx(L * LN2, rel=1e-13)


def test_single_qubit_shannon():
    res = shannon_limit([[1.0]], "SRE")
    assert res.value == pytest.approx(LN2, rel=1e-15)
    assert res.alpha == 1.0


def _oracle_shannon_sre(g):
    from itertools import combinations

    L = g.shape[0]
    qs = []
    for r in range(L + 1):
        for rows in combinations(range(L), r):
            for cols in combinations(range(L), r):
                qs.append(det_laplace(g[np.ix_(rows, cols)]) ** 2 / 2**L)
    assert math.fsum(qs) == pytest.approx(1.0, abs=1e-12)
    return -math.fsum(q * math.log(q) for q in qs if q > 1e-28)


def test_shannon_limit_against_oracle():
    g = tfi_g("obc", 3)
    assert shannon_limit(g, "SRE").value == pytest.approx(_oracle_shannon_sre(g), rel=1e-12)


def test_shannon_bracketed():
    g = tfi_g("pbc", 4)
    h1 = shannon_limit(g, "SRE").value
    assert stabilizer_renyi(g, 1.01).value <= h1 <= stabilizer_renyi(g, 0.99).value


def _series(mat, kind):
    out = []
    for a in GRID:
        if a == 1.0:
            out.append(shannon_limit(mat, kind).value)
        elif kind == "SRE":
            out.append(stabilizer_renyi(mat, a).value)
        else:
            out.append(shannon_renyi(mat, a).value)
    return out


@pytest.mark.parametrize(
    "spec",
    [ModelSpec("tfi", "pbc", 4), ModelSpec("tfi", "obc", 5), ModelSpec("chiral", "pbc", 4), ModelSpec("zn+1", "pbc", 6, n=3)],
    ids=lambda s: s.tag,
)
def test_sre_monotone(spec):
    vals = _series(build_matrix(spec), "SRE")
    assert all(b <= a + 1e-10 for a, b in zip(vals, vals[1:]))
    assert all(v >= -1e-12 for v in vals)


@pytest.mark.parametrize("bc", ["pbc", "obc"])
def test_sr_monotone(bc):
    vals = _series(xx_r(bc, 8), "SR")
    assert all(b <= a + 1e-10 for a, b in zip(vals, vals[1:]))


def test_purity_gate(rng):
    with pytest.raises(ModelError, match="purity"):
        stabilizer_renyi(rng.standard_normal((3, 3)), 2)


def test_shannon_normalization_gate(rng):
    with pytest.raises(ModelError):
        shannon_limit(2 * np.eye(2), "SRE")


def test_log_consistency():
    for res in (stabilizer_renyi(tfi_g("obc", 4), 3), shannon_renyi(xx_r("obc", 6), 0.5)):
        assert res.value == (res.numerator_log - res.normalization_log) / (1 - res.alpha)
        assert set(res.as_row()) == {"kind", "model", "alpha", "value", "numerator_log", "normalization_log"}


def test_closed_numerator_shortcut():
    g = tfi_g("pbc", 2)
    assert stabilizer_renyi(g, 2, log_numerator=math.log(3)).value == pytest.approx(math.log(16 / 3))


def test_doubled_r_orthogonal_normalization():
    g = tfi_g("pbc", 5)
    r = doubled_r(g)
    np.testing.assert_allclose(r.T @ r, np.eye(10), atol=1e-12)
    assert 2 * normalization(r).log_nr == pytest.approx(5 * LN2, rel=1e-12)


def test_alpha_one_rejected():
    with pytest.raises(ValueError):
        stabilizer_renyi(np.eye(2), 1)
    with pytest.raises(ValueError):
        shannon_renyi(np.zeros((2, 2)), 1.0)
