import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magic_minors import minors as mn
from magic_minors.exceptions import CapacityError, DomainError
from magic_minors.matrix import conjugate
from magic_minors.models import tfi_g, xx_r
from oracles import spm_oracle, spp_oracle


def test_one_by_one():
    assert mn.spm([[2.0]], 3).by_rank == (1.0, 8.0)
    assert mn.spm([[-0.5]], 2).by_rank == (1.0, 0.25)


def test_tfi_pbc_l2_hand_values():
    g = tfi_g("pbc", 2)
    assert mn.spm(g, 4).total == pytest.approx(3.0, rel=1e-14)
    assert mn.spm(g, 1).total == pytest.approx(2 + 2 * math.sqrt(2), rel=1e-14)
    np.testing.assert_allclose(mn.minor_gf(g, 4).coefficients, [1, 1, 1], rtol=1e-14)


@pytest.mark.parametrize("L", [2, 4, 6])
def test_purity_tfi(L):
    assert mn.spm(tfi_g("pbc", L), 2).total == pytest.approx(2.0**L, rel=1e-12)


def test_empty_matrix():
    ps = mn.minor_gf(np.zeros((0, 0)), 2)
    assert list(ps.coefficients) == [1.0]
    assert ps.term_count == 1


def test_spp_examples():
    a = 1.7
    ps = mn.spp([[0, a], [-a, 0]], 2)
    assert ps.by_rank == (1.0, pytest.approx(a * a))
    assert mn.spp(xx_r("pbc", 4), 1).total == pytest.approx(2 + 2 * math.sqrt(2), rel=1e-13)


def test_spp_zero_row(rng):
    a = rng.standard_normal((6, 6))
    a = a - a.T
    a[2, :] = 0
    a[:, 2] = 0
    ps = mn.spp(a, 1.5)
    ref = spp_oracle(np.delete(np.delete(a, 2, 0), 2, 1), 1.5)
    np.testing.assert_allclose(ps.by_rank, ref + [0.0], rtol=1e-12)


@pytest.mark.parametrize("L", [1, 2, 3, 4])
@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0, 3.0, 8.0])
def test_spm_against_oracle(rng, L, beta):
    m = rng.standard_normal((L, L))
    np.testing.assert_allclose(mn.spm(m, beta).by_rank, spm_oracle(m, beta), rtol=1e-11)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
@pytest.mark.parametrize("beta", [1.0, 2.0, 4.0])
def test_spp_against_oracle(rng, n, beta):
    a = rng.standard_normal((n, n))
    a = a - a.T
    np.testing.assert_allclose(mn.spp(a, beta).by_rank, spp_oracle(a, beta), rtol=1e-11)


def test_complex_matrix(rng):
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    np.testing.assert_allclose(mn.spm(m, 1.5).by_rank, spm_oracle(m, 1.5), rtol=1e-11)
    assert mn.spm(m, 2).total == pytest.approx(mn.spm_fast2(m), rel=1e-11)


def test_fast2_examples():
    assert mn.spm_fast2(np.eye(5)) == pytest.approx(32.0, rel=1e-15)
    g = tfi_g("pbc", 8)
    assert mn.spm_fast2(g) == pytest.approx(256.0, rel=1e-12)
    assert mn.spm(g, 2).total == pytest.approx(256.0, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_fast2_property(L, seed):
    m = np.random.default_rng(seed).standard_normal((L, L))
    assert mn.spm_fast2(m) == pytest.approx(mn.spm(m, 2).total, rel=1e-10)


def test_term_counts():
    assert mn.minor_terms(3) == 20
    assert mn.spm(np.ones((3, 3)), 1).term_count == 20
    assert mn.pfaffian_terms(6) == 32
    assert mn.spp(xx_r("pbc", 6), 1).term_count == 32


def test_worker_count_does_not_change_bits(rng):
    m = rng.standard_normal((9, 9))
    ref = mn.spm(m, 1.3, workers=1)
    for w in (2, 3, 8):
        assert mn.spm(m, 1.3, workers=w) == ref
    a = rng.standard_normal((14, 14))
    a = a - a.T
    ref = mn.spp(a, 0.7, workers=1)
    assert mn.spp(a, 0.7, workers=8) == ref


def test_gauge_invariance(rng):
    m = rng.standard_normal((3, 3))
    c = conjugate(m, perm=[2, 0, 1], phases=np.exp(1j * rng.uniform(0, 6, 3)))
    for beta in (0.5, 1, 3):
        np.testing.assert_allclose(mn.spm(c, beta).by_rank, mn.spm(m, beta).by_rank, rtol=1e-12)


def test_flush_threshold():
    # a rank-one matrix has 2x2 minors at rounding level; they must count as zero
    v = np.array([1.0, 1 / 3, 2 / 7])
    m = np.outer(v, v * 3.1)
    ps = mn.spm(m, 0.25)
    assert ps.by_rank[2] == 0.0 and ps.by_rank[3] == 0.0


def test_capacity():
    with pytest.raises(CapacityError, match="budget"):
        mn.spm(np.eye(4), 1, max_terms=10)
    with pytest.raises(CapacityError):
        mn.spm(np.eye(17), 1)
    with pytest.raises(CapacityError):
        mn.spp(np.zeros((30, 30)), 1)


def test_capacity_env(monkeypatch):
    monkeypatch.setenv(mn.ENV_BUDGET, "50")
    with pytest.raises(CapacityError):
        mn.spm(np.eye(4), 1)
    assert mn.spm(np.eye(3), 1).total == 8.0


def test_override_warns(capsys, monkeypatch):
    mn.spm(np.eye(2), 1, max_terms=10**12)
    assert "warning" not in capsys.readouterr().err
    monkeypatch.setattr(mn, "SPM_SIZE_CAP", 2)
    mn.spm(np.eye(3), 1, max_terms=100)
    assert "beyond the default cap" in capsys.readouterr().err
    assert mn.term_budget("spm", 7) == 7


def test_beta_domain():
    with pytest.raises(DomainError):
        mn.spm(np.eye(2), 0)
    with pytest.raises(DomainError):
        mn.spp(np.zeros((2, 2)), -1)
