import math

import numpy as np
import pytest

from specschrod import anharmonic, coffey_evans, harmonic, hydrogen
from specschrod.eig import EigConfig, EigenSolution, eig_general, eig_symmetric, select
from specschrod.errors import ContractViolation, ConvergenceError, InvalidArgument
from specschrod.solve import assemble

BACKENDS = ["reference", "lapack"]


@pytest.fixture(params=BACKENDS)
def cfg(request):
    return EigConfig(backend=request.param)


def _max_offdiag_dot(v):
    g = v.T @ v
    return np.max(np.abs(g - np.diag(np.diag(g))))


# examples


def test_symmetric_diagonal(cfg):
    sol = eig_symmetric(np.diag([3.0, 1.0, 2.0]), cfg)
    np.testing.assert_allclose(sol.re, [1.0, 2.0, 3.0], atol=1e-15)
    np.testing.assert_allclose(sol.vectors, np.eye(3)[:, [1, 2, 0]], atol=1e-15)


def test_symmetric_swap(cfg):
    sol = eig_symmetric(np.array([[0.0, 1.0], [1.0, 0.0]]), cfg)
    np.testing.assert_allclose(sol.re, [-1.0, 1.0], atol=1e-15)
    r = 1 / math.sqrt(2)
    np.testing.assert_allclose(sol.vectors, [[r, r], [-r, r]], atol=1e-15)
    assert np.all(sol.im == 0) and np.all(sol.real_flags)


def test_general_identity(cfg):
    sol = eig_general(np.eye(5), cfg)
    np.testing.assert_allclose(sol.re, np.ones(5), atol=1e-15)
    assert np.all(sol.real_flags)


def test_general_companion(cfg):
    sol = eig_general(np.array([[3.0, -2.0], [1.0, 0.0]]), cfg)
    np.testing.assert_allclose(sol.values, [1.0, 2.0], atol=1e-14)
    assert np.all(sol.real_flags)


def test_complex_pair_kept_and_flagged(cfg):
    sol = eig_general(np.array([[0.0, -1.0], [1.0, 0.0]]), cfg)
    np.testing.assert_allclose(sol.values, [-1j, 1j], atol=1e-15)
    assert not sol.real_flags.any()
    assert sol.real_values().size == 0
    assert sol.complex_values().size == 2
    assert np.max(sol.residuals) <= 1e-14


def test_mixed_real_and_complex(cfg):
    a = np.array([[2.0, 0.0, 0.0], [0.0, 1.0, -3.0], [0.0, 3.0, 1.0]])
    sol = eig_general(a, cfg)
    np.testing.assert_allclose(sol.values, [1 - 3j, 1 + 3j, 2.0], atol=1e-14)
    np.testing.assert_array_equal(sol.real_flags, [False, False, True])
    np.testing.assert_allclose(np.abs(sol.vectors[:, 2]), [1.0, 0.0, 0.0], atol=1e-14)


def test_symmetric_rejects_nonsymmetric(cfg):
    with pytest.raises(ContractViolation):
        eig_symmetric(np.array([[1.0, 2.0], [2.0 + 1e-15, 1.0]]), cfg)
    with pytest.raises(ContractViolation):
        eig_symmetric(assemble(coffey_evans(), 16), cfg)


def test_non_square_rejected(cfg):
    with pytest.raises(InvalidArgument):
        eig_general(np.ones((2, 3)), cfg)
    with pytest.raises(InvalidArgument):
        eig_general(np.array([[np.nan]]), cfg)


def test_unknown_backend():
    with pytest.raises(InvalidArgument):
        EigConfig(backend="magic")


def test_reference_general_convergence_error(rng):
    a = rng.standard_normal((60, 60))
    with pytest.raises(ConvergenceError) as info:
        eig_general(a, EigConfig(max_iter_per_eigenvalue=1))
    assert info.value.category == "convergence-error"
    assert 0 <= info.value.index < 60
    assert str(info.value.index) in str(info.value)


def test_reference_symmetric_convergence_error(rng):
    b = rng.standard_normal((60, 60))
    with pytest.raises(ConvergenceError) as info:
        eig_symmetric(b + b.T, EigConfig(max_iter_per_eigenvalue=1))
    assert info.value.index is not None


def test_values_only(cfg):
    a = assemble(coffey_evans(), 48).matrix
    full = eig_general(a, cfg)
    bare = eig_general(a, EigConfig(backend=cfg.backend, compute_vectors=False))
    assert bare.vectors is None and bare.residuals is None
    np.testing.assert_allclose(bare.re, full.re, rtol=1e-12, atol=1e-10)


# contract properties


@pytest.mark.parametrize("name, n", [("coffey_evans", 128), ("hydrogen", 128)])
def test_general_residuals_and_norms(cfg, name, n):
    pot = {"coffey_evans": coffey_evans, "hydrogen": hydrogen}[name]()
    sol = eig_general(assemble(pot, n, c=2.0), cfg)
    assert np.all(np.diff(sol.re) >= 0)
    np.testing.assert_allclose(np.linalg.norm(sol.vectors, axis=0), 1.0, atol=1e-13)
    assert np.max(sol.residuals[sol.real_flags]) <= 1e-8


def test_symmetric_residuals_and_orthonormality(cfg):
    op = assemble(anharmonic(), 300, h=0.1)
    sol = eig_symmetric(op, cfg)
    assert np.max(sol.residuals) <= 1e-10
    assert _max_offdiag_dot(sol.vectors) <= 1e-10
    np.testing.assert_allclose(np.linalg.norm(sol.vectors, axis=0), 1.0, atol=1e-13)
    assert np.all(sol.im == 0)


def test_symmetric_random_orthonormality(cfg, rng):
    b = rng.standard_normal((150, 150))
    a = b + b.T
    sol = eig_symmetric(a, cfg)
    assert _max_offdiag_dot(sol.vectors) <= 1e-10
    np.testing.assert_allclose(sol.re, np.linalg.eigvalsh(a), atol=1e-10 * sol.norm)


@pytest.mark.parametrize("name", ["coffey_evans", "hydrogen"])
def test_similarity_invariance(cfg, rng, name):
    pot = {"coffey_evans": coffey_evans, "hydrogen": hydrogen}[name]()
    a = np.array(assemble(pot, 64, c=2.0).matrix)
    p = rng.uniform(0.5, 2.0, a.shape[0])
    b = (p[:, None] * a) / p[None, :]
    s1 = eig_general(a, cfg)
    s2 = eig_general(b, cfg)
    assert np.max(np.abs(s1.values - s2.values)) <= 1e-7 * s1.norm


def test_symmetric_general_agreement(cfg, rng):
    b = rng.standard_normal((80, 80))
    for a in (b + b.T, np.array(assemble(harmonic(), 80, h=0.3).matrix)):
        s_sym = eig_symmetric(a, cfg)
        s_gen = eig_general(a, cfg)
        assert np.max(np.abs(s_sym.values - s_gen.values)) <= 1e-8 * s_sym.norm


def test_backends_agree_on_coffey_evans():
    a = assemble(coffey_evans(), 200)
    ref = eig_general(a, EigConfig(backend="reference")).re
    lap = eig_general(a, EigConfig(backend="lapack")).re
    np.testing.assert_allclose(ref[:100], lap[:100], rtol=1e-10, atol=1e-9)


def test_sign_convention(cfg):
    op = assemble(harmonic(), 60, h=0.3)
    for sol in (eig_symmetric(op, cfg), eig_general(op, cfg)):
        v = sol.vectors
        idx = np.argmax(np.abs(v), axis=0)
        assert np.all(v[idx, np.arange(v.shape[1])] > 0)


def test_balancing_off_still_accurate():
    a = assemble(coffey_evans(), 64)
    on = eig_general(a, EigConfig(balance=True)).re
    off = eig_general(a, EigConfig(balance=False)).re
    np.testing.assert_allclose(on[:30], off[:30], rtol=1e-9, atol=1e-8)


# select


def _toy(values):
    values = np.asarray(values, dtype=float)
    return EigenSolution(values, np.zeros_like(values), None, None, np.ones(values.size, bool), 1.0)


def test_select_near_target():
    np.testing.assert_array_equal(select(_toy([-1, 0, 2, 5]), 2, near=0.0).re, [-1.0, 0.0])


def test_select_without_target():
    np.testing.assert_array_equal(select(_toy([-1, 0, 2, 5]), 2).re, [-1.0, 0.0])


def test_select_keeps_ascending_order():
    np.testing.assert_array_equal(select(_toy([-1, 0, 2, 5]), 3, near=4.0).re, [0.0, 2.0, 5.0])


def test_select_skips_complex():
    sol = EigenSolution(
        np.array([0.0, 0.0, 1.0]), np.array([-1.0, 1.0, 0.0]), None, None, np.array([False, False, True]), 1.0
    )
    np.testing.assert_array_equal(select(sol, 1, near=0.0).re, [1.0])
    with pytest.raises(InvalidArgument):
        select(sol, 2)


def test_select_too_many():
    with pytest.raises(InvalidArgument):
        select(_toy([1, 2]), 3)
