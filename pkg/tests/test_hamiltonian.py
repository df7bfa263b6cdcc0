import math

import numpy as np
import pytest

from conftest import SX, SY, dense_phase_space
from dncgraphene.algebra import build_phase_space
from dncgraphene.fock import DimensionError, OperatorMatrix, build_basis
from dncgraphene.hamiltonian import (PhysParams, SpinorOperator, build_H0, build_terms, valley_variant)

SZ = np.diag([1.0, -1.0]).astype(complex)


def dense_terms(n_cut, theta, tau, s=1.0, hbar=1.0, l_b=1.0, v_f=1.0):
    x, y, px, py = dense_phase_space(n_cut, hbar, l_b)
    k = hbar / (2 * l_b**2)
    h0 = v_f * (np.kron(SX, px + k * y) + s * np.kron(SY, py - k * x))
    ht = v_f * theta / (4 * l_b**2) * (np.kron(SX, px) + s * np.kron(SY, py))
    y2 = y @ y
    spatial = y2 @ py + py @ y2 - hbar / l_b**2 * 0.5 * (x @ y2 + y2 @ x)
    hu = v_f * tau / 2 * s * np.kron(SY, spatial)
    return h0, ht, hu


@pytest.mark.parametrize("valley,s", [("K", 1.0), ("Kprime", -1.0)])
def test_terms_match_dense_oracle(valley, s):
    p = PhysParams(n_cut=6, theta=0.2, tau=0.3, valley=valley)
    t = build_terms(p)
    for mine, ref in zip((t.H0, t.HTheta, t.HTau), dense_terms(6, 0.2, 0.3, s)):
        assert np.allclose(mine.toarray(), ref, atol=1e-13)


def test_terms_dense_oracle_scaled_units():
    p = PhysParams(l_b=1.7, v_f=0.8, hbar=1.3, theta=0.05, tau=0.02, n_cut=5)
    t = build_terms(p)
    for mine, ref in zip((t.H0, t.HTheta, t.HTau), dense_terms(5, 0.05, 0.02, 1.0, 1.3, 1.7, 0.8)):
        assert np.allclose(mine.toarray(), ref, atol=1e-12)


def test_hermitian_and_chiral():
    t = build_terms(PhysParams(n_cut=10, theta=0.1, tau=0.1))
    for term in (t.H0, t.HTheta, t.HTau, t.total()):
        assert term.hermitian()
        assert term.is_chiral()
        m = term.toarray()
        sz = np.kron(SZ, np.eye(t.basis.dim))
        assert np.abs(sz @ m + m @ sz).max() < 1e-13


def test_valley_variant_equals_direct_build():
    kp = build_terms(PhysParams(n_cut=7, theta=0.1, tau=0.2, valley="Kprime"))
    k = build_terms(PhysParams(n_cut=7, theta=0.1, tau=0.2))
    for a, b in ((k.H0, kp.H0), (k.HTheta, kp.HTheta), (k.HTau, kp.HTau)):
        assert valley_variant(a, "Kprime").allclose(b, atol=0)
        assert valley_variant(a, "K") is a
    with pytest.raises(ValueError):
        valley_variant(k.H0, "M")


def test_from_pauli_blocks():
    b = build_basis(1)
    o = OperatorMatrix.identity(b.dim)
    s = SpinorOperator.from_pauli(b, o0=o * 2, oz=o)
    assert np.allclose(s.toarray(), np.kron(np.diag([3, 1]), np.eye(4)))
    assert not s.is_chiral()
    assert SpinorOperator.zeros(b).max_abs() == 0.0


def test_spinor_arithmetic():
    t = build_terms(PhysParams(n_cut=4, tau=1.0))
    a, b = t.H0, t.HTau
    assert np.allclose((a + b * 0.5).toarray(), a.toarray() + 0.5 * b.toarray())
    assert np.allclose((a - b).toarray(), a.toarray() - b.toarray())
    assert (a.dagger() - a).max_abs() < 1e-14
    v = np.arange(a.size, dtype=complex)
    assert np.allclose(a.apply(v), a.toarray() @ v)
    with pytest.raises(DimensionError):
        a + build_terms(PhysParams(n_cut=3)).H0


def test_non_hermitian_detected():
    b = build_basis(2)
    ad = build_phase_space(b).x
    op = SpinorOperator(b, OperatorMatrix.zeros(b.dim), ad, OperatorMatrix.zeros(b.dim) + ad * 2,
                        OperatorMatrix.zeros(b.dim))
    assert op.hermiticity_defect() > 1
    assert not op.hermitian()


@pytest.mark.parametrize("kw", [dict(l_b=0), dict(v_f=-1), dict(hbar=0), dict(valley="M"),
                                dict(n_cut=0), dict(n_cut=2.5)])
def test_params_validation(kw):
    with pytest.raises(ValueError):
        PhysParams(**kw)


def test_natural_units():
    p = PhysParams(l_b=2.0, v_f=3.0, hbar=0.5, theta=8.0, tau=0.25)
    n = p.natural()
    assert (n.l_b, n.v_f, n.hbar) == (1.0, 1.0, 1.0)
    assert n.theta == 2.0 and n.tau == 1.0
    assert p.energy_unit == pytest.approx(0.75)
    assert p.gamma == pytest.approx(1 / (2 * math.sqrt(2)))


def test_from_field():
    p = PhysParams.from_field(1.0, 1e6, 6.582119569e-16, n_cut=3)
    assert p.l_b == pytest.approx(2.5656e-8, rel=1e-4)
    with pytest.raises(ValueError):
        PhysParams.from_field(0.0, 1e6, 6.6e-16)


def test_ops_cutoff_mismatch():
    ops = build_phase_space(build_basis(5))
    with pytest.raises(ValueError):
        build_H0(PhysParams(n_cut=6), ops)
    with pytest.raises(ValueError):
        build_H0(PhysParams(n_cut=5, hbar=2.0), ops)


def test_h21_from_mode_transform():
    t = build_terms(PhysParams(n_cut=6))
    ops, kappa = t.ops, 0.5
    norm = math.sqrt(2 * kappa)
    a_x = (ops.x * kappa + ops.px * 1j) / norm
    a_y = (ops.y * kappa + ops.py * 1j) / norm
    assert t.H0.ba.allclose((a_y - a_x * 1j) * norm, atol=1e-14)
    assert t.H0.ab.allclose(t.H0.ba.dagger(), atol=0)
    assert t.H0.aa.nnz == t.H0.bb.nnz == 0


def test_linearity_and_zero_limits():
    base = build_terms(PhysParams(n_cut=5))
    assert base.HTheta.max_abs() == 0 and base.HTau.max_abs() == 0
    assert base.total().allclose(base.H0, atol=0)
    one = build_terms(PhysParams(n_cut=5, theta=0.01, tau=0.05))
    two = build_terms(PhysParams(n_cut=5, theta=0.02, tau=0.1))
    assert (one.HTheta * 2).allclose(two.HTheta, atol=1e-15)
    assert (one.HTau * 2).allclose(two.HTau, atol=1e-13)
    assert one.HTau.hermiticity_defect() < 1e-12
    assert valley_variant(one.HTau, "Kprime").hermiticity_defect() < 1e-12


def test_valley_involution():
    h = build_terms(PhysParams(n_cut=4, tau=0.3)).total()
    assert valley_variant(valley_variant(h, "Kprime"), "Kprime").allclose(h, atol=0)


def test_level_multiplicity_grows():
    from dncgraphene.spectral import exact_diagonalize, find_level, group_degenerate
    mult = []
    for n_cut in (10, 20, 40):
        levels = group_degenerate(exact_diagonalize(build_terms(PhysParams(n_cut=n_cut)).H0))
        mult.append(find_level(levels, math.sqrt(2)).degeneracy)
    assert mult == sorted(mult) and mult[0] < mult[-1]
