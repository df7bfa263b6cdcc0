import numpy as np
import pytest

from conftest import dense_phase_space
from dncgraphene.algebra import (ContractError, build_dnc_coordinates, build_phase_space, build_tau_products,
                                 interior_deviation, verify_canonical_algebra, verify_dnc_algebra)
from dncgraphene.fock import OperatorMatrix, build_basis


@pytest.fixture(scope="module")
def ops20():
    return build_phase_space(build_basis(20))


@pytest.mark.parametrize("hbar,l_b", [(1.0, 1.0), (0.7, 2.3)])
def test_operators_match_dense_oracle(hbar, l_b):
    ops = build_phase_space(build_basis(5), hbar, l_b)
    for mine, ref in zip((ops.x, ops.y, ops.px, ops.py), dense_phase_space(5, hbar, l_b)):
        assert np.allclose(mine.toarray(), ref, atol=1e-15)


def test_hermitian(ops20):
    assert max(ops20.hermiticity_defects().values()) < 1e-15


def test_invalid_constants():
    with pytest.raises(ValueError):
        build_phase_space(build_basis(2), hbar=0)


def test_canonical_algebra(ops20):
    rep = verify_canonical_algebra(ops20)
    assert rep.passed
    assert rep["[x,p_x]"].max_deviation < 1e-12
    assert {c.name for c in rep.checks} == {"[x,p_x]", "[y,p_y]", "[x,y]", "[p_x,p_y]", "[x,p_y]", "[y,p_x]"}


def test_canonical_scaled_units():
    ops = build_phase_space(build_basis(8), hbar=0.5, l_b=3.0)
    assert verify_canonical_algebra(ops).passed


def test_canonical_rejects_bad_tol(ops20):
    with pytest.raises(ValueError):
        verify_canonical_algebra(ops20, tol=0)


def test_tau_identity(ops20):
    prod = build_tau_products(ops20)
    assert prod.identity_defect < 1e-12
    assert prod.sym_pyy.hermiticity_defect() < 1e-12
    assert prod.sym_xyy.hermiticity_defect() < 1e-12
    # x and y commute in the interior, so the symmetrized product equals x y^2 there
    assert interior_deviation(prod.sym_xyy - prod.xyy, ops20.basis, 3) < 1e-12


def test_tau_identity_contract(ops20):
    with pytest.raises(ContractError):
        build_tau_products(ops20, check_tol=0.0)


def test_dnc_trivial_point(ops20):
    rep = verify_dnc_algebra(build_dnc_coordinates(ops20, 0.0, 0.0))
    assert rep.passed
    assert max(c.max_deviation for c in rep.checks) < 1e-13


def test_dnc_first_order(ops20):
    rep = verify_dnc_algebra(build_dnc_coordinates(ops20, 0.01, 0.01))
    assert rep.passed, rep.to_json()
    for c in rep.checks:
        if c.scaling_ratio is not None:
            assert c.scaling_ratio >= 3.5


def test_bopp_shift_gives_constant_theta(ops20):
    # tau = 0: [x, y] = i theta exactly, which fixes the sign of the y shift
    d = build_dnc_coordinates(ops20, 0.03, 0.0)
    c = d.x.commutator(d.y) - OperatorMatrix.identity(ops20.basis.dim) * 0.03j
    assert interior_deviation(c, ops20.basis, 2) < 1e-12


def test_dnc_detects_wrong_construction(ops20):
    d = build_dnc_coordinates(ops20, 0.01, 0.01)
    broken = type(d)(d.base, d.x, d.y - d.base.px * 0.01, d.px, d.py, d.theta, d.tau)
    assert not verify_dnc_algebra(broken).passed


def test_report_json(ops20):
    js = verify_canonical_algebra(ops20).to_json()
    assert '"passed": true' in js
