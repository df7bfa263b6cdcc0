"""Phase-space operators in the d/g mode representation and their algebras.

With Gamma = 1/(sqrt(2) l_B) the commutative operators are

    x   = (1/2Gamma)      ( a_d + a_d^+ + a_g + a_g^+)
    y   = (i/2Gamma)      ( a_d - a_d^+ - a_g + a_g^+)
    p_x = (i hbar Gamma/2)(-a_d + a_d^+ - a_g + a_g^+)
    p_y = (hbar Gamma/2)  ( a_d + a_d^+ - a_g - a_g^+)

All four are Hermitian and canonical.  The dynamical noncommutative (DNC)
coordinates are built from them by the first-order dressing
sqrt(1 + tau y^2) ~ 1 + tau y^2/2 in the NC variables followed by the Bopp
shift x_nc = x - (theta/2hbar) p_y, y_nc = y + (theta/2hbar) p_x, keeping
terms linear in theta and linear in tau only.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

from .fock import OperatorMatrix, TruncatedBasis, annihilation

CANONICAL_MARGIN = 2
TAU_PRODUCT_MARGIN = 3
# degree of [x_dnc, p_y_dnc] = 3 + 3 ladder operators
DNC_MARGIN = 6


class ContractError(ArithmeticError):
    """A numerical identity the construction guarantees did not hold."""


@dataclass(frozen=True)
class PhaseSpaceOps:
    basis: TruncatedBasis = field(repr=False)
    x: OperatorMatrix
    y: OperatorMatrix
    px: OperatorMatrix
    py: OperatorMatrix
    hbar: float = 1.0
    l_b: float = 1.0

    @property
    def gamma(self) -> float:
        return 1.0 / (math.sqrt(2.0) * self.l_b)

    @property
    def identity(self) -> OperatorMatrix:
        return OperatorMatrix.identity(self.basis.dim)

    def hermiticity_defects(self) -> dict[str, float]:
        return {name: getattr(self, name).hermiticity_defect() for name in ("x", "y", "px", "py")}


def build_phase_space(basis: TruncatedBasis, hbar: float = 1.0, l_b: float = 1.0) -> PhaseSpaceOps:
    if hbar <= 0 or l_b <= 0:
        raise ValueError("hbar and l_B must be positive")
    gamma = 1.0 / (math.sqrt(2.0) * l_b)
    ad, ag = annihilation("d", basis), annihilation("g", basis)
    add, agd = ad.dagger(), ag.dagger()
    x = (ad + add + ag + agd) * (1.0 / (2.0 * gamma))
    y = (ad - add - ag + agd) * (1j / (2.0 * gamma))
    px = (add - ad + agd - ag) * (1j * hbar * gamma / 2.0)
    py = (ad + add - ag - agd) * (hbar * gamma / 2.0)
    return PhaseSpaceOps(basis, x, y, px, py, hbar, l_b)


def interior_deviation(op: OperatorMatrix, basis: TruncatedBasis, margin: int) -> float:
    """Max |entry| of ``op`` over columns whose kets sit at least ``margin`` below the cutoff."""
    cols = basis.interior(margin)
    if cols.size == 0:
        return 0.0
    return op.max_abs(cols=cols)


@dataclass(frozen=True)
class TauProducts:
    xyy: OperatorMatrix
    sym_xyy: OperatorMatrix
    sym_pyy: OperatorMatrix
    sym_pyy_alt: OperatorMatrix
    identity_defect: float


def build_tau_products(ops: PhaseSpaceOps, check_tol: float = 1e-10) -> TauProducts:
    """Operator products entering H_tau.

    ``sym_pyy`` is y^2 p_y + p_y y^2 computed directly; ``sym_pyy_alt`` is the
    rearranged 2 p_y y^2 + 2i hbar y.  The two agree on interior kets; only the
    direct form is Hermitian after truncation, so the Hamiltonian uses it.
    """
    y2 = ops.y @ ops.y
    xyy = ops.x @ y2
    sym_xyy = (xyy + y2 @ ops.x) * 0.5
    sym_pyy = y2 @ ops.py + ops.py @ y2
    sym_pyy_alt = (ops.py @ y2) * 2.0 + ops.y * (2j * ops.hbar)
    defect = interior_deviation(sym_pyy - sym_pyy_alt, ops.basis, TAU_PRODUCT_MARGIN)
    if defect > check_tol:
        raise ContractError(f"y^2 p_y + p_y y^2 != 2 p_y y^2 + 2i hbar y on interior (defect {defect:.3e})")
    return TauProducts(xyy, sym_xyy, sym_pyy, sym_pyy_alt, defect)


@dataclass(frozen=True)
class RelationCheck:
    name: str
    max_deviation: float
    tolerance: float
    passed: bool
    scaling_ratio: float | None = None
    residuals: tuple[float, ...] = ()
    note: str = ""


@dataclass(frozen=True)
class AlgebraReport:
    checks: tuple[RelationCheck, ...]
    label: str = ""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> RelationCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"label": self.label, "passed": self.passed, "checks": [asdict(c) for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def verify_canonical_algebra(ops: PhaseSpaceOps, tol: float = 1e-12) -> AlgebraReport:
    if tol <= 0:
        raise ValueError("tol must be positive")
    ident = ops.identity
    ih = ident * (1j * ops.hbar)
    zero = OperatorMatrix.zeros(ops.basis.dim)
    relations = [
        ("[x,p_x]", ops.x, ops.px, ih),
        ("[y,p_y]", ops.y, ops.py, ih),
        ("[x,y]", ops.x, ops.y, zero),
        ("[p_x,p_y]", ops.px, ops.py, zero),
        ("[x,p_y]", ops.x, ops.py, zero),
        ("[y,p_x]", ops.y, ops.px, zero),
    ]
    checks = []
    for name, a, b, rhs in relations:
        dev = interior_deviation(a.commutator(b) - rhs, ops.basis, CANONICAL_MARGIN)
        checks.append(RelationCheck(name, dev, tol, dev <= tol))
    return AlgebraReport(tuple(checks), label="canonical")


@dataclass(frozen=True)
class DncOps:
    base: PhaseSpaceOps = field(repr=False)
    x: OperatorMatrix
    y: OperatorMatrix
    px: OperatorMatrix
    py: OperatorMatrix
    theta: float
    tau: float


def _dnc_full(ops: PhaseSpaceOps, theta: float, tau: float) -> tuple[OperatorMatrix, ...]:
    """Dressing expanded to first order in tau, then Bopp shift; no cross terms dropped yet."""
    shift = theta / (2.0 * ops.hbar)
    x_nc = ops.x - ops.py * shift
    y_nc = ops.y + ops.px * shift
    y2 = y_nc @ y_nc
    x = x_nc + (y2 @ x_nc + x_nc @ y2) * (tau / 2.0)
    py = ops.py + (y2 @ ops.py + ops.py @ y2) * (tau / 2.0)
    return x, y_nc, ops.px, py


def build_dnc_coordinates(ops: PhaseSpaceOps, theta: float, tau: float) -> DncOps:
    """DNC operators linear in theta and in tau separately (theta*tau terms dropped).

    The full expression is polynomial in (theta, tau) and exactly linear along
    each axis, so f(theta, 0) + f(0, tau) - f(0, 0) is its first-order part.
    """
    f0 = _dnc_full(ops, 0.0, 0.0)
    ft = _dnc_full(ops, theta, 0.0)
    fu = _dnc_full(ops, 0.0, tau)
    x, y, px, py = (a + b - c for a, b, c in zip(ft, fu, f0))
    return DncOps(ops, x, y, px, py, theta, tau)


def _dnc_residuals(dnc: DncOps) -> dict[str, float]:
    base = dnc.base
    hbar, theta, tau = base.hbar, dnc.theta, dnc.tau
    ident = base.identity
    zero = OperatorMatrix.zeros(base.basis.dim)
    dress = ident + (dnc.y @ dnc.y) * tau
    relations = [
        ("[x,y]", dnc.x, dnc.y, dress * (1j * theta)),
        ("[x,p_x]", dnc.x, dnc.px, dress * (1j * hbar)),
        ("[y,p_y]", dnc.y, dnc.py, dress * (1j * hbar)),
        ("[y,p_x]", dnc.y, dnc.px, zero),
        ("[x,p_y]", dnc.x, dnc.py, (dnc.y @ (dnc.py * theta + dnc.x * hbar)) * (2j * tau)),
        ("[p_x,p_y]", dnc.px, dnc.py, zero),
    ]
    return {
        name: interior_deviation(a.commutator(b) - rhs, base.basis, DNC_MARGIN)
        for name, a, b, rhs in relations
    }


def verify_dnc_algebra(dnc: DncOps, theta: float | None = None, tau: float | None = None,
                       tol: float = 1e-12, min_ratio: float = 3.5) -> AlgebraReport:
    """Check the six DNC commutators hold to first order in (theta, tau).

    Residuals LHS - RHS are evaluated at (theta, tau), (theta, tau)/2 and
    (theta, tau)/4.  A relation passes if each halving shrinks the residual by
    at least ``min_ratio`` (quadratic remainder), or if the residual is already
    at or below ``tol`` at every point (relation exact in the construction).
    """
    theta = dnc.theta if theta is None else theta
    tau = dnc.tau if tau is None else tau
    points = [dnc] + [build_dnc_coordinates(dnc.base, theta / s, tau / s) for s in (2.0, 4.0)]
    if (theta, tau) != (dnc.theta, dnc.tau):
        points[0] = build_dnc_coordinates(dnc.base, theta, tau)
    runs = [_dnc_residuals(p) for p in points]
    checks = []
    for name in runs[0]:
        res = tuple(r[name] for r in runs)
        if max(res) <= tol:
            checks.append(RelationCheck(name, res[0], tol, True, None, res, "exact within tolerance"))
            continue
        ratios = [res[i] / res[i + 1] if res[i + 1] > 0 else math.inf for i in range(2)]
        ok = all(r >= min_ratio for r in ratios)
        checks.append(RelationCheck(name, res[0], tol, ok, ratios[0], res,
                                    f"halving ratios {ratios[0]:.4g}, {ratios[1]:.4g}"))
    return AlgebraReport(tuple(checks), label=f"dnc theta={theta!r} tau={tau!r}")
