"""Spinor Hamiltonians H0, H_theta and H_tau on sublattice (x) Fock space.

Flat index convention: ``spinor_component * dim + fock_index`` with the A
sublattice first.  Every operator here is Hermitian and off-diagonal in the
sublattice index, i.e. it anticommutes with sigma_z.

For valley K the sigma_y prefactor is +1, for K' it is -1.  Flipping the
sign of every sigma_y part of an operator sum sigma_x O_x + sigma_y O_y is the
same as exchanging its AB and BA blocks, which is how ``valley_variant`` works.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp

from .algebra import PhaseSpaceOps, TauProducts, build_phase_space, build_tau_products
from .fock import DimensionError, OperatorMatrix, TruncatedBasis, build_basis

VALLEYS = ("K", "Kprime")


@dataclass(frozen=True)
class PhysParams:
    """Physical configuration.

    Units are whatever the caller uses consistently; ``natural()`` maps to
    l_B = v_F = hbar = 1, where theta is measured in l_B^2 and tau in l_B^-2.
    """

    l_b: float = 1.0
    v_f: float = 1.0
    hbar: float = 1.0
    theta: float = 0.0
    tau: float = 0.0
    valley: str = "K"
    n_cut: int = 40

    def __post_init__(self) -> None:
        if not (self.l_b > 0 and self.v_f > 0 and self.hbar > 0):
            raise ValueError("l_B, v_F and hbar must be positive")
        if self.valley not in VALLEYS:
            raise ValueError(f"valley must be one of {VALLEYS}, got {self.valley!r}")
        if int(self.n_cut) != self.n_cut or self.n_cut < 1:
            raise ValueError(f"N_cut must be an integer >= 1, got {self.n_cut}")

    @classmethod
    def from_field(cls, b_tesla: float, v_f: float, hbar_evs: float, **kw) -> PhysParams:
        """SI magnetic length l_B = sqrt(hbar/(eB)); with hbar in eV*s this is sqrt(hbar/B) in metres."""
        if b_tesla <= 0:
            raise ValueError("B must be positive")
        return cls(l_b=math.sqrt(hbar_evs / b_tesla), v_f=v_f, hbar=hbar_evs, **kw)

    @property
    def gamma(self) -> float:
        return 1.0 / (math.sqrt(2.0) * self.l_b)

    @property
    def energy_unit(self) -> float:
        """hbar v_F / l_B: natural-unit energies are multiples of this."""
        return self.hbar * self.v_f / self.l_b

    @property
    def alpha2_sign(self) -> float:
        return 1.0 if self.valley == "K" else -1.0

    def natural(self) -> PhysParams:
        return replace(self, l_b=1.0, v_f=1.0, hbar=1.0,
                       theta=self.theta / self.l_b**2, tau=self.tau * self.l_b**2)


@dataclass(frozen=True)
class SpinorOperator:
    basis: TruncatedBasis = field(repr=False)
    aa: OperatorMatrix
    ab: OperatorMatrix
    ba: OperatorMatrix
    bb: OperatorMatrix

    def __post_init__(self) -> None:
        dims = {blk.dim for blk in (self.aa, self.ab, self.ba, self.bb)}
        if dims != {self.basis.dim}:
            raise DimensionError(f"spinor blocks must all have dim {self.basis.dim}, got {dims}")

    @classmethod
    def zeros(cls, basis: TruncatedBasis) -> SpinorOperator:
        z = OperatorMatrix.zeros(basis.dim)
        return cls(basis, z, z, z, z)

    @classmethod
    def from_pauli(cls, basis: TruncatedBasis, *, o0: OperatorMatrix | None = None,
                   ox: OperatorMatrix | None = None, oy: OperatorMatrix | None = None,
                   oz: OperatorMatrix | None = None) -> SpinorOperator:
        """1 (x) o0 + sigma_x (x) ox + sigma_y (x) oy + sigma_z (x) oz."""
        z = OperatorMatrix.zeros(basis.dim)
        o0, ox, oy, oz = (z if o is None else o for o in (o0, ox, oy, oz))
        return cls(basis, o0 + oz, ox - oy * 1j, ox + oy * 1j, o0 - oz)

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def size(self) -> int:
        return 2 * self.basis.dim

    def blocks(self) -> tuple[OperatorMatrix, ...]:
        return self.aa, self.ab, self.ba, self.bb

    def to_sparse(self) -> sp.csr_matrix:
        return sp.bmat([[self.aa.csr, self.ab.csr], [self.ba.csr, self.bb.csr]], format="csr")

    def toarray(self) -> np.ndarray:
        return self.to_sparse().toarray()

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.to_sparse() @ vec

    def _check(self, other: SpinorOperator) -> None:
        if not isinstance(other, SpinorOperator) or other.dim != self.dim:
            raise DimensionError("spinor operators act on different spaces")

    def __add__(self, other: SpinorOperator) -> SpinorOperator:
        self._check(other)
        return SpinorOperator(self.basis, *(a + b for a, b in zip(self.blocks(), other.blocks())))

    def __sub__(self, other: SpinorOperator) -> SpinorOperator:
        self._check(other)
        return SpinorOperator(self.basis, *(a - b for a, b in zip(self.blocks(), other.blocks())))

    def __mul__(self, scalar: complex) -> SpinorOperator:
        return SpinorOperator(self.basis, *(b * scalar for b in self.blocks()))

    __rmul__ = __mul__

    def dagger(self) -> SpinorOperator:
        return SpinorOperator(self.basis, self.aa.dagger(), self.ba.dagger(),
                              self.ab.dagger(), self.bb.dagger())

    def hermiticity_defect(self) -> float:
        return max((self.aa - self.aa.dagger()).max_abs(),
                   (self.bb - self.bb.dagger()).max_abs(),
                   (self.ab - self.ba.dagger()).max_abs())

    def hermitian(self, tol: float = 1e-12) -> bool:
        return self.hermiticity_defect() <= tol

    def max_abs(self) -> float:
        return max(b.max_abs() for b in self.blocks())

    def allclose(self, other: SpinorOperator, atol: float = 1e-12) -> bool:
        return (self - other).max_abs() <= atol

    def is_chiral(self) -> bool:
        """True if the operator is off-diagonal in the sublattice index."""
        return self.aa.nnz == 0 and self.bb.nnz == 0


def _check_ops(params: PhysParams, ops: PhaseSpaceOps) -> None:
    if ops.basis.cutoff != params.n_cut:
        raise ValueError(f"operators built on cutoff {ops.basis.cutoff}, params ask for {params.n_cut}")
    if not (math.isclose(ops.hbar, params.hbar) and math.isclose(ops.l_b, params.l_b)):
        raise ValueError("phase-space operators were built with different hbar or l_B")


def build_H0(params: PhysParams, ops: PhaseSpaceOps) -> SpinorOperator:
    """v_F {sigma_x p_x + s sigma_y p_y + (hbar/2l_B^2)(sigma_x y - s sigma_y x)}, s = +-1 per valley."""
    _check_ops(params, ops)
    s = params.alpha2_sign
    kappa = params.hbar / (2.0 * params.l_b**2)
    ox = (ops.px + ops.y * kappa) * params.v_f
    oy = (ops.py - ops.x * kappa) * (s * params.v_f)
    return SpinorOperator.from_pauli(ops.basis, ox=ox, oy=oy)


def build_HTheta(params: PhysParams, ops: PhaseSpaceOps) -> SpinorOperator:
    _check_ops(params, ops)
    pref = params.v_f * params.theta / (4.0 * params.l_b**2)
    return SpinorOperator.from_pauli(ops.basis, ox=ops.px * pref,
                                     oy=ops.py * (pref * params.alpha2_sign))


def build_HTau(params: PhysParams, ops: PhaseSpaceOps, products: TauProducts) -> SpinorOperator:
    """v_F (tau/2) s sigma_y {y^2 p_y + p_y y^2 - (hbar/l_B^2) (x y^2 + y^2 x)/2}."""
    _check_ops(params, ops)
    spatial = products.sym_pyy - products.sym_xyy * (params.hbar / params.l_b**2)
    pref = params.v_f * params.tau / 2.0 * params.alpha2_sign
    return SpinorOperator.from_pauli(ops.basis, oy=spatial * pref)


def valley_variant(term: SpinorOperator, valley: str) -> SpinorOperator:
    """Map a K-valley operator to K' by sigma_y -> -sigma_y (AB <-> BA); identity for K."""
    if valley not in VALLEYS:
        raise ValueError(f"valley must be one of {VALLEYS}, got {valley!r}")
    if valley == "K":
        return term
    return SpinorOperator(term.basis, term.aa, term.ba, term.ab, term.bb)


@dataclass(frozen=True)
class HamiltonianTerms:
    H0: SpinorOperator
    HTheta: SpinorOperator
    HTau: SpinorOperator
    params: PhysParams
    ops: PhaseSpaceOps = field(repr=False)
    products: TauProducts = field(repr=False)

    @property
    def basis(self) -> TruncatedBasis:
        return self.ops.basis

    def total(self) -> SpinorOperator:
        return self.H0 + self.HTheta + self.HTau


def build_terms(params: PhysParams, ops: PhaseSpaceOps | None = None,
                products: TauProducts | None = None) -> HamiltonianTerms:
    if ops is None:
        ops = build_phase_space(build_basis(params.n_cut), params.hbar, params.l_b)
    if products is None:
        products = build_tau_products(ops)
    return HamiltonianTerms(build_H0(params, ops), build_HTheta(params, ops),
                            build_HTau(params, ops, products), params, ops, products)
