"""Truncated two-mode Fock space |n_d, n_g> and sparse operator arithmetic.

Each mode is cut off independently (0 <= n_d, n_g <= cutoff).  States are
enumerated lexicographically in (n_d, n_g), so the flat index of |n_d, n_g>
is ``n_d * (cutoff + 1) + n_g`` and mode operators are Kronecker products
``a (x) 1`` for d and ``1 (x) a`` for g.

Truncated ladder operators reproduce the infinite-dimensional algebra only on
states far enough from the cutoff.  A word of k ladder operators acting on a
ket whose occupations are all <= cutoff - k never leaves the truncated space,
so every column of the product for such kets is exact.  ``interior`` returns
exactly these columns.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, TextIO

import numpy as np
import scipy.sparse as sp

MODES = ("d", "g")


class DimensionError(ValueError):
    """Operands live on spaces of different dimension."""


@dataclass(frozen=True, order=True)
class FockIndex:
    n_d: int
    n_g: int

    def __post_init__(self) -> None:
        if self.n_d < 0 or self.n_g < 0:
            raise ValueError(f"occupations must be non-negative, got {self}")

    @property
    def n(self) -> int:
        """Shell label n = n_d + n_g."""
        return self.n_d + self.n_g

    @property
    def m(self) -> int:
        """Label m = n_d - n_g."""
        return self.n_d - self.n_g

    def __str__(self) -> str:
        return f"|{self.n_d},{self.n_g}>"


@dataclass(frozen=True)
class TruncatedBasis:
    cutoff: int
    states: tuple[FockIndex, ...] = field(repr=False)
    index_of: Mapping[FockIndex, int] = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def n_d(self) -> np.ndarray:
        return np.repeat(np.arange(self.cutoff + 1), self.cutoff + 1)

    @property
    def n_g(self) -> np.ndarray:
        return np.tile(np.arange(self.cutoff + 1), self.cutoff + 1)

    def index(self, state: FockIndex | tuple[int, int]) -> int:
        key = state if isinstance(state, FockIndex) else FockIndex(*state)
        try:
            return self.index_of[key]
        except KeyError:
            raise ValueError(f"{key} is outside the basis with cutoff {self.cutoff}") from None

    def edge_mask(self) -> np.ndarray:
        """Boolean mask of states with some occupation at the cutoff."""
        return (self.n_d == self.cutoff) | (self.n_g == self.cutoff)

    def interior(self, margin: int) -> np.ndarray:
        """Indices of states with both occupations <= cutoff - margin."""
        top = self.cutoff - margin
        if top < 0:
            return np.empty(0, dtype=int)
        mask = (self.n_d <= top) & (self.n_g <= top)
        return np.flatnonzero(mask)


def build_basis(n_cut: int) -> TruncatedBasis:
    if n_cut < 0:
        raise ValueError(f"cutoff must be >= 0, got {n_cut}")
    states = tuple(FockIndex(i, j) for i in range(n_cut + 1) for j in range(n_cut + 1))
    index_of = MappingProxyType({s: k for k, s in enumerate(states)})
    return TruncatedBasis(n_cut, states, index_of)


class OperatorMatrix:
    """Immutable sparse complex square matrix acting on a truncated basis."""

    __slots__ = ("_m",)

    def __init__(self, matrix) -> None:
        m = sp.csr_matrix(matrix, dtype=complex)
        if m.shape[0] != m.shape[1]:
            raise DimensionError(f"operator must be square, got shape {m.shape}")
        m.sum_duplicates()
        m.eliminate_zeros()
        m.data.setflags(write=False)
        self._m = m

    @classmethod
    def zeros(cls, dim: int) -> OperatorMatrix:
        return cls(sp.csr_matrix((dim, dim), dtype=complex))

    @classmethod
    def identity(cls, dim: int) -> OperatorMatrix:
        return cls(sp.identity(dim, dtype=complex, format="csr"))

    @property
    def dim(self) -> int:
        return self._m.shape[0]

    @property
    def nnz(self) -> int:
        return self._m.nnz

    @property
    def csr(self) -> sp.csr_matrix:
        return self._m

    def toarray(self) -> np.ndarray:
        return self._m.toarray()

    def entries(self) -> dict[tuple[int, int], complex]:
        coo = self._m.tocoo()
        return {(int(r), int(c)): complex(v) for r, c, v in zip(coo.row, coo.col, coo.data)}

    def _check(self, other: OperatorMatrix) -> None:
        if not isinstance(other, OperatorMatrix):
            raise TypeError(f"expected OperatorMatrix, got {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check(other)
        return OperatorMatrix(self._m + other._m)

    def __sub__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check(other)
        return OperatorMatrix(self._m - other._m)

    def __neg__(self) -> OperatorMatrix:
        return OperatorMatrix(-self._m)

    def __mul__(self, scalar: complex) -> OperatorMatrix:
        if isinstance(scalar, OperatorMatrix):
            raise TypeError("use @ for operator products")
        return OperatorMatrix(self._m * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> OperatorMatrix:
        return OperatorMatrix(self._m / complex(scalar))

    def __matmul__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check(other)
        return OperatorMatrix(self._m @ other._m)

    def __pow__(self, k: int) -> OperatorMatrix:
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = OperatorMatrix.identity(self.dim)
        for _ in range(k):
            out = out @ self
        return out

    def dagger(self) -> OperatorMatrix:
        return OperatorMatrix(self._m.conj().T)

    def commutator(self, other: OperatorMatrix) -> OperatorMatrix:
        return self @ other - other @ self

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self._m @ vec

    def max_abs(self, rows: np.ndarray | None = None, cols: np.ndarray | None = None) -> float:
        """Largest |entry|, optionally restricted to a row/column subset."""
        m = self._m
        if cols is not None:
            m = m[:, cols]
        if rows is not None:
            m = m[rows, :]
        return float(np.abs(m.data).max()) if m.nnz else 0.0

    def hermiticity_defect(self) -> float:
        return (self - self.dagger()).max_abs()

    def allclose(self, other: OperatorMatrix, atol: float = 1e-12) -> bool:
        self._check(other)
        return (self - other).max_abs() <= atol

    def __repr__(self) -> str:
        return f"OperatorMatrix(dim={self.dim}, nnz={self.nnz})"


def annihilation(mode: str, basis: TruncatedBasis) -> OperatorMatrix:
    """Ladder operator a_mode with <n-1|a|n> = sqrt(n) in the chosen mode."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    size = basis.cutoff + 1
    single = sp.diags(np.sqrt(np.arange(1, size, dtype=float)), 1, shape=(size, size))
    eye = sp.identity(size)
    return OperatorMatrix(sp.kron(single, eye) if mode == "d" else sp.kron(eye, single))


def creation(mode: str, basis: TruncatedBasis) -> OperatorMatrix:
    return annihilation(mode, basis).dagger()


def number(mode: str, basis: TruncatedBasis) -> OperatorMatrix:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    occ = basis.n_d if mode == "d" else basis.n_g
    return OperatorMatrix(sp.diags(occ.astype(complex)))


def op_arith(a: OperatorMatrix, b: OperatorMatrix | None = None, kind: str = "add",
             scalar: complex = 1.0) -> OperatorMatrix:
    """Named-operation front end over the OperatorMatrix operators."""
    if kind == "dagger":
        return a.dagger()
    if kind == "scale":
        return a * scalar
    if b is None:
        raise ValueError(f"{kind!r} needs two operands")
    if kind == "add":
        return a + b
    if kind == "multiply":
        return a @ b
    if kind == "commutator":
        return a.commutator(b)
    raise ValueError(f"unknown operation {kind!r}")


def word(ops: Iterable[OperatorMatrix]) -> OperatorMatrix:
    """Product of operators in the given (left-to-right) order."""
    ops = list(ops)
    if not ops:
        raise ValueError("empty operator word")
    out = ops[0]
    for op in ops[1:]:
        out = out @ op
    return out


def matrix_element(bra: FockIndex | tuple[int, int], op: OperatorMatrix,
                   ket: FockIndex | tuple[int, int], basis: TruncatedBasis) -> complex:
    if op.dim != basis.dim:
        raise DimensionError(f"operator dim {op.dim} does not match basis dim {basis.dim}")
    return complex(op.csr[basis.index(bra), basis.index(ket)])


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex).copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis_state(cls, basis: TruncatedBasis, state: FockIndex | tuple[int, int]) -> StateVector:
        amps = np.zeros(basis.dim, dtype=complex)
        amps[basis.index(state)] = 1.0
        return cls(amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.norm2 - 1.0) <= tol

    def normalized(self) -> StateVector:
        return StateVector(self.amplitudes / np.sqrt(self.norm2))

    def apply(self, op: OperatorMatrix) -> StateVector:
        if op.dim != self.dim:
            raise DimensionError(f"operator dim {op.dim} vs state dim {self.dim}")
        return StateVector(op.apply(self.amplitudes))

    def amplitude(self, basis: TruncatedBasis, state: FockIndex | tuple[int, int]) -> complex:
        return complex(self.amplitudes[basis.index(state)])


def dump_csv(op: OperatorMatrix, out: TextIO | None = None) -> str:
    """Debug dump: one ``row,col,re,im`` line per stored entry, row-major."""
    buf = io.StringIO() if out is None else out
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["row", "col", "re", "im"])
    coo = op.csr.tocoo()
    order = np.lexsort((coo.col, coo.row))
    for k in order:
        v = coo.data[k]
        writer.writerow([int(coo.row[k]), int(coo.col[k]), repr(float(v.real)), repr(float(v.imag))])
    return buf.getvalue() if out is None else ""


def load_csv(text: str, dim: int) -> OperatorMatrix:
    rows, cols, vals = [], [], []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append(int(rec["row"]))
        cols.append(int(rec["col"]))
        vals.append(complex(float(rec["re"]), float(rec["im"])))
    return OperatorMatrix(sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim)))
