"""Exact diagonalization, closed-form Landau levels and degenerate perturbation theory.

The ED oracle is exact and dense, but it never diagonalizes more than it has
to: the flattened spinor matrix is split into the connected components of its
sparsity graph (symmetry sectors such as fixed n_d for H0 or fixed parity for
H0 + H_tau), and each component is solved on its own.  Components of a
sublattice off-diagonal operator [[0, D^+], [D, 0]] are solved through the
SVD of D, which gives the +-sigma pairs directly and keeps zero modes
sublattice-polarized.

An eigenvalue is *reliable* when its eigenvector carries less than 1e-8 of its
weight on Fock states at the cutoff.  Inside an exactly degenerate cluster the
eigenvectors are first rotated to diagonalize the edge projector, so the
reliable part of a degenerate subspace is found regardless of how the solver
happened to mix it.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg as sla
from scipy.sparse.csgraph import connected_components

from .algebra import build_phase_space
from .fock import FockIndex, OperatorMatrix, TruncatedBasis, annihilation, matrix_element, word
from .hamiltonian import HamiltonianTerms, PhysParams, SpinorOperator, build_terms

RELIABILITY_TOL = 1e-8
GROUP_TOL = 1e-6
HERMITIAN_TOL = 1e-10
DENOMINATOR_GUARD = 1e-8


class NonHermitianError(ValueError):
    pass


class DegeneracyError(ArithmeticError):
    pass


class TrackingError(RuntimeError):
    pass


@dataclass(frozen=True)
class _Block:
    indices: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class EigenSolution:
    eigenvalues: np.ndarray
    edge_weight: np.ndarray
    reliable: np.ndarray
    size: int
    blocks: tuple[_Block, ...] = field(repr=False)
    location: np.ndarray = field(repr=False)

    @property
    def norm(self) -> float:
        return float(np.abs(self.eigenvalues).max()) if self.eigenvalues.size else 0.0

    @property
    def reliable_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues[self.reliable]

    def vectors(self, sel: Sequence[int] | np.ndarray | None = None) -> np.ndarray:
        """Dense eigenvector columns for the selected (sorted-order) eigen indices."""
        sel = np.arange(self.eigenvalues.size) if sel is None else np.asarray(sel, dtype=int)
        out = np.zeros((self.size, sel.size), dtype=complex)
        for j, k in enumerate(sel):
            b, c = self.location[k]
            blk = self.blocks[b]
            out[blk.indices, j] = blk.vectors[:, c]
        return out

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.vectors()

    def overlaps(self, sel: np.ndarray, vecs: np.ndarray) -> np.ndarray:
        """<v_k|vecs> for eigen indices k in ``sel``; rows follow ``sel``."""
        sel = np.asarray(sel, dtype=int)
        out = np.zeros((sel.size, vecs.shape[1]), dtype=complex)
        loc = self.location[sel]
        for b in np.unique(loc[:, 0]):
            rows = np.flatnonzero(loc[:, 0] == b)
            blk = self.blocks[b]
            out[rows] = blk.vectors[:, loc[rows, 1]].conj().T @ vecs[blk.indices]
        return out

    def residuals(self, H: SpinorOperator) -> np.ndarray:
        """||H v - E v||_2 per eigenpair."""
        M = H.to_sparse()
        res = np.empty(self.eigenvalues.size)
        for b, blk in enumerate(self.blocks):
            cols = np.flatnonzero(self.location[:, 0] == b)
            sub = M[blk.indices][:, blk.indices]
            V = blk.vectors[:, self.location[cols, 1]]
            res[cols] = np.linalg.norm(sub @ V - V * self.eigenvalues[cols], axis=0)
        return res


def _chiral_eig(sub: np.ndarray, on_a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ia, ib = np.flatnonzero(on_a), np.flatnonzero(~on_a)
    D = sub[np.ix_(ib, ia)]
    try:
        U, s, Wh = sla.svd(D, full_matrices=True, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        U, s, Wh = sla.svd(D, full_matrices=True, lapack_driver="gesvd")
    W = Wh.conj().T
    m = sub.shape[0]
    k = int(np.count_nonzero(s > 1e-12 * max(1.0, s[0] if s.size else 0.0)))
    vecs = np.zeros((m, m), dtype=complex)
    vals = np.zeros(m)
    r2 = 1.0 / math.sqrt(2.0)
    vecs[np.ix_(ia, np.arange(k))] = W[:, :k] * r2
    vecs[np.ix_(ib, np.arange(k))] = U[:, :k] * r2
    vecs[np.ix_(ia, np.arange(k, 2 * k))] = W[:, :k] * r2
    vecs[np.ix_(ib, np.arange(k, 2 * k))] = -U[:, :k] * r2
    vals[:k], vals[k:2 * k] = s[:k], -s[:k]
    na = ia.size - k
    vecs[np.ix_(ia, np.arange(2 * k, 2 * k + na))] = W[:, k:]
    vecs[np.ix_(ib, np.arange(2 * k + na, m))] = U[:, k:]
    return vals, vecs


def _rotate_clusters(vals: np.ndarray, vecs: np.ndarray, edge: np.ndarray,
                     sub: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    order = np.argsort(vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    ctol = 1e-11 * max(1.0, float(np.abs(vals).max()) if vals.size else 0.0)
    cuts = np.flatnonzero(np.diff(vals) > ctol) + 1
    for grp in np.split(np.arange(vals.size), cuts):
        if grp.size < 2:
            continue
        V = vecs[:, grp]
        w, Q = np.linalg.eigh(V.conj().T @ (edge[:, None] * V))
        V = V @ Q
        vecs[:, grp] = V
        vals[grp] = np.real(np.einsum("ij,ij->j", V.conj(), sub @ V))
    weight = np.einsum("ij,ij->j", vecs.conj(), edge[:, None] * vecs).real
    return vals, vecs, weight


def exact_diagonalize(H: SpinorOperator, hermitian_tol: float = HERMITIAN_TOL,
                      reliability_tol: float = RELIABILITY_TOL, method: str = "blocks") -> EigenSolution:
    """Full eigendecomposition of the flattened 2*dim matrix.

    ``method="blocks"`` (default) solves each connected component separately,
    using the SVD route for sublattice off-diagonal components.
    ``method="dense"`` runs one dense Hermitian solve of the whole matrix.
    Both give the complete spectrum; they differ only in cost.
    """
    if method not in ("blocks", "dense"):
        raise ValueError(f"method must be 'blocks' or 'dense', got {method!r}")
    defect = H.hermiticity_defect()
    if defect > hermitian_tol:
        raise NonHermitianError(f"operator is not Hermitian: max |H - H^+| = {defect:.3e} > {hermitian_tol:.1e}")
    M = H.to_sparse()
    n, dim = H.size, H.dim
    pattern = abs(M) + abs(M).T
    if method == "dense":
        labels = np.zeros(n, dtype=int)
    else:
        _, labels = connected_components(pattern, directed=False)
    edge = np.concatenate([H.basis.edge_mask()] * 2).astype(float)
    chiral = method == "blocks" and H.is_chiral()

    blocks, vals_all, wts_all, loc = [], [], [], []
    order = np.argsort(labels, kind="stable")
    cuts = np.flatnonzero(np.diff(labels[order])) + 1
    for b, idx in enumerate(np.split(order, cuts)):
        idx = np.sort(idx)
        sub = M[idx][:, idx].toarray()
        on_a = idx < dim
        if chiral and on_a.any() and (~on_a).any():
            vals, vecs = _chiral_eig(sub, on_a)
        else:
            vals, vecs = sla.eigh(sub)
        vals, vecs, wts = _rotate_clusters(vals, vecs, edge[idx], sub)
        blocks.append(_Block(idx, vecs))
        vals_all.append(vals)
        wts_all.append(wts)
        loc.append(np.column_stack([np.full(vals.size, b), np.arange(vals.size)]))

    vals = np.concatenate(vals_all)
    wts = np.concatenate(wts_all)
    loc = np.concatenate(loc)
    perm = np.lexsort((wts, vals))
    return EigenSolution(vals[perm], wts[perm], wts[perm] < reliability_tol, n, tuple(blocks), loc[perm])


def closed_form_spectrum(n: int, params: PhysParams | None = None) -> tuple[float, float]:
    """(+E_n, -E_n) with E_n = v_F (hbar/l_B) sqrt(2n); natural units when params is None."""
    if n < 0:
        raise ValueError("Landau index must be >= 0")
    unit = 1.0 if params is None else params.energy_unit
    e = unit * math.sqrt(2.0 * n)
    return e, -e


def landau_index(energy: float, params: PhysParams | None = None) -> int:
    unit = 1.0 if params is None else params.energy_unit
    return int(round((energy / unit) ** 2 / 2.0))


@dataclass(frozen=True)
class DegenerateLevel:
    energy: float
    vectors: np.ndarray = field(repr=False)
    members: np.ndarray = field(repr=False)
    spread: float = 0.0

    @property
    def degeneracy(self) -> int:
        return self.vectors.shape[1]


def group_degenerate(sol: EigenSolution, tol: float = GROUP_TOL) -> list[DegenerateLevel]:
    """Cluster reliable eigenvalues whose neighbours sit closer than ``tol``.

    A ``tol`` larger than a level gap merges levels; that is caller misuse and
    is not detected.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    idx = np.flatnonzero(sol.reliable)
    if idx.size == 0:
        return []
    vals = sol.eigenvalues[idx]
    cuts = np.flatnonzero(np.diff(vals) >= tol) + 1
    levels = []
    for grp in np.split(np.arange(idx.size), cuts):
        members = idx[grp]
        Q, _ = np.linalg.qr(sol.vectors(members))
        ev = sol.eigenvalues[members]
        levels.append(DegenerateLevel(float(ev.mean()), Q, members, float(ev.max() - ev.min())))
    return levels


def find_level(levels: Sequence[DegenerateLevel], energy: float, tol: float = 1e-6) -> DegenerateLevel:
    best = min(levels, key=lambda lv: abs(lv.energy - energy), default=None)
    if best is None or abs(best.energy - energy) > tol:
        raise TrackingError(f"no reliable level near E = {energy!r}")
    return best


def projected_matrix(level: DegenerateLevel, V: SpinorOperator) -> np.ndarray:
    """<i|V|j> over the level's member states."""
    P = level.vectors
    M = P.conj().T @ V.apply(P)
    return 0.5 * (M + M.conj().T)


def first_order_basis(level: DegenerateLevel, V: SpinorOperator) -> tuple[np.ndarray, np.ndarray]:
    vals, Q = np.linalg.eigh(projected_matrix(level, V))
    return vals, level.vectors @ Q


def first_order_degenerate(level: DegenerateLevel, V: SpinorOperator) -> np.ndarray:
    """First-order energy corrections: eigenvalues of the level-projected perturbation."""
    return first_order_basis(level, V)[0]


def second_order_shift(level: DegenerateLevel, V: SpinorOperator, sol: EigenSolution,
                       first_order_tol: float = 1e-9, guard: float = DENOMINATOR_GUARD) -> np.ndarray:
    """Second-order shifts, one per first-order eigenstate of the level.

    The sum runs over reliable eigenstates outside the level.  Where the first
    order leaves a sub-multiplet degenerate the second-order matrix is
    diagonalized within it; for non-degenerate first-order states this is the
    plain sum |<n|V|k>|^2 / (E_n - E_k).
    """
    fvals, Q = first_order_basis(level, V)
    comp = np.setdiff1d(np.flatnonzero(sol.reliable), level.members)
    if comp.size == 0:
        return np.zeros(fvals.size)
    denom = level.energy - sol.eigenvalues[comp]
    close = np.abs(denom) < guard
    if close.any():
        bad = sol.eigenvalues[comp[close]]
        raise DegeneracyError(
            f"reliable states at {bad[:5]!r} lie within {guard:.1e} of level E = {level.energy!r}; "
            "regroup with a larger tolerance"
        )
    C = sol.overlaps(comp, V.apply(Q))
    M2 = (C.conj() / denom[:, None]).T @ C
    M2 = 0.5 * (M2 + M2.conj().T)
    shifts = np.real(np.diag(M2)).copy()
    scale = first_order_tol * max(1.0, float(np.abs(fvals).max()))
    cuts = np.flatnonzero(np.diff(fvals) > scale) + 1
    for grp in np.split(np.arange(fvals.size), cuts):
        if grp.size > 1:
            shifts[grp] = np.linalg.eigvalsh(M2[np.ix_(grp, grp)])
    return shifts


@dataclass(frozen=True)
class LevelReport:
    landau_index: int
    energy: float
    degeneracy: int
    first_order: tuple[float, ...]
    second_order: tuple[float, ...]


@dataclass(frozen=True)
class PerturbationReport:
    levels: tuple[LevelReport, ...]
    meta: dict = field(default_factory=dict)

    CSV_COLUMNS = ("level_index", "E0", "degeneracy", "member", "first_order", "second_order")

    def level(self, n: int, branch: int = 1) -> LevelReport:
        for lv in self.levels:
            if lv.landau_index == n and (n == 0 or math.copysign(1, lv.energy) == branch):
                return lv
        raise KeyError(n)

    def to_dict(self) -> dict:
        return {"meta": self.meta, "levels": [asdict(lv) for lv in self.levels]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.CSV_COLUMNS)
        for lv in self.levels:
            for j, (f1, f2) in enumerate(zip(lv.first_order, lv.second_order)):
                w.writerow([lv.landau_index, repr(lv.energy), lv.degeneracy, j, repr(f1), repr(f2)])
        return buf.getvalue()


def perturbation_report(sol: EigenSolution, V: SpinorOperator, max_level: int,
                        params: PhysParams | None = None, group_tol: float = GROUP_TOL,
                        meta: dict | None = None) -> PerturbationReport:
    """First and second order for every reliable level with Landau index <= max_level."""
    out = []
    for lv in group_degenerate(sol, group_tol):
        n = landau_index(lv.energy, params)
        if n > max_level:
            continue
        f1 = first_order_degenerate(lv, V)
        f2 = second_order_shift(lv, V, sol)
        out.append(LevelReport(n, lv.energy, lv.degeneracy, tuple(map(float, f1)), tuple(map(float, f2))))
    return PerturbationReport(tuple(out), dict(meta or {}))


# -- Fock-shell bookkeeping --------------------------------------------------------

def shell_states(basis: TruncatedBasis, n: int) -> list[FockIndex]:
    """Kets |n_d, n_g> with n_d + n_g = n, ordered by decreasing m = n_d - n_g."""
    return [FockIndex(n - k, k) for k in range(n + 1) if n - k <= basis.cutoff and k <= basis.cutoff]


def shell_projected_matrix(basis: TruncatedBasis, op: OperatorMatrix, n: int) -> np.ndarray:
    """<a|op|b> over the shell n_d + n_g = n of scalar Fock kets."""
    idx = [basis.index(s) for s in shell_states(basis, n)]
    return op.csr[idx][:, idx].toarray()


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    bra: tuple[int, int]
    word: str
    value: complex
    expected: float
    listed_sign: int
    full_xyy: complex
    full_pyy: complex
    sign_note: str


# (bra, word left-to-right, expected magnitude, sign attached in the listing)
_CATALOG = [
    ((3, 0), "ad+ ad+ ad+", math.sqrt(6.0), +1),
    ((0, 3), "ag+ ag+ ag+", math.sqrt(6.0), +1),
    ((2, 1), "ad+ ag+ ad+", math.sqrt(2.0), -1),
    ((1, 2), "ag+ ad+ ag+", math.sqrt(2.0), -1),
    ((0, 1), "ad ag+ ad+", 1.0, -1),
    ((0, 1), "ad ad+ ag+", 1.0, -1),
    ((0, 1), "ag+ ad ad+", 1.0, -1),
    ((1, 0), "ad+ ag ag+", 1.0, -1),
    ((1, 0), "ag ad+ ag+", 1.0, -1),
    ((1, 0), "ag ag+ ad+", 1.0, -1),
]


def ladder_word(symbols: str, basis: TruncatedBasis) -> OperatorMatrix:
    """Operator for a word such as ``"ad ag+ ad+"`` (a_d a_g^+ a_d^+)."""
    ops = {}
    for m in ("d", "g"):
        a = annihilation(m, basis)
        ops[f"a{m}"], ops[f"a{m}+"] = a, a.dagger()
    try:
        return word(ops[tok] for tok in symbols.split())
    except KeyError as exc:
        raise ValueError(f"unknown ladder symbol {exc.args[0]!r} in {symbols!r}") from None


def matrix_element_catalog(basis: TruncatedBasis) -> list[CatalogEntry]:
    """The ten ground-state second-order source elements, computed.

    Alongside each bare word value the full <k|x y^2|0,0> and <k|p_y y^2|0,0>
    for the same ket are given (natural units).  The listing's leading signs
    are reported and compared with the sign of the full x y^2 element, never
    asserted.
    """
    if basis.cutoff < 3:
        raise ValueError("catalog needs cutoff >= 3")
    ops = build_phase_space(basis)
    y2 = ops.y @ ops.y
    xyy, pyy = ops.x @ y2, ops.py @ y2
    out = []
    for bra, symbols, expected, sign in _CATALOG:
        val = matrix_element(bra, ladder_word(symbols, basis), (0, 0), basis)
        fx = matrix_element(bra, xyy, (0, 0), basis)
        fp = matrix_element(bra, pyy, (0, 0), basis)
        ref = fx.real if abs(fx.real) > 1e-12 else fx.imag
        if abs(ref) <= 1e-12:
            note = "full x y^2 element vanishes"
        elif math.copysign(1, ref) == sign:
            note = "listed sign matches full element"
        else:
            note = "listed sign differs from full element"
        label = f"<{bra[0]},{bra[1]}|{symbols}|0,0>"
        out.append(CatalogEntry(label, bra, symbols, val, expected, sign, fx, fp, note))
    return out


def linear_y_corrections(basis: TruncatedBasis) -> dict[str, complex]:
    """Vacuum expectation of y and the two unit sources of the 2i hbar y term."""
    if basis.cutoff < 1:
        raise ValueError("needs cutoff >= 1")
    ops = build_phase_space(basis)
    return {
        "<0,0|y|0,0>": matrix_element((0, 0), ops.y, (0, 0), basis),
        "<1,0|ad+|0,0>": matrix_element((1, 0), ladder_word("ad+", basis), (0, 0), basis),
        "<0,1|ag+|0,0>": matrix_element((0, 1), ladder_word("ag+", basis), (0, 0), basis),
        "<1,0|y|0,0>": matrix_element((1, 0), ops.y, (0, 0), basis),
        "<0,1|y|0,0>": matrix_element((0, 1), ops.y, (0, 0), basis),
    }


# -- response fits ------------------------------------------------------------------

@dataclass(frozen=True)
class LevelSelector:
    """Landau index, branch sign, and rank (ascending) among the level's reliable states."""

    landau_index: int = 0
    branch: int = 1
    rank: int = 0

    def __post_init__(self) -> None:
        if self.landau_index < 0 or self.branch not in (1, -1) or self.rank < 0:
            raise ValueError(f"invalid selector {self}")

    @property
    def energy0(self) -> float:
        return self.branch * math.sqrt(2.0 * self.landau_index)

    @property
    def half_window(self) -> float:
        n = self.landau_index
        gaps = [math.sqrt(2.0 * (n + 1)) - math.sqrt(2.0 * n)]
        if n > 0:
            gaps.append(math.sqrt(2.0 * n) - math.sqrt(2.0 * (n - 1)))
        return 0.5 * min(gaps)

    def pick(self, sol: EigenSolution) -> float:
        vals = sol.reliable_eigenvalues
        near = np.sort(vals[np.abs(vals - self.energy0) < self.half_window])
        if near.size <= self.rank:
            raise TrackingError(f"only {near.size} reliable states near E0 = {self.energy0:.6g}; rank {self.rank} missing")
        return float(near[self.rank])


@dataclass(frozen=True)
class TauFit:
    selector: LevelSelector
    tau_samples: tuple[float, ...]
    energies: tuple[float, ...]
    c0: float
    c1: float
    c2: float
    residual: float
    converged: bool
    message: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["selector"] = asdict(self.selector)
        return d

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["tau", "energy", "fit"])
        for t, e in zip(self.tau_samples, self.energies):
            w.writerow([repr(t), repr(e), repr(self.c0 + self.c1 * t + self.c2 * t * t)])
        return buf.getvalue()


def _validate_samples(samples: Sequence[float]) -> np.ndarray:
    s = np.asarray(samples, dtype=float)
    if s.size < 4:
        raise ValueError("need at least 4 parameter samples")
    nz = np.abs(s[s != 0])
    if nz.size == 0 or np.unique(s).size < 3:
        raise ValueError("samples are degenerate: a quadratic fit needs at least 3 distinct values")
    if nz.max() / nz.min() < 10.0 - 1e-9:
        raise ValueError("samples must span at least a decade")
    return s


def fit_level_response(solve: Callable[[float], EigenSolution], samples: Sequence[float],
                       selector: LevelSelector, rel_residual: float = 1e-6) -> TauFit:
    """Quadratic least-squares fit E(p) = c0 + c1 p + c2 p^2 of a tracked ED level."""
    s = _validate_samples(samples)
    energies = np.array([selector.pick(solve(float(p))) for p in s])
    c0, c1, c2 = np.polynomial.polynomial.polyfit(s, energies, 2)
    fitted = c0 + c1 * s + c2 * s * s
    residual = float(np.abs(energies - fitted).max())
    limit = rel_residual * max(abs(c0), 1.0)
    ok = residual < limit
    msg = "" if ok else f"fit residual {residual:.3e} exceeds {limit:.3e}: truncation or non-perturbative regime"
    if not ok:
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    return TauFit(selector, tuple(map(float, s)), tuple(map(float, energies)),
                  float(c0), float(c1), float(c2), residual, ok, msg)


def fit_tau_response(selector: LevelSelector, tau_samples: Sequence[float], params: PhysParams) -> TauFit:
    """Track one ED level of H0 + H_tau over tau (natural units, theta = 0) and fit a quadratic."""
    nat = params.natural()
    if nat.theta != 0:
        raise ValueError("tau fits require theta = 0")
    if max(abs(t) for t in tau_samples) > 0.05:
        warnings.warn("tau * l_B^2 > 0.05: outside the perturbative window", RuntimeWarning, stacklevel=2)
    unit = build_terms(nat.__class__(**{**asdict(nat), "tau": 1.0}))
    return fit_level_response(lambda t: exact_diagonalize(unit.H0 + unit.HTau * t), tau_samples, selector)


def perturbative_coefficients(selector: LevelSelector, V_unit: SpinorOperator, sol0: EigenSolution,
                              group_tol: float = GROUP_TOL, slope: float | None = None) -> tuple[float, float]:
    """(first-order, second-order) coefficients of one member of the selected level.

    With ``slope`` (e.g. an ED fit's c1) the member whose first-order value is
    nearest to it is chosen.  Without it the member is picked by rank in
    ascending first-order value; that only mirrors ED ordering when every
    member stays reliable at finite parameter, which is not guaranteed.
    """
    lv = find_level(group_degenerate(sol0, group_tol), selector.energy0)
    f1 = first_order_degenerate(lv, V_unit)
    f2 = second_order_shift(lv, V_unit, sol0)
    key = np.lexsort((f2, f1))
    if slope is not None:
        j = key[int(np.argmin(np.abs(f1[key] - slope)))]
    elif selector.rank >= key.size:
        raise TrackingError(f"level has only {key.size} members")
    else:
        j = key[selector.rank]
    return float(f1[j]), float(f2[j])


@dataclass(frozen=True)
class ConvergenceRow:
    n_cut: int
    landau_index: int
    energy: float
    closed_form: float
    error: float
    cauchy: float | None


def convergence_study(cutoffs: Sequence[int], params: PhysParams,
                      levels: Sequence[int] = (0, 1, 2, 3)) -> list[ConvergenceRow]:
    """Rank-0 positive-branch energy of each Landau level versus cutoff (natural units)."""
    cutoffs = list(cutoffs)
    if cutoffs != sorted(cutoffs) or len(set(cutoffs)) != len(cutoffs):
        raise ValueError("cutoffs must be strictly ascending")
    nat = params.natural()
    prev: dict[int, float] = {}
    rows = []
    for nc in cutoffs:
        terms = build_terms(nat.__class__(**{**asdict(nat), "n_cut": nc}))
        sol = exact_diagonalize(terms.total())
        for n in levels:
            sel = LevelSelector(n)
            e = sel.pick(sol)
            cauchy = abs(e - prev[n]) if n in prev else None
            rows.append(ConvergenceRow(nc, n, e, sel.energy0, abs(e - sel.energy0), cauchy))
            prev[n] = e
    return rows


def hamiltonian_for(params: PhysParams) -> HamiltonianTerms:
    """Natural-unit Hamiltonian terms for ``params``."""
    return build_terms(params.natural())


__all__ = [
    "EigenSolution", "DegenerateLevel", "LevelReport", "PerturbationReport", "TauFit", "LevelSelector",
    "CatalogEntry", "ConvergenceRow", "NonHermitianError", "DegeneracyError", "TrackingError",
    "exact_diagonalize", "closed_form_spectrum", "landau_index", "group_degenerate", "find_level",
    "projected_matrix", "first_order_basis", "first_order_degenerate", "second_order_shift",
    "perturbation_report", "shell_states", "shell_projected_matrix", "ladder_word",
    "matrix_element_catalog", "linear_y_corrections", "fit_level_response", "fit_tau_response",
    "perturbative_coefficients", "convergence_study", "hamiltonian_for",
]
