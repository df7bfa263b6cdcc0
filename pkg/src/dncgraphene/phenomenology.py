"""Closed-form outputs: tau bound, DNC minimal length and momentum, T = 0 equations of state."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class ConstantsSet:
    name: str
    hbar_evs: float     # eV*s
    hbar_c_evm: float   # eV*m
    v_f: float          # m/s
    l_b_1t: float       # m, magnetic length at B = 1 T


CONSTANTS = {
    # hbar as printed alongside the bound (10x the physical value), hbar*c = 200 MeV*fm
    "paper": ConstantsSet("paper", 6e-15, 2e-7, 1e6, 2.5e-8),
    "codata": ConstantsSet("codata", 6.582119569e-16, 1.973269804e-7, 1e6, math.sqrt(6.582119569e-16)),
}


def constants(name: str) -> ConstantsSet:
    try:
        return CONSTANTS[name]
    except KeyError:
        raise ValueError(f"unknown constants set {name!r}; choose from {sorted(CONSTANTS)}") from None


@dataclass(frozen=True)
class BoundInput:
    delta_e: float
    l_b: float
    v_f: float
    hbar: float

    def __post_init__(self) -> None:
        for k, v in asdict(self).items():
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValueError(f"{k} must be a positive finite number, got {v!r}")

    @classmethod
    def from_constants(cls, cs: ConstantsSet, delta_e: float = 1e-3) -> BoundInput:
        return cls(delta_e, cs.l_b_1t, cs.v_f, cs.hbar_evs)


@dataclass(frozen=True)
class BoundResult:
    tau_max: float           # m^-2
    sqrt_tau_max_m: float    # m^-1
    sqrt_tau_max_ev: float   # eV, via hbar*c
    hbar_c_evm: float
    inputs: BoundInput

    def to_dict(self) -> dict:
        return asdict(self)


def tau_upper_bound(inp: BoundInput, hbar_c_evm: float = CONSTANTS["paper"].hbar_c_evm) -> BoundResult:
    """Largest tau with (hbar v_F / Gamma^3) tau^2 <= delta_E, Gamma = 1/(sqrt(2) l_B).

    tau_max = sqrt(delta_E Gamma^3 / (hbar v_F)) in m^-2; its square root is
    quoted in m^-1 and, multiplied by hbar*c, as an energy.
    """
    if hbar_c_evm <= 0:
        raise ValueError("hbar*c must be positive")
    gamma = 1.0 / (math.sqrt(2.0) * inp.l_b)
    tau_max = math.sqrt(inp.delta_e * gamma**3 / (inp.hbar * inp.v_f))
    root = math.sqrt(tau_max)
    return BoundResult(tau_max, root, root * hbar_c_evm, hbar_c_evm, inp)


def _check_nonneg(**kw: float) -> None:
    for k, v in kw.items():
        if v < 0:
            raise ValueError(f"{k} must be >= 0, got {v!r}")


def minimal_length(theta: float, tau: float, y_mean: float = 0.0) -> float:
    """Theta sqrt(tau) sqrt(1 + tau <Y>^2)."""
    _check_nonneg(theta=theta, tau=tau)
    return theta * math.sqrt(tau) * math.sqrt(1.0 + tau * y_mean**2)


def minimal_momentum(tau: float, y_mean: float = 0.0, hbar: float = 1.0) -> float:
    """hbar sqrt(tau) sqrt(1 + tau <Y>^2)."""
    _check_nonneg(tau=tau, hbar=hbar)
    return hbar * math.sqrt(tau) * math.sqrt(1.0 + tau * y_mean**2)


@dataclass(frozen=True)
class EosState:
    p_f: float
    n: float
    u: float
    mu: float
    P: float
    dP_dn: float
    gamma: float

    @property
    def dn_dP(self) -> float:
        return math.inf if self.dP_dn == 0 else 1.0 / self.dP_dn


def eos(p_f: float, g: float = 2, hbar: float = 1.0, c: float = 1.0) -> EosState:
    """Zero-temperature extreme-relativistic Fermi gas (3D density of states)."""
    if not p_f >= 0:
        raise ValueError(f"p_F must be >= 0, got {p_f!r}")
    if g < 1:
        raise ValueError(f"degeneracy g must be >= 1, got {g!r}")
    pi2h3 = math.pi**2 * hbar**3
    n = g * p_f**3 / (6.0 * pi2h3)
    u = g * c * p_f**4 / (8.0 * pi2h3)
    mu = p_f * c
    P = u / 3.0
    dP_dn = mu / 3.0
    # d ln P / d ln n
    gamma = 4.0 / 3.0 if p_f == 0 else (n / P) * dP_dn
    return EosState(p_f, n, u, mu, P, dP_dn, gamma)


# direction claimed for the DNC branch relative to the commutative one
CLAIMED_ORDERING = {"n": "<", "u": "<", "mu": "<", "P": "<", "dP_dn": ">", "gamma": "=", "dn_dP": ">"}


@dataclass(frozen=True)
class OrderingRow:
    quantity: str
    commutative: float
    dnc: float
    computed: str
    claimed: str
    consistent: bool
    note: str = ""


def _relation(a: float, b: float, rtol: float = 1e-12) -> str:
    if math.isclose(a, b, rel_tol=rtol, abs_tol=0.0) or a == b:
        return "="
    return "<" if a < b else ">"


def ordering_table(e_f: float, shift: float, g: float = 2, hbar: float = 1.0,
                   c: float = 1.0) -> list[OrderingRow]:
    """Compare the commutative EOS at E_F with the DNC one at E_F + shift.

    Directions are computed from the formulas; the claimed direction
    is attached and each row flagged consistent or not.
    """
    if shift > 0:
        raise ValueError("shift must be <= 0 (the DNC Fermi energy lies below the commutative one)")
    if e_f < 0 or e_f + shift < 0:
        raise ValueError("E_F and E_F + shift must be >= 0")
    com, dnc = eos(e_f / c, g, hbar, c), eos((e_f + shift) / c, g, hbar, c)
    rows = []
    for q, claim in CLAIMED_ORDERING.items():
        a, b = getattr(dnc, q), getattr(com, q)
        rel = _relation(a, b)
        ok = rel == claim or (shift == 0 and rel == "=")
        note = ""
        if not ok and q == "dP_dn":
            note = "dP/dn = mu/3 and mu decreases, so dP/dn must decrease"
        rows.append(OrderingRow(q, b, a, rel, claim, ok, note))
    return rows
