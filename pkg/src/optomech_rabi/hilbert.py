"""Truncated Hilbert space of cavity x atom x mechanics and the system Hamiltonian.

Tensor order is cavity (x) atom (x) mechanics, with the atom basis ordered
(|e>, |g>), so the composite index of |n_c, s, n_m> is
``(n_c * 2 + s) * d_m + n_m`` with ``s = 0`` for |e>.
All frequencies and rates are in units of the mechanical frequency.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .errors import BadDimension, BadOccupation, DimensionMismatch, ValidationError
from .linalg import ComplexMatrix, as_matrix, dagger, hermitian_eigenvalues, hermiticity_error, kron


class Frame(str, enum.Enum):
    LAB = "lab"
    ROTATING = "rotating_at_omega_c"


class Slot(str, enum.Enum):
    CAVITY = "cavity"
    ATOM = "atom"
    MECH = "mech"


E, G = 0, 1

SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
# sigma_- = |g><e|
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
SIGMA_PLUS = dagger(SIGMA_MINUS)
PROJ_E = np.diag([1.0, 0.0]).astype(complex)
PROJ_G = np.diag([0.0, 1.0]).astype(complex)


@dataclass(frozen=True)
class SystemParams:
    omega_c: float = 0.0
    omega_a: float = 0.0
    omega_m: float = 1.0
    g_ca: float = 0.5
    g_cm: float = 0.1
    kappa: float = 0.0
    gamma: float = 0.0
    mu: float = 0.0
    n_th: float = 0.0
    n_th0: float = 0.0
    d_c: int = 2
    d_m: int = 6
    frame: Frame = Frame.ROTATING

    def __post_init__(self):
        object.__setattr__(self, "frame", Frame(self.frame))
        for name in ("omega_c", "omega_a", "omega_m", "g_ca", "g_cm", "kappa",
                     "gamma", "mu", "n_th", "n_th0"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(f"{name}: expected a real number, got {value!r}")
            if not math.isfinite(value):
                raise ValidationError(f"{name}: must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        for name in ("g_ca", "g_cm", "kappa", "gamma", "mu", "n_th", "n_th0"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name}: must be >= 0, got {getattr(self, name)!r}")
        if self.omega_m != 1.0:
            raise ValidationError(f"omega_m: fixed to 1 (the unit of frequency), got {self.omega_m!r}")
        for name in ("d_c", "d_m"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise ValidationError(f"{name}: expected an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
            if int(value) < 2:
                raise ValidationError(f"{name}: must be >= 2, got {value!r}")

    @property
    def dim(self) -> int:
        return self.d_c * 2 * self.d_m

    def slot_dim(self, slot) -> int:
        slot = Slot(slot)
        return {Slot.CAVITY: self.d_c, Slot.ATOM: 2, Slot.MECH: self.d_m}[slot]

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    def basis_index(self, n_c: int, atom: str, n_m: int) -> int:
        s = {"e": E, "g": G}[atom]
        return (n_c * 2 + s) * self.d_m + n_m


PARAM_FIELDS = tuple(f.name for f in fields(SystemParams))


def annihilation(d: int) -> ComplexMatrix:
    if int(d) != d or d < 2:
        raise BadDimension(f"annihilation operator needs d >= 2, got {d!r}")
    return np.diag(np.sqrt(np.arange(1, int(d), dtype=float)), 1).astype(complex)


def number_op(d: int) -> ComplexMatrix:
    return np.diag(np.arange(int(d), dtype=float)).astype(complex)


def embed(op, slot, p: SystemParams) -> ComplexMatrix:
    """Lift a single-subsystem operator into the composite space."""
    slot = Slot(slot)
    op = as_matrix(op)
    expected = p.slot_dim(slot)
    if op.shape[0] != expected:
        raise DimensionMismatch(f"{slot.value} operator must be {expected}x{expected}, "
                                f"got {op.shape[0]}x{op.shape[0]}")
    factors = [np.eye(p.d_c, dtype=complex), np.eye(2, dtype=complex), np.eye(p.d_m, dtype=complex)]
    factors[[Slot.CAVITY, Slot.ATOM, Slot.MECH].index(slot)] = op
    return kron(kron(factors[0], factors[1]), factors[2])


@dataclass(frozen=True)
class Operators:
    """Composite-space operators for one parameter set."""

    c: ComplexMatrix
    b: ComplexMatrix
    sigma_minus: ComplexMatrix
    sigma_z: ComplexMatrix
    n_c: ComplexMatrix
    n_b: ComplexMatrix
    proj_e: ComplexMatrix


def operators(p: SystemParams) -> Operators:
    c = embed(annihilation(p.d_c), Slot.CAVITY, p)
    b = embed(annihilation(p.d_m), Slot.MECH, p)
    return Operators(
        c=c,
        b=b,
        sigma_minus=embed(SIGMA_MINUS, Slot.ATOM, p),
        sigma_z=embed(SIGMA_Z, Slot.ATOM, p),
        n_c=embed(number_op(p.d_c), Slot.CAVITY, p),
        n_b=embed(number_op(p.d_m), Slot.MECH, p),
        proj_e=embed(PROJ_E, Slot.ATOM, p),
    )


def build_hamiltonian(p: SystemParams) -> ComplexMatrix:
    """Atom-cavity-mirror Hamiltonian with Jaynes-Cummings and radiation-pressure terms.

    In the rotating frame the cavity frequency is removed and the atom keeps
    only its detuning ``omega_a - omega_c``; this is exact because the
    excitation number commutes with every term.
    """
    ops = operators(p)
    if p.frame is Frame.ROTATING:
        w_c, w_a = 0.0, p.omega_a - p.omega_c
    else:
        w_c, w_a = p.omega_c, p.omega_a
    sp = dagger(ops.sigma_minus)
    cd = dagger(ops.c)
    h = (w_c * ops.n_c
         + 0.5 * w_a * ops.sigma_z
         + p.g_ca * (sp @ ops.c + ops.sigma_minus @ cd)
         + p.omega_m * ops.n_b
         - p.g_cm * ops.n_c @ (ops.b + dagger(ops.b)))
    return 0.5 * (h + dagger(h))


def excitation_number(p: SystemParams) -> ComplexMatrix:
    """Photon number plus excited-state population, a constant of motion."""
    return embed(number_op(p.d_c), Slot.CAVITY, p) + embed(PROJ_E, Slot.ATOM, p)


def thermal_state(d: int, nbar: float) -> ComplexMatrix:
    """Truncated Bose-Einstein state, renormalised to unit trace."""
    if int(d) != d or d < 2:
        raise BadDimension(f"thermal state needs d >= 2, got {d!r}")
    if not nbar >= 0:
        raise BadOccupation(f"mean occupation must be >= 0, got {nbar!r}")
    if nbar == 0:
        weights = np.zeros(int(d))
        weights[0] = 1.0
    else:
        ratio = nbar / (1.0 + nbar)
        weights = ratio ** np.arange(int(d), dtype=float)
        weights /= weights.sum()
    return np.diag(weights).astype(complex)


def basis_ket(p: SystemParams, n_c: int, atom: str, n_m: int) -> np.ndarray:
    psi = np.zeros(p.dim, dtype=complex)
    psi[p.basis_index(n_c, atom, n_m)] = 1.0
    return psi


def projector(psi) -> ComplexMatrix:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def initial_state(p: SystemParams) -> ComplexMatrix:
    """Empty cavity, excited atom, thermal mirror with occupation ``n_th0``."""
    cav = np.zeros((p.d_c, p.d_c), dtype=complex)
    cav[0, 0] = 1.0
    return kron(kron(cav, PROJ_E), thermal_state(p.d_m, p.n_th0))


def check_density_matrix(rho, dim: int | None = None, *, trace_tol: float = 1e-9,
                         herm_tol: float = 1e-9, eig_floor: float = -1e-7) -> ComplexMatrix:
    """Validate the unit-trace / Hermitian / PSD contract and return ``rho``."""
    rho = as_matrix(rho)
    if dim is not None and rho.shape[0] != dim:
        raise DimensionMismatch(f"density matrix has dim {rho.shape[0]}, expected {dim}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {tr.real:.3e} differs from 1")
    if hermiticity_error(rho) > herm_tol:
        raise ValueError("density matrix is not Hermitian")
    lo = hermitian_eigenvalues(rho, tol=herm_tol)[0]
    if lo < eig_floor:
        raise ValueError(f"density matrix has negative eigenvalue {lo:.3e}")
    return rho
