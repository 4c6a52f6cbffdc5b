"""Physical observables and health diagnostics of a density matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .hilbert import PROJ_E, PROJ_G, SIGMA_Z, Slot, SystemParams, embed, number_op
from .linalg import as_matrix, hermiticity_error, jacobi_eigh


@dataclass(frozen=True)
class ObservableSet:
    delta_p: float
    n_b: float
    n_c: float
    purity: float
    trace_error: float
    herm_error: float
    min_eig: float


def expectation(rho, op) -> complex:
    """``Tr[rho op]`` without forming the product."""
    return complex(np.einsum("ij,ji->", rho, op))


def _checked(rho, p: SystemParams):
    rho = as_matrix(rho)
    if rho.shape[0] != p.dim:
        raise DimensionMismatch(f"density matrix has dim {rho.shape[0]}, parameters imply {p.dim}")
    return rho


def population_inversion(rho, p: SystemParams) -> float:
    """``Tr[rho sigma_z]``, i.e. P_e - P_g."""
    rho = _checked(rho, p)
    return expectation(rho, embed(SIGMA_Z, Slot.ATOM, p)).real


def excited_population(rho, p: SystemParams) -> float:
    return expectation(_checked(rho, p), embed(PROJ_E, Slot.ATOM, p)).real


def ground_population(rho, p: SystemParams) -> float:
    return expectation(_checked(rho, p), embed(PROJ_G, Slot.ATOM, p)).real


def phonon_number(rho, p: SystemParams) -> float:
    """Mean occupation of the undisplaced mirror mode, ``Tr[rho b^dag b]``."""
    rho = _checked(rho, p)
    return expectation(rho, embed(number_op(p.d_m), Slot.MECH, p)).real


def photon_number(rho, p: SystemParams) -> float:
    rho = _checked(rho, p)
    return expectation(rho, embed(number_op(p.d_c), Slot.CAVITY, p)).real


def min_eigenvalue(rho, eigensolver: str = "jacobi") -> float:
    rho = np.asarray(rho)
    herm = 0.5 * (rho + rho.conj().T)
    if eigensolver == "jacobi":
        return float(jacobi_eigh(herm)[0][0])
    if eigensolver == "lapack":
        return float(np.linalg.eigvalsh(herm)[0])
    raise ValueError(f"unknown eigensolver {eigensolver!r} (expected 'jacobi' or 'lapack')")


def diagnostics(rho, eigensolver: str = "jacobi") -> tuple[float, float, float, float]:
    """``(trace_error, herm_error, min_eig, purity)`` of a density matrix."""
    rho = as_matrix(rho)
    trace_error = float(np.trace(rho).real) - 1.0
    herm_error = hermiticity_error(rho)
    min_eig = min_eigenvalue(rho, eigensolver)
    purity = expectation(rho, rho).real
    return trace_error, herm_error, min_eig, purity


def observe(rho, p: SystemParams, eigensolver: str = "jacobi") -> ObservableSet:
    trace_error, herm_error, min_eig, purity = diagnostics(rho, eigensolver)
    return ObservableSet(
        delta_p=population_inversion(rho, p),
        n_b=phonon_number(rho, p),
        n_c=photon_number(rho, p),
        purity=purity,
        trace_error=trace_error,
        herm_error=herm_error,
        min_eig=min_eig,
    )
