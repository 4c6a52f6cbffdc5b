"""Closed-form three-level model of the modulated Rabi oscillation.

Starting from |0_c, e, 0_m>, the dressed atom-cavity states |+/->, a
displaced mirror mode and a rotating-wave approximation confine the dynamics
to span{|-,0>, |+,0>, |-,1>}.  Everything here is evaluated in closed form
and broadcasts over numpy arrays of times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCoupling, OffResonance
from .hilbert import Frame, SystemParams, basis_ket, operators
from .linalg import ComplexMatrix, dagger

RESONANCE_TOL = 1e-12


@dataclass(frozen=True)
class DerivedParams:
    Omega_g: float
    eta: float
    Nnorm: float
    xi: float
    Omega_plus: float
    Omega_minus: float
    Omega_ca: float


def _require_coupling(p: SystemParams):
    if not p.g_cm > 0:
        raise DegenerateCoupling("the three-level model needs g_cm > 0")


def derived_params(p: SystemParams) -> DerivedParams:
    _require_coupling(p)
    detuning = p.omega_m - 2.0 * p.g_ca
    omega_g = math.hypot(detuning, p.g_cm)
    # (Omega_g - detuning)/g_cm == g_cm/(Omega_g + detuning); pick the form
    # without cancellation.
    if detuning > 0:
        eta = p.g_cm / (omega_g + detuning)
    else:
        eta = (omega_g - detuning) / p.g_cm
    return DerivedParams(
        Omega_g=omega_g,
        eta=eta,
        Nnorm=1.0 / math.sqrt(1.0 + eta * eta),
        xi=(1.0 - eta * eta) / (1.0 + eta * eta),
        Omega_plus=0.5 * (p.omega_m + omega_g),
        Omega_minus=0.5 * (p.omega_m - omega_g),
        Omega_ca=0.5 * p.omega_m + p.g_ca,
    )


def _frame_frequencies(p: SystemParams) -> tuple[float, float]:
    if p.frame is Frame.ROTATING:
        return 0.0, p.omega_a - p.omega_c
    return p.omega_c, p.omega_a


def atom_cavity_hamiltonian(p: SystemParams) -> ComplexMatrix:
    """Cavity + atom + Jaynes-Cummings part of the Hamiltonian, in ``p.frame``."""
    ops = operators(p)
    w_c, w_a = _frame_frequencies(p)
    sp = dagger(ops.sigma_minus)
    return (w_c * ops.n_c + 0.5 * w_a * ops.sigma_z
            + p.g_ca * (sp @ ops.c + ops.sigma_minus @ dagger(ops.c)))


def dressed_energies(p: SystemParams) -> tuple[float, float]:
    """Eigenvalues of the atom-cavity part on |+> and |->."""
    _, w_a = _frame_frequencies(p)
    return 0.5 * w_a + p.g_ca, 0.5 * w_a - p.g_ca


def dressed_basis_vectors(p: SystemParams) -> tuple[np.ndarray, np.ndarray]:
    """``(|+>, |->)`` = (|1,g> +/- |0,e>)/sqrt(2), with the mirror in vacuum."""
    if abs(p.omega_a - p.omega_c) > RESONANCE_TOL:
        raise OffResonance(f"dressed states assume omega_a == omega_c "
                           f"(got {p.omega_a!r} vs {p.omega_c!r})")
    one_g = basis_ket(p, 1, "g", 0)
    zero_e = basis_ket(p, 0, "e", 0)
    return (one_g + zero_e) / math.sqrt(2.0), (one_g - zero_e) / math.sqrt(2.0)


def build_h_eff_3d(p: SystemParams) -> ComplexMatrix:
    """Effective Hamiltonian on the ordered basis (|-,0'>, |+,0'>, |-,1'>)."""
    h = np.zeros((3, 3), dtype=complex)
    h[0, 0] = -p.g_ca
    h[1, 1] = p.g_ca
    h[2, 2] = -p.g_ca + p.omega_m
    h[1, 2] = h[2, 1] = -0.5 * p.g_cm
    return h


def h_eff_eigenvalues(p: SystemParams) -> np.ndarray:
    """Closed-form spectrum {-g_ca, Omega_-, Omega_+}, ascending."""
    d = derived_params(p)
    return np.sort(np.array([-p.g_ca, d.Omega_minus, d.Omega_plus]))


def amplitudes(t, p: SystemParams):
    """Probability amplitudes ``(A_0e0, A_0e1)`` of |0,e,0'> and |0,e,1'>."""
    d = derived_params(p)
    t = np.asarray(t, dtype=float)
    n2 = d.Nnorm ** 2
    carrier = np.exp(-0.5j * p.omega_m * t)
    half = 0.5 * d.Omega_g * t
    a_0e1 = -1j * n2 * d.eta * carrier * np.sin(half)
    a_0e0 = 0.5 * (n2 * carrier * (d.eta ** 2 * np.exp(-1j * half) + np.exp(1j * half))
                   + np.exp(1j * p.g_ca * t))
    return a_0e0, a_0e1


def excited_probability(t, p: SystemParams):
    a_0e0, a_0e1 = amplitudes(t, p)
    return np.abs(a_0e0) ** 2 + np.abs(a_0e1) ** 2


def delta_p_general(t, p: SystemParams):
    """Population inversion of the three-level model for any detuning of the mirror from the Rabi splitting."""
    d = derived_params(p)
    t = np.asarray(t, dtype=float)
    fast = d.Omega_ca * t
    slow = 0.5 * d.Omega_g * t
    return np.cos(fast) * np.cos(slow) + d.xi * np.sin(fast) * np.sin(slow)


def delta_p_resonant(t, p: SystemParams):
    """Rabi oscillation ``cos(2 g_ca t)`` under the envelope ``cos(g_cm t / 2)``."""
    t = np.asarray(t, dtype=float)
    return np.cos(2.0 * p.g_ca * t) * np.cos(0.5 * p.g_cm * t)
