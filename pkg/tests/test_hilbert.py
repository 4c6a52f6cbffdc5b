import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from optomech_rabi.errors import BadDimension, BadOccupation, DimensionMismatch, ValidationError
from optomech_rabi.hilbert import (
    SIGMA_Z,
    Frame,
    Slot,
    SystemParams,
    annihilation,
    basis_ket,
    build_hamiltonian,
    check_density_matrix,
    embed,
    excitation_number,
    initial_state,
    number_op,
    thermal_state,
)
from optomech_rabi.linalg import dagger, kron
from optomech_rabi.observables import photon_number, population_inversion

params_strategy = st.builds(
    SystemParams,
    omega_c=st.floats(-2, 2),
    omega_a=st.floats(-2, 2),
    g_ca=st.floats(0, 1),
    g_cm=st.floats(0, 0.5),
    d_c=st.integers(2, 3),
    d_m=st.integers(2, 5),
    frame=st.sampled_from(list(Frame)),
)


def test_annihilation_small():
    assert np.array_equal(annihilation(2), np.array([[0, 1], [0, 0]]))
    a3 = annihilation(3)
    assert a3[0, 1] == 1 and a3[1, 2] == pytest.approx(math.sqrt(2))
    assert np.count_nonzero(a3) == 2


@pytest.mark.parametrize("d", [2, 3, 7])
def test_number_operator(d):
    a = annihilation(d)
    assert np.allclose(dagger(a) @ a, np.diag(np.arange(d)), atol=1e-15)


def test_annihilation_rejects_small_dim():
    with pytest.raises(BadDimension):
        annihilation(1)


def test_embed_identity():
    p = SystemParams(d_c=3, d_m=4)
    for slot, d in ((Slot.CAVITY, 3), (Slot.ATOM, 2), (Slot.MECH, 4)):
        assert np.array_equal(embed(np.eye(d), slot, p), np.eye(p.dim))


def test_embed_sigma_z_ordering():
    p = SystemParams(d_c=2, d_m=2)
    out = embed(SIGMA_Z, "atom", p)
    assert np.array_equal(np.diagonal(out).real, [1, 1, -1, -1, 1, 1, -1, -1])


def test_embed_products_factorise():
    rng = np.random.default_rng(0)
    p = SystemParams(d_c=3, d_m=2)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    prod = embed(a, "cavity", p) @ embed(b, "mech", p)
    assert np.max(np.abs(prod - kron(kron(a, np.eye(2)), b))) < 1e-12


def test_embed_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        embed(np.eye(3), "atom", SystemParams())


def test_basis_index_convention():
    p = SystemParams(d_c=2, d_m=3)
    assert p.basis_index(0, "e", 0) == 0
    assert p.basis_index(0, "g", 2) == 5
    assert p.basis_index(1, "e", 1) == 7


def _element(h, p, bra, ket):
    return basis_ket(p, *bra).conj() @ h @ basis_ket(p, *ket)


@pytest.mark.parametrize("frame", list(Frame))
def test_hamiltonian_couplings(frame):
    p = SystemParams(g_ca=0.37, g_cm=0.11, d_m=4, frame=frame, omega_c=0.3, omega_a=0.3)
    h = build_hamiltonian(p)
    assert _element(h, p, (1, "g", 0), (0, "e", 0)) == pytest.approx(0.37, abs=1e-15)
    assert _element(h, p, (1, "g", 1), (1, "g", 0)) == pytest.approx(-0.11, abs=1e-15)
    assert _element(h, p, (1, "g", 2), (1, "g", 1)) == pytest.approx(-0.11 * math.sqrt(2), abs=1e-15)
    # no radiation pressure without a photon
    assert _element(h, p, (0, "e", 1), (0, "e", 0)) == 0


def test_hamiltonian_decoupled_diagonal():
    p = SystemParams(g_ca=0.0, g_cm=0.0, d_m=4)
    h = build_hamiltonian(p)
    assert np.count_nonzero(h - np.diag(np.diagonal(h))) == 0
    n_m = np.tile(np.arange(4), 4)
    assert np.allclose(np.diagonal(h).real, n_m, atol=0)


@settings(max_examples=40, deadline=None)
@given(params_strategy)
def test_hamiltonian_hermitian_and_conserves_excitations(p):
    h = build_hamiltonian(p)
    n = excitation_number(p)
    assert np.max(np.abs(h - dagger(h))) <= 1e-12
    assert np.max(np.abs(h @ n - n @ h)) <= 1e-12


@settings(max_examples=20, deadline=None)
@given(params_strategy)
def test_frames_differ_by_excitation_number(p):
    lab = build_hamiltonian(p.with_(frame=Frame.LAB))
    rot = build_hamiltonian(p.with_(frame=Frame.ROTATING))
    diff = lab - rot - p.omega_c * excitation_number(p)
    assert np.max(np.abs(diff - diff[0, 0] * np.eye(p.dim))) <= 1e-12
    assert diff[0, 0] == pytest.approx(-0.5 * p.omega_c, abs=1e-12)


def test_excitation_number_expectations():
    p = SystemParams()
    n = excitation_number(p)
    for ket in ((0, "e", 0), (1, "g", 0)):
        psi = basis_ket(p, *ket)
        assert (psi.conj() @ n @ psi).real == 1.0


def test_thermal_state_ground_and_trace():
    assert np.array_equal(thermal_state(4, 0.0), np.diag([1.0, 0, 0, 0]))
    assert np.trace(thermal_state(5, 2.3)).real == pytest.approx(1.0, abs=1e-15)


def test_thermal_state_mean_occupation():
    # Oracle: finite geometric series evaluated in 40-digit arithmetic.
    assert np.trace(thermal_state(30, 0.5) @ number_op(30)).real == pytest.approx(0.49999999999985429, abs=1e-15)
    assert abs(np.trace(thermal_state(30, 0.5) @ number_op(30)).real - 0.5) <= 1e-8


def test_thermal_state_two_levels():
    assert np.allclose(np.diagonal(thermal_state(2, 1.0)).real, [2 / 3, 1 / 3], atol=1e-15)


@given(st.integers(2, 40), st.floats(0, 50))
def test_thermal_state_properties(d, nbar):
    rho = thermal_state(d, nbar)
    w = np.diagonal(rho).real
    assert np.count_nonzero(rho - np.diag(np.diagonal(rho))) == 0
    assert np.all(w >= 0) and w[0] > 0
    assert w.sum() == pytest.approx(1.0, abs=1e-12)


def test_thermal_state_rejects_negative_occupation():
    with pytest.raises(BadOccupation):
        thermal_state(4, -0.1)


def test_initial_state_pure_excited_vacuum():
    p = SystemParams()
    rho = initial_state(p)
    assert np.trace(rho @ rho).real == pytest.approx(1.0, abs=1e-15)
    assert population_inversion(rho, p) == 1.0
    assert photon_number(rho, p) == 0.0
    assert rho[0, 0] == 1.0
    check_density_matrix(rho, p.dim)


def test_initial_state_thermal_mirror():
    p = SystemParams(n_th0=0.5, d_m=30)
    rho = initial_state(p)
    check_density_matrix(rho, p.dim)
    assert population_inversion(rho, p) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("field,value", [
    ("kappa", -0.1), ("g_ca", -1.0), ("d_m", 1), ("d_c", 0), ("omega_m", 2.0), ("n_th", float("nan")),
])
def test_params_validation(field, value):
    with pytest.raises(ValidationError, match=field):
        SystemParams(**{field: value})
