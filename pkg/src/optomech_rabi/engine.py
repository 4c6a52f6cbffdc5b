"""Master-equation time evolution with cavity, atomic and thermal mechanical damping.

The right-hand side is

    d rho/dt = -i[H, rho] - kappa L[c] rho - gamma L[sigma_-] rho
               - (n_th + 1) mu L[b] rho - n_th mu L[b^dag] rho

with ``L[o] rho = o^dag o rho / 2 - o rho o^dag + rho o^dag o / 2``.

``liouvillian_apply`` is the plain dense form and is what the exponential
oracle is assembled from.  ``integrate`` uses a precompiled sparse form of the
same generator and a fixed-step classic Runge-Kutta scheme.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sps

from .errors import DimensionMismatch, DimensionTooLarge, UnstableIntegration, ValidationError
from .hilbert import SystemParams, build_hamiltonian, initial_state, operators
from .linalg import ComplexMatrix, as_matrix, dagger, hermiticity_error, jacobi_eigh, matrix_exp

log = logging.getLogger(__name__)

DEFAULT_DT = 0.005
DEFAULT_STRIDE = 10
MAX_DT = 0.02
TRACE_ABORT = 1e-6
EIG_ABORT = -1e-5
ORACLE_MAX_DIM = 64


@dataclass(frozen=True)
class EvolutionSpec:
    t_end: float
    dt: float = DEFAULT_DT
    sample_stride: int = DEFAULT_STRIDE
    params: SystemParams = field(default_factory=SystemParams)
    max_dt: float = MAX_DT

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValidationError(f"dt: must be > 0, got {self.dt!r}")
        if not (self.t_end >= self.dt and math.isfinite(self.t_end)):
            raise ValidationError(f"t_end: must be >= dt, got {self.t_end!r}")
        if self.dt > self.max_dt:
            raise ValidationError(f"dt: {self.dt!r} exceeds the step guard {self.max_dt!r}")
        if isinstance(self.sample_stride, bool) or int(self.sample_stride) != self.sample_stride \
                or self.sample_stride < 1:
            raise ValidationError(f"sample_stride: must be a positive integer, got {self.sample_stride!r}")

    @property
    def n_steps(self) -> int:
        n = round(self.t_end / self.dt)
        # Accept t_end within rounding of a whole number of steps; otherwise
        # the last step is shortened to land exactly on t_end.
        if abs(n * self.dt - self.t_end) > 1e-9 * max(1.0, self.t_end):
            n = math.ceil(self.t_end / self.dt)
        return int(n)

    def time_of_step(self, k: int) -> float:
        return self.t_end if k == self.n_steps else k * self.dt


COLUMNS = ("t", "delta_p", "n_b", "n_c", "trace_error", "herm_error", "min_eig")


@dataclass
class TimeSeries:
    """Sampled observables and diagnostics of one run."""

    t: np.ndarray
    delta_p: np.ndarray
    n_b: np.ndarray
    n_c: np.ndarray
    trace_error: np.ndarray
    herm_error: np.ndarray
    min_eig: np.ndarray
    extra: dict = field(default_factory=dict)
    final_state: ComplexMatrix | None = None
    params: SystemParams | None = None

    def __len__(self):
        return len(self.t)

    def rows(self):
        for i in range(len(self.t)):
            yield tuple(float(getattr(self, c)[i]) for c in COLUMNS)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(",".join(COLUMNS) + "\n")
            for row in self.rows():
                fh.write(",".join(f"{v:.12g}" for v in row) + "\n")


class _Recorder:
    def __init__(self, extra_names):
        self.cols = {c: [] for c in COLUMNS}
        self.extra = {name: [] for name in extra_names}

    def series(self, final_state=None, params=None) -> TimeSeries:
        arrays = {c: np.array(v, dtype=float) for c, v in self.cols.items()}
        extra = {k: np.array(v, dtype=float) for k, v in self.extra.items()}
        return TimeSeries(**arrays, extra=extra, final_state=final_state, params=params)


def dissipator(op, rho) -> ComplexMatrix:
    """``L[o] rho = o^dag o rho / 2 - o rho o^dag + rho o^dag o / 2``."""
    op = as_matrix(op)
    rho = as_matrix(rho)
    if op.shape != rho.shape:
        raise DimensionMismatch(f"operator {op.shape} and state {rho.shape} differ")
    od = op.conj().T
    ood = od @ op
    return 0.5 * (ood @ rho) - op @ rho @ od + 0.5 * (rho @ ood)


def _channels(p: SystemParams):
    """(rate, operator) pairs entering with a minus sign in front of L[.]."""
    ops = operators(p)
    return [
        (p.kappa, ops.c),
        (p.gamma, ops.sigma_minus),
        ((p.n_th + 1.0) * p.mu, ops.b),
        (p.n_th * p.mu, dagger(ops.b)),
    ]


def liouvillian_apply(rho, p: SystemParams, H) -> ComplexMatrix:
    """Full master-equation right-hand side evaluated densely."""
    rho = as_matrix(rho)
    H = as_matrix(H)
    if rho.shape != H.shape or rho.shape[0] != p.dim:
        raise DimensionMismatch(f"state {rho.shape}, Hamiltonian {H.shape}, parameters imply dim {p.dim}")
    out = -1j * (H @ rho - rho @ H)
    for rate, op in _channels(p):
        if rate:
            out -= rate * dissipator(op, rho)
    return out


class Liouvillian:
    """Sparse precompiled generator, ``rho -> -i(K rho - rho K^dag) + sum J rho J^dag``.

    ``K = H - (i/2) sum rate o^dag o`` and ``J = sqrt(rate) o``; algebraically
    identical to :func:`liouvillian_apply`.
    """

    def __init__(self, p: SystemParams, H=None):
        H = build_hamiltonian(p) if H is None else as_matrix(H)
        if H.shape[0] != p.dim:
            raise DimensionMismatch(f"Hamiltonian dim {H.shape[0]} != {p.dim}")
        k = H.astype(complex)
        jumps = []
        for rate, op in _channels(p):
            if rate:
                k = k - 0.5j * rate * (op.conj().T @ op)
                jumps.append(sps.csr_matrix(math.sqrt(rate) * op))
        self.dim = p.dim
        self._k = sps.csr_matrix(k)
        # rho K^dag = (conj(K) rho^T)^T
        self._k_conj = sps.csr_matrix(k.conj())
        self._jumps = jumps

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        out = -1j * (self._k @ rho)
        out += 1j * (self._k_conj @ rho.T).T
        for j in self._jumps:
            # J rho J^dag = J (J rho^dag)^dag
            out += j @ (j @ rho.conj().T).conj().T
        return out


def _rk4_step(f, rho, dt):
    k1 = f(rho)
    k2 = f(rho + (0.5 * dt) * k1)
    k3 = f(rho + (0.5 * dt) * k2)
    k4 = f(rho + dt * k3)
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(rho0, spec: EvolutionSpec, *, extra: dict | None = None, H=None,
              eigensolver: str = "lapack") -> TimeSeries:
    """Fixed-step RK4 evolution of ``rho0`` recording every ``sample_stride``-th step.

    ``extra`` maps column names to operators whose expectation values are
    recorded alongside the standard columns.  ``eigensolver`` selects how the
    per-sample minimum eigenvalue is computed (``"lapack"`` or ``"jacobi"``).

    Raises UnstableIntegration (carrying the partial series) when the trace
    drifts by more than 1e-6 or an eigenvalue falls below -1e-5.
    """
    p = spec.params
    rho = np.array(as_matrix(rho0), dtype=complex, copy=True)
    if rho.shape[0] != p.dim:
        raise DimensionMismatch(f"initial state dim {rho.shape[0]} != {p.dim}")
    if eigensolver not in ("lapack", "jacobi"):
        raise ValueError(f"unknown eigensolver {eigensolver!r}")
    rhs = Liouvillian(p, H)
    ops = operators(p)
    sz_diag = np.diagonal(ops.sigma_z).real.copy()
    nb_diag = np.diagonal(ops.n_b).real.copy()
    nc_diag = np.diagonal(ops.n_c).real.copy()
    extra = dict(extra or {})
    rec = _Recorder(extra)
    warm = None

    def sample(t, state, herm_err):
        nonlocal warm
        diag = np.diagonal(state).real
        rec.cols["t"].append(t)
        rec.cols["delta_p"].append(float(diag @ sz_diag))
        rec.cols["n_b"].append(float(diag @ nb_diag))
        rec.cols["n_c"].append(float(diag @ nc_diag))
        trace_error = float(np.trace(state).real) - 1.0
        rec.cols["trace_error"].append(trace_error)
        rec.cols["herm_error"].append(herm_err)
        if eigensolver == "lapack":
            min_eig = float(np.linalg.eigvalsh(state)[0])
        else:
            w, warm = jacobi_eigh(state, basis=warm)
            min_eig = float(w[0])
        rec.cols["min_eig"].append(min_eig)
        for name, op in extra.items():
            rec.extra[name].append(float(np.einsum("ij,ji->", state, op).real))
        if abs(trace_error) > TRACE_ABORT or min_eig < EIG_ABORT:
            raise UnstableIntegration(
                f"integration left the physical envelope at t={t:.6g}: "
                f"trace error {trace_error:.3e}, min eigenvalue {min_eig:.3e}",
                series=rec.series(final_state=state.copy(), params=p),
            )

    n = spec.n_steps
    sample(0.0, rho, hermiticity_error(rho))
    for k in range(1, n + 1):
        t_prev = spec.time_of_step(k - 1)
        t_next = spec.time_of_step(k)
        rho = _rk4_step(rhs, rho, t_next - t_prev)
        if k % spec.sample_stride == 0 or k == n:
            herm_err = hermiticity_error(rho)
            rho = 0.5 * (rho + rho.conj().T)
            sample(t_next, rho, herm_err)
        else:
            rho = 0.5 * (rho + rho.conj().T)
    log.debug("integrated %d steps to t=%g (dim %d)", n, spec.t_end, p.dim)
    return rec.series(final_state=rho, params=p)


def liouvillian_superoperator(p: SystemParams, H=None) -> ComplexMatrix:
    """Matrix of the generator acting on column-stacked ``vec(rho)``."""
    H = build_hamiltonian(p) if H is None else as_matrix(H)
    d = p.dim
    sup = np.zeros((d * d, d * d), dtype=complex)
    unit = np.zeros((d, d), dtype=complex)
    for j in range(d):
        for i in range(d):
            unit[i, j] = 1.0
            sup[:, j * d + i] = liouvillian_apply(unit, p, H).reshape(-1, order="F")
            unit[i, j] = 0.0
    return sup


def oracle_evolve(rho0, p: SystemParams, t: float, H=None) -> ComplexMatrix:
    """``rho(t) = exp(L t) rho0`` through the dense superoperator exponential."""
    rho0 = as_matrix(rho0)
    if p.dim > ORACLE_MAX_DIM:
        raise DimensionTooLarge(f"oracle evolution is capped at dim {ORACLE_MAX_DIM}, got {p.dim}")
    if rho0.shape[0] != p.dim:
        raise DimensionMismatch(f"initial state dim {rho0.shape[0]} != {p.dim}")
    if t == 0:
        return rho0.copy()
    prop = matrix_exp(liouvillian_superoperator(p, H) * t)
    vec = prop @ rho0.reshape(-1, order="F")
    return vec.reshape(p.dim, p.dim, order="F")


@dataclass(frozen=True)
class ConvergenceReport:
    d_m: int
    d_m_larger: int
    max_delta_p_dev: float
    max_n_b_dev: float

    def __str__(self):
        return (f"d_m {self.d_m} -> {self.d_m_larger}: "
                f"max |delta_p| deviation {self.max_delta_p_dev:.3e}, "
                f"max |n_b| deviation {self.max_n_b_dev:.3e}")


def convergence_check(p: SystemParams, spec: EvolutionSpec, d_m_step: int,
                      eigensolver: str = "lapack") -> ConvergenceReport:
    """Compare observables at ``d_m`` and ``d_m + d_m_step`` on the shared sample grid."""
    if isinstance(d_m_step, bool) or int(d_m_step) != d_m_step or d_m_step < 1:
        raise ValidationError(f"d_m_step: must be a positive integer, got {d_m_step!r}")
    small = p
    large = p.with_(d_m=p.d_m + int(d_m_step))
    runs = []
    for params in (small, large):
        s = replace(spec, params=params)
        runs.append(integrate(initial_state(params), s, eigensolver=eigensolver))
    a, b = runs
    return ConvergenceReport(
        d_m=small.d_m,
        d_m_larger=large.d_m,
        max_delta_p_dev=float(np.max(np.abs(a.delta_p - b.delta_p))),
        max_n_b_dev=float(np.max(np.abs(a.n_b - b.n_b))),
    )
