"""Dense complex linear algebra used throughout the package.

Operators and density matrices are plain square ``complex128`` numpy arrays.
The Hermitian eigensolver is a cyclic Jacobi method (round-robin ordering, so
each round rotates n/2 disjoint index pairs at once) and the exponential is a
scaling-and-squaring Taylor evaluation; both are kept deliberately simple
because they serve as diagnostics and as an independent oracle for the
time integrator, not as production kernels.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import BadDimension, DimensionTooLarge, NotHermitian

ComplexMatrix = np.ndarray

EXPM_MAX_DIM = 4096
EXPM_TAYLOR_ORDER = 18
EXPM_SCALE_TARGET = 0.5

JACOBI_REL_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


def as_matrix(a) -> ComplexMatrix:
    """Coerce ``a`` to a finite square complex matrix."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise BadDimension(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def identity(dim: int) -> ComplexMatrix:
    return np.eye(dim, dtype=complex)


def kron(a, b) -> ComplexMatrix:
    """Kronecker product, ``out[i*db + k, j*db + l] = a[i, j] * b[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a) -> ComplexMatrix:
    return np.ascontiguousarray(as_matrix(a).conj().T)


def max_abs(a) -> float:
    """Max-entry norm."""
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def hermiticity_error(a) -> float:
    a = np.asarray(a)
    return max_abs(a - a.conj().T)


@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    # Circle-method tournament: every pair (p, q) appears exactly once per
    # sweep, and the pairs inside one round are disjoint.
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def jacobi_eigh(a, tol: float = 1e-9, basis=None, rel_tol: float = JACOBI_REL_TOL,
                max_sweeps: int = JACOBI_MAX_SWEEPS) -> tuple[np.ndarray, ComplexMatrix]:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with ascending real eigenvalues ``w`` and unitary ``v``
    such that ``a @ v ~= v @ diag(w)``.

    ``basis`` is an optional unitary used as a warm start: the iteration begins
    from ``basis^dagger a basis``.  Passing the eigenvectors of a nearby matrix
    (e.g. the previous sample of a slowly evolving density matrix) usually
    converges in one or two sweeps.
    """
    a = as_matrix(a)
    if hermiticity_error(a) > tol:
        raise NotHermitian(f"matrix is not Hermitian within {tol:g} "
                           f"(max asymmetry {hermiticity_error(a):.3e})")
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    if basis is None:
        v = np.eye(n, dtype=complex)
        work = a.copy()
    else:
        v = np.array(basis, dtype=complex, copy=True)
        if v.shape != a.shape:
            raise BadDimension(f"warm-start basis shape {v.shape} != {a.shape}")
        work = v.conj().T @ a @ v
        work = 0.5 * (work + work.conj().T)

    threshold = rel_tol * float(np.linalg.norm(a))
    rounds = _round_robin(n)
    for _ in range(max_sweeps):
        if n == 1 or _off_norm(work) <= threshold:
            break
        for P, Q in rounds:
            apq = work[P, Q]
            r = np.abs(apq)
            active = r > 1e-300
            if not np.any(active):
                continue
            app = work[P, P].real
            aqq = work[Q, Q].real
            safe_r = np.where(active, r, 1.0)
            phase = np.where(active, np.conj(apq) / safe_r, 1.0)
            tau = (aqq - app) / (2.0 * safe_r)
            sgn = np.where(tau >= 0.0, 1.0, -1.0)
            big = np.abs(tau) > 1e150
            t = np.where(big, 0.5 / np.where(big, tau, 1.0),
                         sgn / (np.abs(tau) + np.sqrt(1.0 + np.where(big, 0.0, tau) ** 2)))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            g_pp, g_pq = c, s
            g_qp, g_qq = -s * phase, c * phase

            colp = work[:, P]
            colq = work[:, Q]
            work[:, P] = colp * g_pp + colq * g_qp
            work[:, Q] = colp * g_pq + colq * g_qq
            rowp = work[P, :]
            rowq = work[Q, :]
            work[P, :] = np.conj(g_pp)[:, None] * rowp + np.conj(g_qp)[:, None] * rowq
            work[Q, :] = np.conj(g_pq)[:, None] * rowp + np.conj(g_qq)[:, None] * rowq
            work[P, Q] = 0.0
            work[Q, P] = 0.0

            vp = v[:, P]
            vq = v[:, Q]
            v[:, P] = vp * g_pp + vq * g_qp
            v[:, Q] = vp * g_pq + vq * g_qq

    w = np.diagonal(work).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def hermitian_eigenvalues(a, tol: float = 1e-9) -> list[float]:
    """All eigenvalues of a Hermitian matrix, ascending.

    Raises NotHermitian when the max-entry asymmetry exceeds ``tol``.
    """
    w, _ = jacobi_eigh(a, tol=tol)
    return [float(x) for x in w]


def matrix_exp(a) -> ComplexMatrix:
    """Matrix exponential by scaling and squaring of a Taylor series.

    The input is scaled by ``2**-s`` until its induced 1-norm is at most 0.5
    (which also bounds the max-entry norm), the series is summed to order 18
    with Horner's rule, and the result is squared ``s`` times.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if n > EXPM_MAX_DIM:
        raise DimensionTooLarge(f"matrix_exp is capped at dim {EXPM_MAX_DIM}, got {n}")
    norm1 = float(np.max(np.sum(np.abs(a), axis=0)))
    s = 0
    if norm1 > EXPM_SCALE_TARGET:
        s = int(np.ceil(np.log2(norm1 / EXPM_SCALE_TARGET)))
    x = a / (2.0 ** s)
    eye = np.eye(n, dtype=complex)
    result = eye.copy()
    for k in range(EXPM_TAYLOR_ORDER, 0, -1):
        result = eye + (x @ result) / k
    for _ in range(s):
        result = result @ result
    return result
