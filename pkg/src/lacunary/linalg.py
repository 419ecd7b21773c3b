"""Dense complex matrix kernels.

Hermitian spectra come from a cyclic Jacobi solver; everything else about
spectra (multiset equality for non-normal matrices) goes through trace
moments ``tr(M^k)``, which determine the characteristic polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "DimensionError",
    "NotHermitianError",
    "SpectrumSummary",
    "adjoint",
    "det",
    "eigh",
    "is_hermitian",
    "jacobi_eigh",
    "matmul",
    "rank",
    "spectra_equal",
    "spectrum",
    "top_eig",
    "trace_moments",
]

HERMITIAN_TOL = 1e-9
RANK_TOL = 1e-9


class DimensionError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


def _square(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    return A


def matmul(A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    return A @ B


def adjoint(A) -> np.ndarray:
    return np.conj(np.asarray(A, dtype=np.complex128)).T


def trace_moments(A, kmax: int | None = None) -> np.ndarray:
    """``[tr(A), tr(A^2), ..., tr(A^kmax)]``; ``kmax`` defaults to ``n``."""
    A = _square(A)
    n = A.shape[0]
    kmax = n if kmax is None else int(kmax)
    out = np.empty(kmax, dtype=np.complex128)
    P = np.eye(n, dtype=np.complex128)
    for k in range(kmax):
        P = P @ A
        out[k] = np.trace(P)
    return out


def is_hermitian(A, tol: float = HERMITIAN_TOL) -> bool:
    A = _square(A)
    scale = max(np.abs(A).max(initial=0.0), 1.0)
    return bool(np.abs(A - A.conj().T).max(initial=0.0) <= tol * scale)


def jacobi_eigh(A, tol: float = 1e-12, max_sweeps: int = 100):
    """Cyclic threshold Jacobi for a Hermitian matrix.

    Returns ``(w, V)`` with ``A V = V diag(w)``, ``w`` sorted descending.
    Sweeps stop once the off-diagonal Frobenius mass drops below
    ``tol * ||A||_F``.
    """
    A = _square(A)
    if not is_hermitian(A):
        raise NotHermitianError("jacobi_eigh needs a Hermitian matrix")
    n = A.shape[0]
    M = (A + A.conj().T) / 2
    V = np.eye(n, dtype=np.complex128)
    fro = np.linalg.norm(M)
    if n == 1 or fro == 0.0:
        return _sorted(np.real(np.diag(M)).copy(), V)
    target = tol * fro
    for sweep in range(max_sweeps):
        off = np.linalg.norm(M - np.diag(np.diag(M)))
        if off < target:
            break
        # threshold: skip pairs already negligible relative to the remaining mass
        thresh = off / (n * n) if sweep < 3 else 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                w = M[p, q]
                aw = abs(w)
                if aw <= thresh or aw == 0.0:
                    continue
                app = M[p, p].real
                aqq = M[q, q].real
                phase = w / aw
                tau = (aqq - app) / (2.0 * aw)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # U = [[c, s], [-s conj(phase), c conj(phase)]] on columns (p, q)
                cp = np.conj(phase)
                col_p = M[:, p].copy()
                col_q = M[:, q].copy()
                M[:, p] = c * col_p - s * cp * col_q
                M[:, q] = s * col_p + c * cp * col_q
                row_p = M[p, :].copy()
                row_q = M[q, :].copy()
                M[p, :] = c * row_p - s * phase * row_q
                M[q, :] = s * row_p + c * phase * row_q
                M[p, q] = 0.0
                M[q, p] = 0.0
                M[p, p] = M[p, p].real
                M[q, q] = M[q, q].real
                v_p = V[:, p].copy()
                v_q = V[:, q].copy()
                V[:, p] = c * v_p - s * cp * v_q
                V[:, q] = s * v_p + c * cp * v_q
    else:
        raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return _sorted(np.real(np.diag(M)).copy(), V)


def _sorted(w, V):
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


@dataclass(frozen=True)
class SpectrumSummary:
    n: int
    trace_moments: np.ndarray
    hermitian: bool
    eigenvalues: np.ndarray | None = None
    eigenvectors: np.ndarray | None = None

    @property
    def top(self) -> float:
        if self.eigenvalues is None:
            raise ValueError("no eigenvalue list for a non-Hermitian spectrum")
        return float(self.eigenvalues[0])


def eigh(A) -> SpectrumSummary:
    """Eigen-decomposition of a Hermitian matrix (descending eigenvalues)."""
    A = _square(A)
    w, V = jacobi_eigh(A)
    return SpectrumSummary(
        n=A.shape[0],
        trace_moments=trace_moments(A),
        hermitian=True,
        eigenvalues=w,
        eigenvectors=V,
    )


def spectrum(A) -> SpectrumSummary:
    """Trace moments always; eigenvalues only when ``A`` is Hermitian."""
    A = _square(A)
    if is_hermitian(A):
        return eigh(A)
    return SpectrumSummary(n=A.shape[0], trace_moments=trace_moments(A), hermitian=False)


def top_eig(A, tol: float = 1e-12, maxiter: int = 5000, seed: int = 0) -> float:
    """Largest eigenvalue of a Hermitian positive semidefinite matrix.

    Power iteration with a Rayleigh-quotient stopping rule; if the gap is too
    small to converge within ``maxiter`` steps the Jacobi value is returned.
    """
    A = _square(A)
    if not is_hermitian(A):
        raise NotHermitianError("top_eig needs a Hermitian matrix")
    n = A.shape[0]
    scale = np.linalg.norm(A)
    if scale == 0.0:
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for _ in range(maxiter):
        w = A @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        Av = A @ v
        rq = float(np.vdot(v, Av).real)
        if np.linalg.norm(Av - rq * v) <= tol * scale:
            return rq
    return float(jacobi_eigh(A)[0][0])


def rank(A, tol: float = RANK_TOL) -> int:
    """Numerical rank by column-pivoted QR, threshold ``tol * |R_00|``."""
    A = np.asarray(A, dtype=np.complex128)
    if A.size == 0:
        return 0
    R = scipy.linalg.qr(A, mode="r", pivoting=True)[0]
    d = np.abs(np.diag(R))
    if d.size == 0 or d[0] == 0.0:
        return 0
    return int(np.count_nonzero(d > tol * d[0]))


def det(A) -> complex:
    """Determinant via LU with partial pivoting."""
    A = _square(A)
    return complex(np.linalg.det(A))


def spectra_equal(A, B, tol: float = 1e-8) -> bool:
    """Multiset equality of spectra through ``tr(A^k) = tr(B^k)``, ``k = 1..n``.

    Moment ``k`` is compared against ``tol * n * s^k`` with ``s`` the larger
    Frobenius norm, which bounds ``sum |mu_j|^k`` by ``n s^k``.
    """
    A = _square(A)
    B = _square(B)
    if A.shape != B.shape:
        return False
    n = A.shape[0]
    s = max(np.linalg.norm(A), np.linalg.norm(B))
    if s == 0.0:
        return True
    # normalise first so high powers neither overflow nor underflow
    ta = trace_moments(A / s)
    tb = trace_moments(B / s)
    return bool(np.all(np.abs(ta - tb) <= tol * n))
