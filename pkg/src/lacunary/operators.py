"""The operator families ``T_psi^phi`` and ``S_psi^phi`` and their restrictions.

With ``Phi`` the Fourier transform, ``C`` the reflection ``f -> f(-x)`` and
``P_rho`` multiplication by ``rho``::

    T_psi^phi = P_psi Phi P_{phi^c} Phi C
    S_psi^phi = P_psi Phi P_{phi^c} Phi P_{conj(psi^c)} C

so that ``T_psi^phi f = psi * (Phi(phi^c) conv f)``.  Application is always
evaluated through these composition chains; dense matrices are only built
for groups up to ``MATRIX_CAP`` elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .dissociation import SetMask
from .fourier import (
    FuncC,
    GroupMismatchError,
    _dense_kernel,
    dft_array,
    reflect_array,
)
from .group import GroupSpec

__all__ = [
    "MATRIX_CAP",
    "OperatorSpec",
    "RestrictedOperator",
    "SubspaceBasis",
    "T",
    "S",
    "adjoint_chain",
    "apply",
    "apply_S",
    "apply_T",
    "chain_matrix",
    "dual_restricted_basis",
    "full_matrix",
    "is_positive_definite",
    "is_singular",
    "multiplier",
    "restricted",
    "support_basis",
]

MATRIX_CAP = 256
DEFINITE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class OperatorSpec:
    kind: str
    phi: FuncC
    psi: FuncC

    def __post_init__(self):
        if self.kind not in ("T", "S"):
            raise ValueError(f"operator kind must be 'T' or 'S', got {self.kind!r}")
        if self.phi.group != self.psi.group:
            raise GroupMismatchError("phi and psi must live on the same group")

    @property
    def group(self) -> GroupSpec:
        return self.phi.group


def T(phi: FuncC, psi: FuncC) -> OperatorSpec:
    return OperatorSpec("T", phi, psi)


def S(phi: FuncC, psi: FuncC) -> OperatorSpec:
    return OperatorSpec("S", phi, psi)


def _apply_array(op: OperatorSpec, X: np.ndarray) -> np.ndarray:
    g = op.group
    phi_c = reflect_array(g, op.phi.values)
    Y = reflect_array(g, X)
    if op.kind == "S":
        Y = np.conj(reflect_array(g, op.psi.values)) * Y
    Y = dft_array(g, Y)
    Y = phi_c * Y
    Y = dft_array(g, Y)
    return op.psi.values * Y


def _check_input(op: OperatorSpec, f: FuncC):
    if f.group != op.group:
        raise GroupMismatchError(f"operator on {op.group} applied to a function on {f.group}")


def apply_T(op: OperatorSpec, f: FuncC) -> FuncC:
    if op.kind != "T":
        raise ValueError("apply_T needs a T operator")
    _check_input(op, f)
    return FuncC(op.group, _apply_array(op, f.values))


def apply_S(op: OperatorSpec, f: FuncC) -> FuncC:
    if op.kind != "S":
        raise ValueError("apply_S needs an S operator")
    _check_input(op, f)
    return FuncC(op.group, _apply_array(op, f.values))


def apply(op: OperatorSpec, f: FuncC) -> FuncC:
    _check_input(op, f)
    return FuncC(op.group, _apply_array(op, f.values))


def _cap(g: GroupSpec, cap: int):
    if g.N > cap:
        raise ValueError(f"refusing to materialise a {g.N}x{g.N} operator (cap {cap})")


def full_matrix(op: OperatorSpec, cap: int = MATRIX_CAP) -> np.ndarray:
    """Dense matrix whose column ``x`` is the operator applied to ``delta_x``."""
    g = op.group
    _cap(g, cap)
    # rows of the identity are the deltas; transpose to put images in columns
    return _apply_array(op, np.eye(g.N, dtype=np.complex128)).T


# -- explicit factorizations ------------------------------------------------


@lru_cache(maxsize=32)
def _reflection(g: GroupSpec) -> np.ndarray:
    C = np.zeros((g.N, g.N))
    C[np.arange(g.N), g.neg_table] = 1.0
    C.setflags(write=False)
    return C


def _factors(g: GroupSpec):
    return _dense_kernel(g, -1), _reflection(g)


def _P(v) -> np.ndarray:
    return np.diag(np.asarray(v, dtype=np.complex128))


def chain_matrix(op: OperatorSpec, form: int, cap: int = MATRIX_CAP) -> np.ndarray:
    """One of the three equivalent factorizations, multiplied out densely.

    For ``T``: ``P_psi Phi P_{phi^c} Phi C``, ``C P_{psi^c} Phi P_phi Phi`` and
    ``P_psi Phi C P_phi Phi``.  ``S`` appends the factor ``P_{conj psi}``
    (moved through ``C`` in the first form).
    """
    g = op.group
    _cap(g, cap)
    F, C = _factors(g)
    phi = op.phi.values
    psi = op.psi.values
    phi_c = phi[g.neg_table]
    psi_c = psi[g.neg_table]
    if form == 1:
        M = _P(psi) @ F @ _P(phi_c) @ F
        tail = _P(np.conj(psi_c)) @ C if op.kind == "S" else C
        return M @ tail
    if form == 2:
        M = C @ _P(psi_c) @ F @ _P(phi) @ F
    elif form == 3:
        M = _P(psi) @ F @ C @ _P(phi) @ F
    else:
        raise ValueError(f"factorization form must be 1, 2 or 3, got {form}")
    if op.kind == "S":
        M = M @ _P(np.conj(psi))
    return M


def adjoint_chain(op: OperatorSpec, form: int, cap: int = MATRIX_CAP) -> np.ndarray:
    """Closed-form adjoints.

    ``T*``: ``C Phi P_{conj phi} Phi P_{conj psi}`` or
    ``Phi P_{conj phi^c} Phi P_{conj psi^c} C``.
    ``S*``: ``C P_{psi^c} Phi P_{conj phi} Phi P_{conj psi}`` or
    ``P_psi Phi P_{conj phi^c} Phi P_{conj psi^c} C``.
    """
    g = op.group
    _cap(g, cap)
    F, C = _factors(g)
    phi = op.phi.values
    psi = op.psi.values
    phi_c = phi[g.neg_table]
    psi_c = psi[g.neg_table]
    if op.kind == "T":
        if form == 1:
            return C @ F @ _P(np.conj(phi)) @ F @ _P(np.conj(psi))
        if form == 2:
            return F @ _P(np.conj(phi_c)) @ F @ _P(np.conj(psi_c)) @ C
    else:
        if form == 1:
            return C @ _P(psi_c) @ F @ _P(np.conj(phi)) @ F @ _P(np.conj(psi))
        if form == 2:
            return _P(psi) @ F @ _P(np.conj(phi_c)) @ F @ _P(np.conj(psi_c)) @ C
    raise ValueError(f"adjoint form must be 1 or 2, got {form}")


# -- restricted operators ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class RestrictedOperator:
    """``T_S^phi`` compressed to functions supported on ``S``.

    ``matrix[i, j] = phi^(s_i - s_j)`` over the ascending elements of ``S``.
    The action on coordinate vectors (image of ``delta_{s_j}`` in column
    ``j``) is the transpose, ``action = matrix.T``; both share one spectrum.
    """

    base: OperatorSpec
    support: SetMask
    matrix: np.ndarray

    @property
    def elements(self) -> np.ndarray:
        return self.support.elements()

    @property
    def action(self) -> np.ndarray:
        return self.matrix.T

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def apply(self, u) -> np.ndarray:
        """Apply to coordinates ``u`` (values of a function on ``S``)."""
        return self.action @ np.asarray(u, dtype=np.complex128)

    def lift(self, u) -> FuncC:
        v = np.zeros(self.base.group.N, dtype=np.complex128)
        v[self.elements] = u
        return FuncC(self.base.group, v)

    def spectrum(self) -> linalg.SpectrumSummary:
        return linalg.spectrum(self.matrix)


def restricted(phi: FuncC, S: SetMask) -> RestrictedOperator:
    g = phi.group
    if S.group != g:
        raise GroupMismatchError("phi and S live on different groups")
    if S.cardinality == 0:
        raise ValueError("restriction to an empty set")
    elems = S.elements()
    phihat = dft_array(g, phi.values)
    diffs = g.sub(elems[:, None], elems[None, :])
    M = phihat[diffs]
    return RestrictedOperator(T(phi, S.indicator()), S, M)


def is_positive_definite(M, tol: float = DEFINITE_TOL) -> bool:
    """Hermitian ``M`` with smallest eigenvalue above ``tol * max|m_ij|``."""
    M = np.asarray(M)
    scale = np.abs(M).max(initial=0.0)
    if scale == 0.0:
        return False
    w, _ = linalg.jacobi_eigh(M)
    return bool(w[-1] > tol * scale)


def is_singular(M, tol: float = DEFINITE_TOL) -> bool:
    """``|det M| < tol * scale^n`` or rank deficient at the default tolerance."""
    M = np.asarray(M)
    n = M.shape[0]
    scale = np.abs(M).max(initial=0.0)
    if scale == 0.0:
        return True
    return abs(linalg.det(M)) < tol * scale**n or linalg.rank(M) < n


# -- multiplier and dual restrictions ---------------------------------------


def multiplier(phi: FuncC, f: FuncC) -> FuncC:
    """``(M_phi f)(x) = phi(x) f^(x)``."""
    if phi.group != f.group:
        raise GroupMismatchError("phi and f live on different groups")
    return FuncC(f.group, phi.values * dft_array(f.group, f.values), "frequency")


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """A spanning family for ``L(S)`` or ``L*(S)``; ``dim`` is its numerical rank."""

    kind: str
    mask: SetMask
    basis: tuple[FuncC, ...]
    dim: int

    def as_matrix(self) -> np.ndarray:
        """Generators as columns."""
        return np.stack([f.values for f in self.basis], axis=1)


def support_basis(S: SetMask) -> SubspaceBasis:
    g = S.group
    basis = []
    for s in S.elements():
        v = np.zeros(g.N, dtype=np.complex128)
        v[s] = 1.0
        basis.append(FuncC(g, v))
    return SubspaceBasis("L(S)", S, tuple(basis), S.cardinality)


def dual_restricted_basis(
    psi: FuncC, S: SetMask, tol: float = linalg.RANK_TOL
) -> SubspaceBasis:
    """Generators ``psi(x) e(s . x)``, ``s in S``, of ``{psi a : supp a^ in S}``."""
    g = psi.group
    if S.group != g:
        raise GroupMismatchError("psi and S live on different groups")
    if S.cardinality == 0:
        raise ValueError("empty frequency set")
    xs = np.arange(g.N)
    basis = tuple(
        FuncC(g, psi.values * g.pairing(int(s), xs)) for s in S.elements()
    )
    cols = np.stack([f.values for f in basis], axis=1)
    return SubspaceBasis("L*(S)", S, basis, linalg.rank(cols, tol))
