"""Structural facts about prime-order groups and the operator families.

Nonsingular DFT minors, the support uncertainty principle, minimal-support
bases of spaces of functions with a common support, explicit eigenbases,
and a Monte-Carlo sparsification experiment in ``(Z/2Z)^n``.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import binomtest

from .. import linalg
from ..dissociation import SetMask
from ..fourier import FuncC, dft_array, idft_array
from ..group import GroupSpec, _is_prime
from ..operators import T, full_matrix, multiplier, restricted
from .inequalities import IdentityViolation
from .reports import CheckResult

__all__ = [
    "DET_THRESHOLD",
    "SUPPORT_TOL",
    "SparsifyReport",
    "chebotarev_scan",
    "constructive_eigenbasis",
    "min_support_basis",
    "numeric_support",
    "sparsify_cover",
    "uncertainty_check",
]

DET_THRESHOLD = 1e-6
SUPPORT_TOL = 1e-9
EXHAUSTIVE_MINOR = 4
CHEBOTAREV_MAX_P = 13
RESIDUAL_TOL = 1e-7


def numeric_support(values, tol: float = SUPPORT_TOL) -> np.ndarray:
    v = np.abs(np.asarray(values))
    top = v.max(initial=0.0)
    if top == 0.0:
        return np.zeros(v.shape, dtype=bool)
    return v > tol * top


def _prime_group(p: int) -> GroupSpec:
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    return GroupSpec.cyclic(p)


# -- nonsingular minors -----------------------------------------------------


def _minor_dets(F: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Determinants of ``F[rows[i]][:, cols[i]]`` for each ``i``."""
    sub = F[rows[:, :, None], cols[:, None, :]]
    return np.abs(np.linalg.det(sub))


def chebotarev_scan(
    p: int,
    max_size: int | None = None,
    *,
    samples: int = 10_000,
    exhaustive_up_to: int | None = None,
    seed: int = 0,
    threshold: float = DET_THRESHOLD,
) -> CheckResult:
    """Every square minor of the ``p x p`` character matrix is nonsingular.

    Minors of size up to ``exhaustive_up_to`` are enumerated (default: all
    sizes for ``p <= 7``, size 4 otherwise); ``samples`` random minors of the
    larger sizes are drawn on top.  Passes when every ``|det| > threshold``.
    """
    g = _prime_group(p)
    if p > CHEBOTAREV_MAX_P:
        raise ValueError(f"p = {p} exceeds the floating-point scan limit {CHEBOTAREV_MAX_P}")
    max_size = p if max_size is None else int(max_size)
    if not 1 <= max_size <= p:
        raise ValueError(f"max_size must lie in [1, {p}], got {max_size}")
    if exhaustive_up_to is None:
        exhaustive_up_to = p if p <= 7 else EXHAUSTIVE_MINOR
    exhaustive_up_to = min(exhaustive_up_to, max_size)
    F = g.character_matrix(-1)
    count = 0
    worst = math.inf
    for k in range(1, exhaustive_up_to + 1):
        combos = np.array(list(itertools.combinations(range(p), k)), dtype=np.int64)
        ri, ci = np.meshgrid(np.arange(len(combos)), np.arange(len(combos)), indexing="ij")
        d = _minor_dets(F, combos[ri.ravel()], combos[ci.ravel()])
        count += d.size
        worst = min(worst, float(d.min()))
    sampled = 0
    if exhaustive_up_to < max_size and samples > 0:
        rng = np.random.default_rng(seed)
        sizes = rng.integers(exhaustive_up_to + 1, max_size + 1, size=samples)
        for k in np.unique(sizes):
            m = int(np.count_nonzero(sizes == k))
            rows = np.sort(rng.random((m, p)).argsort(axis=1)[:, :k], axis=1)
            cols = np.sort(rng.random((m, p)).argsort(axis=1)[:, :k], axis=1)
            d = _minor_dets(F, rows, cols)
            sampled += m
            worst = min(worst, float(d.min()))
    passed = worst > threshold
    return CheckResult(
        f"chebotarev p={p}",
        passed,
        f"{count} exhaustive + {sampled} sampled minors, min |det| = {worst:.3e}",
        {"p": p, "exhaustive": count, "sampled": sampled, "min_abs_det": worst},
    )


# -- uncertainty ------------------------------------------------------------


def uncertainty_check(p: int, f: FuncC, tol: float = SUPPORT_TOL) -> CheckResult:
    """``|supp f| + |supp f^| >= p + 1`` for a nonzero function on ``Z_p``."""
    g = _prime_group(p)
    if f.group != g:
        raise ValueError(f"function lives on {f.group}, not Z_{p}")
    if not np.any(f.values):
        raise ValueError("uncertainty check needs a nonzero function")
    a = int(numeric_support(f.values, tol).sum())
    b = int(numeric_support(dft_array(g, f.values), tol).sum())
    return CheckResult(
        f"uncertainty p={p}",
        a + b >= p + 1,
        f"|supp f| + |supp f^| = {a} + {b} vs {p + 1}",
        {"supp": a, "supp_hat": b},
    )


# -- minimal supports -------------------------------------------------------


def _rref(A: np.ndarray, tol: float) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with partial pivoting; returns nonzero rows."""
    A = np.array(A, dtype=np.complex128)
    rows, cols = A.shape
    scale = np.abs(A).max(initial=0.0)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        i = r + int(np.argmax(np.abs(A[r:, c])))
        if abs(A[i, c]) <= tol * scale:
            continue
        A[[r, i]] = A[[i, r]]
        A[r] /= A[r, c]
        for j in range(rows):
            if j != r:
                A[j] -= A[j, c] * A[r]
                A[j, c] = 0.0
        pivots.append(c)
        r += 1
    return A[:r], pivots


def min_support_basis(S: SetMask, family, tol: float = SUPPORT_TOL) -> list[FuncC]:
    """A basis of ``span(family)`` whose members have few nonzero values.

    Row-reducing the family on the coordinates of ``S`` gives ``l`` functions
    with ``|supp g| <= |S| - l + 1``.  On ``Z_p`` the uncertainty principle
    then forces ``|supp g^| >= p - |S| + l``, which is asserted.
    """
    g = S.group
    p = g.N
    if g.rank != 1 or not _is_prime(p):
        raise ValueError(f"minimal-support bases need Z_p with p prime, got {g}")
    family = list(family)
    if not family:
        raise ValueError("empty family")
    elems = S.elements()
    for f in family:
        if f.group != g:
            raise ValueError("family member on a different group")
        if np.any(numeric_support(f.values, tol) & ~S.members):
            raise ValueError("family member not supported on S")
    A = np.stack([f.values[elems] for f in family])
    R, _ = _rref(A, tol)
    l = R.shape[0]
    if l == 0:
        raise ValueError("family has rank zero")
    out = []
    for row in R:
        v = np.zeros(p, dtype=np.complex128)
        v[elems] = row
        h = FuncC(g, v)
        n_supp = int(numeric_support(v, tol).sum())
        n_hat = int(numeric_support(dft_array(g, v), tol).sum())
        if n_supp > S.cardinality - l + 1:
            raise IdentityViolation(f"echelon row has support {n_supp} > |S| - l + 1")
        if n_hat < p - S.cardinality + l:
            raise IdentityViolation(f"transform support {n_hat} < p - |S| + l")
        out.append(h)
    return out


# -- explicit eigenbases ----------------------------------------------------


def _residual(op_matrix, f: np.ndarray, mu: float, opnorm: float) -> float:
    nf = np.linalg.norm(f)
    return float(np.linalg.norm(op_matrix @ f - mu * f) / (opnorm * nf))


def constructive_eigenbasis(
    case: str,
    S: SetMask,
    weight: FuncC,
    tol: float = RESIDUAL_TOL,
) -> CheckResult:
    """Build an explicit eigenbasis and check it.

    ``case="set-multiplier"``: the operator with space weight ``psi = weight``
    (nonnegative, at least ``|S|`` nonzero values) and frequency multiplier
    ``S``.  Characters ``e(s x)``, ``s`` outside ``S``, span the kernel; the
    rest are ``M_psi f`` with ``f`` eigenvectors of the compression to
    ``-S`` of the operator with frequency multiplier ``psi``.

    ``case="set-support"``: space weight ``S`` and a positive frequency
    multiplier ``phi = weight``.  Kernel vectors solve ``M_phi f = e(-s .)``
    for ``s`` outside ``S``; the rest are eigenvectors of the compression to
    ``S``, lifted.

    Passes when every eigen-residual is below ``tol`` (relative to the
    operator norm) and the family has rank ``N``.
    """
    g = S.group
    N = g.N
    if g.rank != 1 or not _is_prime(N):
        raise ValueError(f"explicit eigenbases are built over Z_p, got {g}")
    if weight.group != g:
        raise ValueError("weight and S live on different groups")
    if not weight.is_real():
        raise ValueError("weight must be real")
    w = weight.values.real
    xs = np.arange(N)
    family: list[tuple[np.ndarray, float]] = []
    if case == "set-multiplier":
        if np.any(w < 0) or np.count_nonzero(w) < S.cardinality:
            raise ValueError("need psi >= 0 with at least |S| nonzero values")
        op = T(S.indicator(), weight)
        for s in S.complement().elements():
            family.append((g.pairing(int(s), xs), 0.0))
        negS = SetMask(g, S.members[g.neg_table])
        R = restricted(weight, negS)
        spec = linalg.eigh(R.action)
        for mu, vec in zip(spec.eigenvalues, spec.eigenvectors.T):
            F = multiplier(weight, R.lift(vec)).values
            family.append((F, float(mu)))
    elif case == "set-support":
        if np.any(w <= 0):
            raise ValueError("need phi > 0 everywhere")
        op = T(weight, S.indicator())
        for s in S.complement().elements():
            target = np.conj(g.pairing(int(s), xs))
            family.append((idft_array(g, target / w), 0.0))
        R = restricted(weight, S)
        spec = linalg.eigh(R.action)
        for mu, vec in zip(spec.eigenvalues, spec.eigenvectors.T):
            family.append((R.lift(vec).values, float(mu)))
    else:
        raise ValueError(f"unknown case {case!r}")
    M = full_matrix(op)
    opnorm = max(float(np.linalg.norm(M, 2)), 1e-300)
    residuals = [_residual(M, f, mu, opnorm) for f, mu in family]
    r = linalg.rank(np.stack([f for f, _ in family], axis=1))
    worst = max(residuals)
    return CheckResult(
        f"eigenbasis {case} Z_{N} S={S.describe()}",
        worst < tol and r == N,
        f"rank {r}/{N}, max residual {worst:.2e}",
        {"rank": r, "max_residual": worst, "eigenvalues": [mu for _, mu in family]},
    )


# -- sparsification ---------------------------------------------------------


@dataclass
class SparsifyReport:
    keep_probability: float
    trials: int
    successes: int
    frequency: float
    ci_low: float
    ci_high: float
    mean_size_ratio: float

    def __str__(self):
        return (
            f"keep p={self.keep_probability:.4f}: L in S'+S' in {self.successes}/{self.trials}"
            f" trials (freq {self.frequency:.3f}, 95% CI [{self.ci_low:.3f}, {self.ci_high:.3f}]),"
            f" mean |S'|/(p|S|) = {self.mean_size_ratio:.3f}"
        )


def sparsify_cover(
    S: SetMask,
    L: SetMask,
    r: float,
    c: float,
    trials: int,
    seed: int = 0,
) -> SparsifyReport:
    """How often a random subset ``S'`` of ``S`` still has ``L`` in ``S' + S'``.

    Each element is kept with probability ``c r^(-1/2) log^(1/2)|S|``
    (clamped to ``[0, 1]``).  Report only.
    """
    g = S.group
    if g.prime_power_base() != 2:
        raise ValueError(f"sparsification runs in (Z/2Z)^n, got {g}")
    if S.cardinality == 0:
        raise ValueError("S must be non-empty")
    if trials < 1:
        raise ValueError("need at least one trial")
    Shat = dft_array(g, S.members.astype(np.complex128))
    counts = np.rint(idft_array(g, Shat * Shat).real)
    if np.any(counts[L.members] < r):
        raise ValueError(f"S * S falls below r = {r} somewhere on L")
    logS = math.log2(S.cardinality)
    if r < logS:
        warnings.warn(f"r = {r} is below log|S| = {logS:.3f}", stacklevel=2)
    prob = min(1.0, max(0.0, c * math.sqrt(logS / r))) if r > 0 else 1.0
    rng = np.random.default_rng(seed)
    elems = S.elements()
    wins = 0
    sizes = 0
    for _ in range(trials):
        kept = elems[rng.random(elems.size) < prob]
        sizes += kept.size
        m = np.zeros(g.N)
        m[kept] = 1.0
        mh = dft_array(g, m)
        sums = idft_array(g, mh * mh).real > 0.5
        wins += bool(np.all(sums[L.members]))
    ci = binomtest(wins, trials).proportion_ci(confidence_level=0.95, method="wilson")
    denom = prob * S.cardinality
    return SparsifyReport(
        keep_probability=prob,
        trials=trials,
        successes=wins,
        frequency=wins / trials,
        ci_low=float(ci.low),
        ci_high=float(ci.high),
        mean_size_ratio=sizes / trials / denom if denom else float("nan"),
    )
