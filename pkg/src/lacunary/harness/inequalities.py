"""Evaluators for the lacunary-set inequalities.

Each evaluator returns :class:`InequalityReport` records holding the left
side, the right side with its unspecified absolute constant stripped
(``rhs_core``), and their ratio.  A ratio is checked against a budget, never
against a claimed constant.  Identities that hold exactly (two routes to the
same number) are asserted and raise :class:`IdentityViolation`.

Logarithms are base two throughout.
"""

from __future__ import annotations

import math

import numpy as np

from .. import linalg
from ..dissociation import SetMask, greedy_dissociated, is_dissociated
from ..fourier import FuncC, convolve_direct, dft_array, idft_array, inner
from ..operators import T, apply_T, restricted
from .reports import DEFAULT_BUDGET, EigStats, InequalityReport, make_report

__all__ = [
    "IdentityViolation",
    "NotDissociatedError",
    "bilinear_bound",
    "chang_bound",
    "dual_convolution_bound",
    "eigen_statistics",
    "higher_moment_chang",
    "higher_moment_witness",
    "moment_by_expansion",
    "popular_sums_bound",
    "rudin_constant",
    "rudin_moment",
    "top_eigenvalue_bound",
]

IDENTITY_RTOL = 1e-8


class IdentityViolation(AssertionError):
    """Two routes to a quantity that must agree did not."""


class NotDissociatedError(ValueError):
    pass


def _require_dissociated(L: SetMask):
    w = is_dissociated(L)
    if not w.dissociated:
        raise NotDissociatedError(f"{L.describe()} is not dissociated (witness {w})")


def _agree(name: str, a: float, b: float, rtol: float, floor: float = 1.0):
    scale = max(abs(a), abs(b), floor)
    if abs(a - b) > rtol * scale:
        raise IdentityViolation(f"{name}: {a!r} vs {b!r} (rtol {rtol})")


def _log2_inv_density(S: SetMask) -> float:
    return math.log2(S.group.N / S.cardinality)


def _hat(S: SetMask) -> np.ndarray:
    return dft_array(S.group, S.members.astype(np.complex128))


def _tag(*parts) -> str:
    return " ".join(str(p) for p in parts if p != "")


# -- Rudin moments ----------------------------------------------------------


def moment_by_expansion(a: FuncC, p: int) -> float:
    """``(1/N) sum_x |sum_xi a(xi) e(xi.x)|^p`` for even ``p`` by counting.

    Expanding the ``p/2``-th power gives ``sum_z |(a * ... * a)(z)|^2`` with
    ``p/2`` copies of ``a``; the convolutions are direct double sums.
    """
    if p % 2 or p < 2:
        raise ValueError(f"expansion route needs an even p >= 2, got {p}")
    c = a
    for _ in range(p // 2 - 1):
        c = convolve_direct(c, a)
    return float(np.sum(np.abs(c.values) ** 2))


def rudin_moment(
    L: SetMask,
    a: FuncC,
    p: int,
    *,
    budget: float = DEFAULT_BUDGET,
    seed: int | None = None,
    crosscheck: bool = True,
) -> InequalityReport:
    _require_dissociated(L)
    g = L.group
    if a.group != g:
        raise ValueError("coefficients and frequency set live on different groups")
    if np.any(np.abs(a.values[~L.members]) > 0):
        raise ValueError("coefficients must be supported on the frequency set")
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    series = g.N * idft_array(g, a.values)
    lhs = float(np.mean(np.abs(series) ** p))
    if crosscheck and p % 2 == 0:
        _agree("moment expansion", lhs, moment_by_expansion(a, p), IDENTITY_RTOL, 1e-300)
    energy = float(np.sum(np.abs(a.values) ** 2))
    rhs = p ** (p / 2) * energy ** (p / 2)
    return make_report(
        "rudin",
        _tag(f"G={g}", f"L={L.describe()}", f"p={p}"),
        lhs,
        rhs,
        variant=f"p={p}",
        budget=budget,
        seed=seed,
    )


def rudin_constant(report: InequalityReport) -> float:
    """``ratio^(1/p)``: the constant ``C`` the instance forces in ``(C sqrt p)^p``."""
    p = int(report.variant.split("=")[1])
    return report.ratio ** (1.0 / p)


# -- Chang-type bounds ------------------------------------------------------


def chang_bound(
    L: SetMask,
    S: SetMask,
    f: FuncC | None = None,
    *,
    budget: float = DEFAULT_BUDGET,
    seed: int | None = None,
) -> InequalityReport:
    """``sum_{xi in L} |f^(xi)|^2`` against ``|S| ||f||^2 log(1/delta)``."""
    _require_dissociated(L)
    if S.cardinality == 0:
        raise ValueError("S must be non-empty")
    g = S.group
    if f is None:
        f = S.indicator()
        label = "f=S"
    else:
        if np.any(np.abs(f.values[~S.members]) > 0):
            raise ValueError("f must be supported on S")
        label = "f=custom"
    fhat = dft_array(g, f.values)
    lhs = float(np.sum(np.abs(fhat[L.members]) ** 2))
    norm_sq = float(np.sum(np.abs(f.values) ** 2))
    if lhs > g.N * norm_sq * (1 + 1e-9):
        raise IdentityViolation("spectral energy exceeds the Parseval ceiling")
    inst = _tag(f"G={g}", f"L={L.describe()}", f"|S|={S.cardinality}", label)
    if S.cardinality == g.N:
        if label == "f=S" and lhs > 1e-9:
            raise IdentityViolation("full set has spectral mass on a nonzero frequency")
        return make_report("chang", inst, lhs, 0.0, budget=budget, seed=seed, degenerate=True)
    rhs = S.cardinality * norm_sq * _log2_inv_density(S)
    return make_report("chang", inst, lhs, rhs, budget=budget, seed=seed)


def top_eigenvalue_bound(
    L: SetMask,
    phi: FuncC,
    *,
    budget: float = DEFAULT_BUDGET,
    seed: int | None = None,
) -> list[InequalityReport]:
    """Top eigenvalue of the restriction to ``L`` with multiplier ``phi``.

    Variants: ``l1`` always; ``peak`` when ``|phi(0)| = ||phi||_inf`` and
    ``|phi(0)| >= ||phi_0||_1``; ``off-peak`` when ``|phi(0)| <= ||phi_0||_1``
    and ``peak`` does not apply.  ``phi_0`` is ``phi`` with the value at 0
    removed.
    """
    _require_dissociated(L)
    if not phi.is_real():
        raise ValueError("phi must be real")
    vals = phi.values.real
    if not np.any(vals):
        raise ValueError("phi must not vanish identically")
    if L.cardinality == 0:
        raise ValueError("L must be non-empty")
    g = phi.group
    N = g.N
    mu1 = abs(linalg.eigh(restricted(phi, L).matrix).top)
    l1 = float(np.abs(vals).sum())
    sup = float(np.abs(vals).max())
    at0 = abs(float(vals[0]))
    off1 = l1 - at0
    inst = _tag(f"G={g}", f"L={L.describe()}", f"|supp phi|={np.count_nonzero(vals)}")
    out = [
        make_report(
            "top-eigenvalue", inst, mu1, l1 * (math.log2(N * sup / l1) + 1),
            variant="l1", budget=budget, seed=seed,
        )
    ]
    peak = math.isclose(at0, sup, rel_tol=1e-12) and at0 >= off1
    if peak:
        out.append(
            make_report(
                "top-eigenvalue", inst, mu1, at0 * math.log2(N),
                variant="peak", budget=budget, seed=seed,
            )
        )
    elif at0 <= off1:
        out.append(
            make_report(
                "top-eigenvalue", inst, mu1, off1 * (math.log2(N * sup / off1) + 1),
                variant="off-peak", budget=budget, seed=seed,
            )
        )
    return out


def higher_moment_witness(L: SetMask, S: SetMask, l: int) -> float:
    """``<T u, v>`` for the test functions that realise ``sum_L |S^|^(l+1)``.

    ``T`` multiplies by ``S`` in space and by ``L`` in frequency, ``v = S``
    and, with ``f = S - delta`` and ``F^ = |S^|``:

    * ``l = 2``: ``u = F * f``
    * ``l = 2k``: ``u = F * f^{*k} * (f^c)^{*(k-1)}``
    * ``l = 2k + 1``: ``u = f^{*(k+1)} * (f^c)^{*k}``
    """
    g = S.group
    Shat = _hat(S)
    fhat = Shat.copy()
    fhat[0] = 0.0
    f_c_hat = np.conj(fhat)  # S is real, so the reflection conjugates the transform
    if l < 2:
        raise ValueError(f"l must be >= 2, got {l}")
    if l % 2 == 0:
        k = l // 2
        uhat = np.abs(Shat) * fhat**k * f_c_hat ** (k - 1)
    else:
        k = (l - 1) // 2
        uhat = fhat ** (k + 1) * f_c_hat**k
    u = FuncC(g, idft_array(g, uhat))
    op = T(L.indicator(), S.indicator())
    return inner(apply_T(op, u), S.indicator()).real


def higher_moment_chang(
    L: SetMask,
    S: SetMask,
    l: int,
    *,
    budget: float = DEFAULT_BUDGET,
    seed: int | None = None,
    crosscheck: bool = True,
) -> InequalityReport:
    """``sum_L |S^|^(l+1)`` against ``|S| (sum_{xi != 0} |S^|^(2l))^(1/2) log^(1/2)(1/delta)``."""
    _require_dissociated(L)
    if l < 2:
        raise ValueError(f"l must be >= 2, got {l}")
    g = S.group
    mags = np.abs(_hat(S))
    lhs = float(np.sum(mags[L.members] ** (l + 1)))
    if crosscheck:
        _agree("operator witness", lhs, higher_moment_witness(L, S, l), IDENTITY_RTOL)
    inst = _tag(f"G={g}", f"L={L.describe()}", f"|S|={S.cardinality}", f"l={l}")
    if S.cardinality == g.N:
        return make_report("higher-moment", inst, lhs, 0.0, variant=f"l={l}",
                           budget=budget, seed=seed, degenerate=True)
    tail = float(np.sum(mags[1:] ** (2 * l)))
    rhs = S.cardinality * math.sqrt(tail) * math.sqrt(_log2_inv_density(S))
    return make_report("higher-moment", inst, lhs, rhs, variant=f"l={l}",
                       budget=budget, seed=seed)


def dual_convolution_bound(
    L: SetMask,
    sets: list[SetMask],
    *,
    budget: float = DEFAULT_BUDGET,
    seed: int | None = None,
) -> list[InequalityReport]:
    """``sum_{x in L} (S_1 * ... * S_l)(x)^2`` against its five right sides.

    With ``Q = prod_{j<l} |S_j^|^2``:

    * ``general``: ``|S_l|/N * sum_x Q * log N``
    * ``peak`` (``Q(0) >= sum_{x!=0} Q``): ``|S_l|/N * Q(0) * log N``
    * ``tail`` (``Q(0) <= sum_{x!=0} Q``): ``|S_l|/N * sum_{x!=0} Q * log N``
    * ``iterated`` (``S_1 = ... = S_{l-1} = S``, ``2 <= |S| <= N/2``,
      ``Q(0) <= sum_{x!=0} Q``): ``l |S_l|/N * sum_{x!=0} Q * log |S|``
    * ``pair`` (``l = 2``): ``|S_1| |S_2| log min(|S_1|, |S_2|)``

    Variants whose precondition fails are omitted.
    """
    _require_dissociated(L)
    l = len(sets)
    if l < 2:
        raise ValueError(f"need at least two sets, got {l}")
    if any(s.cardinality == 0 for s in sets):
        raise ValueError("all sets must be non-empty")
    g = L.group
    N = g.N
    hats = [_hat(s) for s in sets]
    conv = idft_array(g, np.prod(hats, axis=0)).real
    lhs = float(np.sum(conv[L.members] ** 2))
    Q = np.prod([np.abs(h) ** 2 for h in hats[:-1]], axis=0)
    peak = float(Q[0])
    off = float(Q[1:].sum())
    last = sets[-1].cardinality
    sizes = ",".join(str(s.cardinality) for s in sets)
    inst = _tag(f"G={g}", f"L={L.describe()}", f"sizes={sizes}", f"l={l}")
    logN = math.log2(N)

    def rep(variant, rhs, degenerate=False):
        return make_report("dual-convolution", inst, lhs, rhs, variant=variant,
                           budget=budget, seed=seed, degenerate=degenerate)

    out = [rep("general", last / N * (peak + off) * logN)]
    if peak >= off:
        out.append(rep("peak", last / N * peak * logN))
    if peak <= off:
        out.append(rep("tail", last / N * off * logN))
    first = sets[0]
    if (
        all(s == first for s in sets[:-1])
        and 2 <= first.cardinality <= N / 2
        and peak <= off
    ):
        out.append(rep("iterated", l * last / N * off * math.log2(first.cardinality)))
    if l == 2:
        m = min(sets[0].cardinality, sets[1].cardinality)
        out.append(rep("pair", sets[0].cardinality * sets[1].cardinality * math.log2(m)))
    return out


def popular_sums_bound(
    S1: SetMask,
    S2: SetMask,
    r: int,
    *,
    budget: float = DEFAULT_BUDGET,
    seed: int | None = None,
    order: str = "ascending",
) -> tuple[InequalityReport, SetMask]:
    """Size of a maximal dissociated set among the ``r``-popular sums.

    Builds ``{x : (S1 * S2)(x) >= r}``, extracts a greedy maximal dissociated
    subset and compares its size with ``r^-2 |S1| |S2| log min(|S1|, |S2|)``.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    g = S1.group
    counts = np.rint(idft_array(g, _hat(S1) * _hat(S2)).real)
    level = SetMask(g, counts >= r)
    lam = greedy_dissociated(level, order=order, seed=seed or 0)
    m = min(S1.cardinality, S2.cardinality)
    rhs = S1.cardinality * S2.cardinality * math.log2(m) / r**2 if m else 0.0
    inst = _tag(f"G={g}", f"|S1|={S1.cardinality}", f"|S2|={S2.cardinality}",
                f"r={r}", f"level={level.cardinality}", f"L={lam.describe()}")
    return make_report("popular-sums", inst, lam.cardinality, rhs,
                       budget=budget, seed=seed), lam


def bilinear_bound(
    L: SetMask,
    S: SetMask,
    *,
    budget: float = DEFAULT_BUDGET,
    seed: int | None = None,
    crosscheck: bool = True,
) -> InequalityReport:
    """``|sum_{z in L} conj S^(z) (S^ * S^ L)(z)|`` against ``|S|^3 log^2(1/delta)``.

    The second route is ``<M^2 1_S, 1_S>`` for the restriction ``M`` of the
    frequency-``L`` operator to functions on ``S``.
    """
    _require_dissociated(L)
    if S.cardinality == 0:
        raise ValueError("S must be non-empty")
    g = S.group
    Shat = _hat(S)
    masked = FuncC(g, Shat * L.members)
    inner_conv = convolve_direct(FuncC(g, Shat), masked).values
    total = np.sum(np.conj(Shat[L.members]) * inner_conv[L.members])
    lhs = float(abs(total))
    if crosscheck:
        M = restricted(L.indicator(), S).action
        ones = np.ones(S.cardinality)
        quad = complex(np.vdot(ones, M @ (M @ ones)))
        _agree("bilinear routes", lhs, abs(quad), IDENTITY_RTOL)
    inst = _tag(f"G={g}", f"L={L.describe()}", f"|S|={S.cardinality}")
    if S.cardinality == g.N:
        return make_report("bilinear", inst, lhs, 0.0, budget=budget, seed=seed, degenerate=True)
    rhs = S.cardinality**3 * _log2_inv_density(S) ** 2
    return make_report("bilinear", inst, lhs, rhs, budget=budget, seed=seed)


def eigen_statistics(
    L: SetMask, S: SetMask, tau: float = 1.0, rtol: float = 1e-7
) -> EigStats:
    """Eigenvalues of the ``|L| x |L|`` matrix ``[S^(l_i - l_j)]`` and their moments.

    Asserts ``sum mu = |L| |S|`` and
    ``sum mu^2 = |S|^2 |L| + sum_{i != j} |S^(l_i - l_j)|^2``; the centred
    second moment and the count of eigenvalues above
    ``tau |S| log(1/delta)`` are only reported.
    """
    _require_dissociated(L)
    if L.cardinality == 0 or S.cardinality == 0:
        raise ValueError("L and S must be non-empty")
    g = S.group
    mu = linalg.eigh(restricted(S.indicator(), L).matrix).eigenvalues
    total = float(mu.sum())
    total_sq = float(np.sum(mu**2))
    Shat = _hat(S)
    elems = L.elements()
    diffs = g.sub(elems[:, None], elems[None, :])
    off_diag = ~np.eye(len(elems), dtype=bool)
    closed_sq = S.cardinality**2 * len(elems) + float(np.sum(np.abs(Shat[diffs[off_diag]]) ** 2))
    _agree("eigenvalue sum", total, float(len(elems) * S.cardinality), rtol)
    _agree("eigenvalue square sum", total_sq, closed_sq, rtol)
    threshold = tau * S.cardinality * _log2_inv_density(S)
    return EigStats(
        eigenvalues=mu,
        sum=total,
        sum_sq=total_sq,
        centered_sum_sq=float(np.sum((mu - S.cardinality) ** 2)),
        count_large=int(np.count_nonzero(mu >= threshold)),
        threshold=threshold,
        instance=_tag(f"G={g}", f"L={L.describe()}", f"|S|={S.cardinality}"),
    )
