"""Named verification suites: batches of identity and structure checks.

Each suite returns a list of :class:`CheckResult`; the inequality suite
also returns the sweep reports it produced.  Random inputs come from
``default_rng(seed)`` so every suite is reproducible.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable

import numpy as np

from .. import linalg
from ..dissociation import SetMask
from ..fourier import (
    FuncC,
    conjugate,
    convolve,
    convolve_direct,
    dft,
    dft_array,
    idft,
    inner,
    reflect,
)
from ..group import GroupSpec, _is_prime, parse_group
from ..operators import (
    S,
    T,
    adjoint_chain,
    apply,
    chain_matrix,
    dual_restricted_basis,
    full_matrix,
    is_positive_definite,
    is_singular,
    restricted,
)
from . import inequalities as ineq
from .reports import DEFAULT_BUDGET, CheckResult, InequalityReport
from .structure import (
    chebotarev_scan,
    constructive_eigenbasis,
    min_support_basis,
    uncertainty_check,
)
from .sweeps import INEQUALITIES, random_dissociated, sort_reports, standard_sweep

__all__ = [
    "SUITES",
    "brute_force_T",
    "chebotarev_suite",
    "definiteness_scan",
    "dual_dimension_scan",
    "eigen_statistics_suite",
    "eigenbasis_checks",
    "identity_suite",
    "inequality_suite",
    "nested_sets_check",
    "operator_checks",
    "prime_structure_checks",
    "random_sparse",
    "rel_err",
    "restricted_checks",
    "shared_space_check",
    "spectra_suite",
    "structured_functions",
    "uncertainty_suite",
]

IDENTITY_TOL = 1e-9
SPECTRUM_TOL = 1e-8


def rel_err(a, b) -> float:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    scale = max(np.linalg.norm(a), np.linalg.norm(b))
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(a - b) / scale)


def _summary(name: str, errors, tol: float) -> CheckResult:
    worst = max(errors) if errors else 0.0
    return CheckResult(name, worst < tol, f"max rel err {worst:.1e} over {len(errors)} cases",
                       {"max_error": worst, "cases": len(errors)})


def _rand(g: GroupSpec, rng, real: bool = False) -> FuncC:
    v = rng.standard_normal(g.N)
    if not real:
        v = v + 1j * rng.standard_normal(g.N)
    return FuncC(g, v)


# -- Fourier identities -----------------------------------------------------


def identity_suite(g: GroupSpec, n: int = 50, seed: int = 0, tol: float = IDENTITY_TOL) -> list[CheckResult]:
    """Transform, convolution and reflection identities on ``n`` random triples."""
    rng = np.random.default_rng(seed)
    N = g.N
    errs: dict[str, list[float]] = {}

    def rec(key, a, b):
        errs.setdefault(key, []).append(rel_err(a, b))

    for _ in range(n):
        f, h, k = _rand(g, rng), _rand(g, rng), _rand(g, rng)
        rho = _rand(g, rng)
        fh, hh = dft(f), dft(h)
        rec("parseval", np.sum(np.abs(f.values) ** 2), np.sum(np.abs(fh.values) ** 2) / N)
        rec("plancherel", inner(f, h), inner(fh, hh) / N)
        conv = convolve(f, h)
        rec("convolution energy",
            np.sum(np.abs(conv.values) ** 2),
            np.sum(np.abs(fh.values) ** 2 * np.abs(hh.values) ** 2) / N)
        rec("convolution theorem", dft(convolve_direct(f, h)).values, fh.values * hh.values)
        rec("spectral vs direct convolution", conv.values, convolve_direct(f, h).values)
        rec("inversion", idft(fh).values, f.values)
        rec("double transform = N C", dft(fh).values, N * reflect(f).values)
        rec("C Phi = Phi C", reflect(fh).values, dft(reflect(f)).values)
        rec("C P_rho = P_rho^c C", reflect(rho * f).values, (reflect(rho) * reflect(f)).values)
        rec("conj C = C conj", conjugate(reflect(f)).values, reflect(conjugate(f)).values)
        rec("conj Phi = Phi C conj", conjugate(fh).values, dft(reflect(conjugate(f))).values)
        rec("C(a*b) = Ca * Cb", reflect(convolve(f, h)).values, convolve(reflect(f), reflect(h)).values)
        rec("<a, conj(b)*c> = <b, conj(a)*Cc>",
            inner(f, convolve(conjugate(h), k)),
            inner(h, convolve(conjugate(f), reflect(k))))
        for method in ("walsh", "fft"):
            if method == "walsh" and any(o != 2 for o in g.orders):
                continue
            rec(f"{method} path = dense", dft_array(g, f.values, method), dft_array(g, f.values, "dense"))
    return [_summary(f"{key} [G={g}]", v, tol) for key, v in errs.items()]


# -- operator algebra -------------------------------------------------------


def brute_force_T(phi: FuncC, psi: FuncC, f: FuncC) -> np.ndarray:
    """``psi(x) sum_{xi, y} phi(-xi) f(y) e(xi (y - x))`` by explicit loops."""
    g = phi.group
    out = np.zeros(g.N, dtype=np.complex128)
    for x in range(g.N):
        total = 0j
        for xi in range(g.N):
            w = phi.values[g.neg(xi)]
            if w == 0:
                continue
            for y in range(g.N):
                total += w * f.values[y] * g.pairing(xi, g.sub(y, x))
        out[x] = psi.values[x] * total
    return out


def operator_checks(g: GroupSpec, n: int = 50, seed: int = 0) -> list[CheckResult]:
    """Factorizations, adjoints and the spectral relations between operator families."""
    rng = np.random.default_rng(seed)
    N = g.N
    errs: dict[str, list[float]] = {}
    spec_fail: dict[str, int] = {}
    witness = False

    def rec(key, a, b):
        errs.setdefault(key, []).append(rel_err(a, b))

    def same(key, A, B):
        spec_fail.setdefault(key, 0)
        if not linalg.spectra_equal(A, B, SPECTRUM_TOL):
            spec_fail[key] += 1

    def fm(kind, phi, psi):
        return full_matrix(T(phi, psi) if kind == "T" else S(phi, psi))

    for _ in range(n):
        phi, psi = _rand(g, rng), _rand(g, rng)
        for kind in ("T", "S"):
            op = T(phi, psi) if kind == "T" else S(phi, psi)
            M = full_matrix(op)
            for form in (1, 2, 3):
                rec(f"{kind} factorization {form}", chain_matrix(op, form), M)
            for form in (1, 2):
                rec(f"{kind} adjoint {form}", adjoint_chain(op, form), M.conj().T)
        Tm = fm("T", phi, psi)
        phi_c = FuncC(g, phi.values[g.neg_table])
        psi_c = FuncC(g, psi.values[g.neg_table])
        same("T spectrum under reflecting both weights", Tm, fm("T", phi_c, psi_c))
        same("T spectrum under reflecting the multiplier", Tm, fm("T", phi_c, psi))
        phi2 = FuncC(g, np.abs(phi.values) ** 2)
        psi2 = FuncC(g, np.abs(psi.values) ** 2)
        TT = Tm @ Tm.conj().T
        rec("T T* = N S with |phi|^2", TT, N * fm("S", phi2, psi))
        same("T T* / N ~ T with |psi|^2, |phi|^2", TT / N, fm("T", phi2, psi2))
        Sm = fm("S", phi, psi)
        same("S ~ T with |psi|^2", Sm, fm("T", phi, psi2))
        same("S with |phi|^2 ~ S swapped with |psi|^2",
             fm("S", phi2, psi), fm("S", psi2, phi_c))
        if not linalg.spectra_equal(Sm, fm("S", psi, phi), SPECTRUM_TOL):
            witness = True
        # real multiplier makes S Hermitian
        phir = _rand(g, rng, real=True)
        Sr = fm("S", phir, psi)
        rec("S Hermitian for real phi", Sr, Sr.conj().T)
        f = _rand(g, rng)
        rec("apply = matrix", apply(T(phi, psi), f).values, Tm @ f.values)
    out = [_summary(f"{k} [G={g}]", v, IDENTITY_TOL) for k, v in errs.items()]
    for k, bad in spec_fail.items():
        out.append(CheckResult(f"{k} [G={g}]", bad == 0, f"{n - bad}/{n} spectra equal"))
    out.append(CheckResult(f"S spectrum not symmetric in (phi, psi) [G={g}]", witness,
                           "differing instance found" if witness else "no differing instance"))
    return out


def restricted_checks(g: GroupSpec, n: int = 50, seed: int = 0) -> list[CheckResult]:
    """Compression, zero padding, definiteness and trace identities of restrictions."""
    rng = np.random.default_rng(seed)
    N = g.N
    errs: dict[str, list[float]] = {}
    psd_fail = 0
    pad_fail = 0

    def rec(key, a, b):
        errs.setdefault(key, []).append(rel_err(a, b))

    for _ in range(n):
        Sset = SetMask(g, rng.random(N) < rng.uniform(0.2, 0.8))
        if Sset.cardinality == 0:
            Sset = Sset.with_element(int(rng.integers(N)))
        elems = Sset.elements()
        phi = _rand(g, rng)
        R = restricted(phi, Sset)
        full = full_matrix(T(phi, Sset.indicator()))
        rec("restriction = compression", R.action, full[np.ix_(elems, elems)])
        padded = np.zeros((N, N), dtype=np.complex128)
        padded[: len(elems), : len(elems)] = R.matrix
        if not linalg.spectra_equal(full, padded, SPECTRUM_TOL):
            pad_fail += 1
        u = np.where(Sset.members, _rand(g, rng).values, 0)
        v = np.where(Sset.members, _rand(g, rng).values, 0)
        lhs = np.vdot(v[elems], R.action @ u[elems])
        rhs = np.sum(phi.values * dft_array(g, u) * np.conj(dft_array(g, v)))
        rec("quadratic form through transforms", lhs, rhs)
        phir = _rand(g, rng, real=True)
        Rr = restricted(phir, Sset).matrix
        mu = linalg.eigh(Rr).eigenvalues
        phihat = dft_array(g, phir.values)
        rec("trace = |S| phi^(0)", mu.sum(), len(elems) * phihat[0])
        rec("sum of squared eigenvalues", np.sum(mu**2), np.sum(np.abs(Rr) ** 2))
        nonneg = FuncC(g, rng.random(N) * (rng.random(N) < 0.6))
        if np.any(nonneg.values):
            m = restricted(nonneg, Sset).matrix
            w = linalg.eigh(m).eigenvalues
            if w[-1] < -1e-8 * max(np.abs(m).max(), 1.0):
                psd_fail += 1
    out = [_summary(f"{k} [G={g}]", v, SPECTRUM_TOL) for k, v in errs.items()]
    out.append(CheckResult(f"zero-padded spectrum [G={g}]", pad_fail == 0, f"{n - pad_fail}/{n} equal"))
    out.append(CheckResult(f"nonnegative multiplier gives PSD [G={g}]", psd_fail == 0,
                           f"{psd_fail} violations"))
    return out


def definiteness_scan(p: int, seed: int = 0) -> CheckResult:
    """Over every ``S`` in ``Z_p``: definite exactly when ``|supp phi| >= |S|``."""
    g = GroupSpec.cyclic(p)
    rng = np.random.default_rng(seed)
    cases = bad = 0
    for k in range(1, p + 1):
        for elems in itertools.combinations(range(p), k):
            Sset = SetMask.from_elements(g, elems)
            for m in range(1, p + 1):
                vals = np.zeros(p)
                vals[rng.choice(p, size=m, replace=False)] = rng.uniform(0.1, 1.0, size=m)
                pd = is_positive_definite(restricted(FuncC(g, vals), Sset).matrix)
                cases += 1
                bad += pd != (m >= k)
    return CheckResult(f"definite iff |supp phi| >= |S| [Z_{p}]", bad == 0,
                       f"{cases - bad}/{cases} cases agree")


def nested_sets_check(p: int, n: int = 20, seed: int = 0) -> CheckResult:
    """``S1 < S2``: restriction to ``S1`` definite, restriction to ``S2`` has nullity ``|S2|-|S1|``."""
    g = GroupSpec.cyclic(p)
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(n):
        k2 = int(rng.integers(2, p + 1))
        k1 = int(rng.integers(1, k2))
        S2 = rng.choice(p, size=k2, replace=False)
        S1m = SetMask.from_elements(g, S2[:k1])
        S2m = SetMask.from_elements(g, S2)
        A = restricted(S2m.indicator(), S1m).matrix
        B = restricted(S1m.indicator(), S2m).matrix
        nullity = k2 - linalg.rank(B)
        ok = is_positive_definite(A) and is_singular(B) and nullity == k2 - k1
        bad += not ok
    return CheckResult(f"nested sets definite vs singular [Z_{p}]", bad == 0, f"{n - bad}/{n} pairs")


def dual_dimension_scan(p: int, per_size: int = 20, seed: int = 0) -> CheckResult:
    """``dim {psi a : supp a^ in S} = min(|S|, |supp psi|)`` for all ``S``."""
    g = GroupSpec.cyclic(p)
    rng = np.random.default_rng(seed)
    cases = bad = 0
    subsets = [SetMask.from_elements(g, e) for k in range(1, p + 1)
               for e in itertools.combinations(range(p), k)]
    for m in range(1, p + 1):
        for _ in range(per_size):
            vals = np.zeros(p, dtype=np.complex128)
            idx = rng.choice(p, size=m, replace=False)
            vals[idx] = rng.standard_normal(m) + 1j * rng.standard_normal(m)
            psi = FuncC(g, vals)
            for Sset in subsets:
                cases += 1
                bad += dual_restricted_basis(psi, Sset).dim != min(Sset.cardinality, m)
    return CheckResult(f"dual restriction dimension [Z_{p}]", bad == 0, f"{cases - bad}/{cases} cases")


def shared_space_check(p: int, n: int = 20, seed: int = 0) -> CheckResult:
    """With ``psi = S1`` and ``|S2| >= |S1|``, the dual space over ``S2`` is ``L(S1)``.

    The operator with space weight ``S1`` and multiplier ``S2`` then acts the
    same whether restricted to ``L(S1)`` or to the dual space.
    """
    g = GroupSpec.cyclic(p)
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(n):
        k1 = int(rng.integers(1, p))
        k2 = int(rng.integers(k1, p + 1))
        S1 = SetMask.from_elements(g, rng.choice(p, size=k1, replace=False))
        S2 = SetMask.from_elements(g, rng.choice(p, size=k2, replace=False))
        basis = dual_restricted_basis(S1.indicator(), S2)
        gens = basis.as_matrix()
        supported = not np.any(np.abs(gens[~S1.members]) > 1e-12)
        R = restricted(S2.indicator(), S1)
        M = full_matrix(T(S2.indicator(), S1.indicator()))
        e = S1.elements()
        same = all(rel_err(M @ col, R.lift(R.apply(col[e])).values) < IDENTITY_TOL for col in gens.T)
        bad += not (basis.dim == k1 and supported and same)
    return CheckResult(f"dual space equals support space [Z_{p}]", bad == 0, f"{n - bad}/{n} instances")


# the subset scans below enumerate all 2^p subsets
EXHAUSTIVE_PRIME = 7


def prime_structure_checks(p: int, seed: int = 0) -> list[CheckResult]:
    out = [nested_sets_check(p, seed=seed), shared_space_check(p, seed=seed)]
    if p <= EXHAUSTIVE_PRIME:
        out += [definiteness_scan(p, seed), dual_dimension_scan(p, per_size=3, seed=seed)]
    return out


def spectra_suite(g: GroupSpec, n: int = 20, seed: int = 0) -> list[CheckResult]:
    out = operator_checks(g, n, seed) + restricted_checks(g, n, seed)
    if g.rank == 1 and _is_prime(g.N):
        out += prime_structure_checks(g.N, seed)
    return out


# -- prime-order structure --------------------------------------------------


def chebotarev_suite(p: int, seed: int = 0) -> list[CheckResult]:
    return [chebotarev_scan(p, seed=seed)]


def structured_functions(g: GroupSpec) -> list[FuncC]:
    """Ten deterministic test functions: deltas, constants, characters, intervals."""
    N = g.N
    xs = np.arange(N)
    vals = [
        np.eye(N)[0],
        np.eye(N)[N - 1],
        np.ones(N),
        g.pairing(1, xs),
        g.pairing(2, xs) + g.pairing(3 % N, xs),
        (xs < 2).astype(float),
        (xs < (N + 1) // 2).astype(float),
        xs.astype(float),
        np.eye(N)[0] + np.eye(N)[1],
        np.ones(N) - N * np.eye(N)[0],
    ]
    return [FuncC(g, v) for v in vals]


def random_sparse(g: GroupSpec, rng) -> FuncC:
    m = int(rng.integers(1, g.N + 1))
    vals = np.zeros(g.N, dtype=np.complex128)
    idx = rng.choice(g.N, size=m, replace=False)
    vals[idx] = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return FuncC(g, vals)


def uncertainty_suite(p: int, n: int = 500, seed: int = 0) -> list[CheckResult]:
    """Support uncertainty, minimal-support bases and explicit eigenbases over ``Z_p``."""
    g = GroupSpec.cyclic(p)
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    rng = np.random.default_rng(seed)
    fails = [r for r in (uncertainty_check(p, random_sparse(g, rng)) for _ in range(n)) if not r.passed]
    sfails = [r for r in (uncertainty_check(p, f) for f in structured_functions(g)) if not r.passed]
    out = [
        CheckResult(f"uncertainty random sparse [Z_{p}]", not fails, f"{n - len(fails)}/{n} hold"),
        CheckResult(f"uncertainty structured [Z_{p}]", not sfails, f"{10 - len(sfails)}/10 hold"),
    ]
    bad = 0
    for _ in range(20):
        k = int(rng.integers(1, p + 1))
        Sset = SetMask.from_elements(g, rng.choice(p, size=k, replace=False))
        fam = [FuncC(g, np.where(Sset.members, random_sparse(g, rng).values + 1, 0))
               for _ in range(int(rng.integers(1, k + 1)))]
        try:
            min_support_basis(Sset, fam)
        except ineq.IdentityViolation:
            bad += 1
    out.append(CheckResult(f"minimal-support bases [Z_{p}]", bad == 0, f"{20 - bad}/20 bases"))
    out += eigenbasis_checks(p, 20, seed)
    return out


def eigenbasis_checks(p: int, n: int = 20, seed: int = 0) -> list[CheckResult]:
    g = GroupSpec.cyclic(p)
    rng = np.random.default_rng(seed)
    out = []
    for case in ("set-multiplier", "set-support"):
        results = []
        for _ in range(n):
            k = int(rng.integers(1, p + 1))
            Sset = SetMask.from_elements(g, rng.choice(p, size=k, replace=False))
            if case == "set-multiplier":
                m = int(rng.integers(k, p + 1))
                w = np.zeros(p)
                w[rng.choice(p, size=m, replace=False)] = rng.uniform(0.1, 2.0, size=m)
            else:
                w = rng.uniform(0.1, 2.0, size=p)
            results.append(constructive_eigenbasis(case, Sset, FuncC(g, w)))
        worst = max(r.data["max_residual"] for r in results)
        ranks = min(r.data["rank"] for r in results)
        out.append(CheckResult(f"eigenbasis {case} [Z_{p}]", all(r.passed for r in results),
                               f"min rank {ranks}/{p}, max residual {worst:.1e} over {n} instances"))
    return out


# -- inequalities -----------------------------------------------------------


def eigen_statistics_suite(groups=("13", "64"), n: int = 100, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    bad = 0
    for i in range(n):
        g = parse_group(groups[i % len(groups)])
        L = random_dissociated(g, rng)
        Sset = SetMask(g, rng.random(g.N) < rng.uniform(0.05, 0.95))
        if Sset.cardinality == 0:
            Sset = Sset.with_element(0)
        try:
            ineq.eigen_statistics(L, Sset)
        except ineq.IdentityViolation:
            bad += 1
    return CheckResult("eigenvalue trace identities", bad == 0, f"{n - bad}/{n} instances")


def inequality_suite(
    seed: int = 0, budget: float = DEFAULT_BUDGET, groups=None
) -> tuple[list[CheckResult], list[InequalityReport]]:
    reports = standard_sweep(seed=seed, budget=budget, groups=groups)
    out = []
    for name in INEQUALITIES:
        mine = [r for r in reports if r.name == name]
        bad = [r for r in mine if not r.passed]
        top = max((r.ratio for r in mine if r.ratio is not None), default=0.0)
        out.append(CheckResult(f"{name} within budget {budget:g}", not bad,
                               f"{len(mine)} records, max ratio {top:.4g}, {len(bad)} violations"))
    out.append(eigen_statistics_suite(seed=seed))
    return out, sort_reports(reports)


SUITES: dict[str, Callable] = {
    "identities": identity_suite,
    "spectra": spectra_suite,
    "chebotarev": chebotarev_suite,
    "uncertainty": uncertainty_suite,
    "inequalities": inequality_suite,
}
