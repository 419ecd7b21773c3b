"""Seeded sweeps of the inequality evaluators over random and structured instances.

Instance ``i`` of a sweep draws everything from ``default_rng([seed, i])``,
so a sweep is reproducible and any single instance can be regenerated on
its own.  Results are sorted by ratio (descending) and then by instance
descriptor, which makes the output independent of evaluation order.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence

import numpy as np

from ..dissociation import SetMask, greedy_dissociated, subspace
from ..fourier import FuncC, dft_array
from ..group import GroupSpec, parse_group
from . import inequalities as ineq
from .reports import DEFAULT_BUDGET, ConstantLedger, InequalityReport

__all__ = [
    "INEQUALITIES",
    "STANDARD_COUNT",
    "STANDARD_GROUPS",
    "UnknownInequalityError",
    "empirical_constants",
    "random_dissociated",
    "sharpness_sweep",
    "sort_reports",
    "standard_sweep",
]

STANDARD_GROUPS = ("7", "13", "64", "128", "2^7", "2,3,5", "3^4", "5^3", "2^4", "2,4,8")
STANDARD_COUNT = 80


class UnknownInequalityError(KeyError):
    pass


# -- instance ingredients ---------------------------------------------------


def _unit_vectors(g: GroupSpec) -> list[int]:
    out = []
    for j in range(g.rank):
        d = [0] * g.rank
        d[j] = 1
        out.append(int(g.encode(d)))
    return out


def _powers_of_two(g: GroupSpec) -> list[int]:
    out, x = [], 1
    while x < g.N:
        out.append(x)
        x *= 2
    return out


def random_dissociated(g: GroupSpec, rng: np.random.Generator, structured: bool = False) -> SetMask:
    """A dissociated set: a greedy scan of a random candidate pool.

    ``structured`` starts from the unit vectors (rank > 1) or the powers of
    two (cyclic), which are lacunary by construction.
    """
    if structured:
        pool = _unit_vectors(g) if g.rank > 1 else _powers_of_two(g)
        cand = SetMask.from_elements(g, pool)
        lam = greedy_dissociated(cand)
        k = int(rng.integers(1, lam.cardinality + 1))
        return SetMask.from_elements(g, lam.elements()[:k])
    m = int(rng.integers(1, min(g.N - 1, 3 * max(1, int(math.log2(g.N)))) + 1))
    pool = rng.choice(np.arange(1, g.N), size=m, replace=False)
    lam = greedy_dissociated(SetMask.from_elements(g, pool), order="random",
                             seed=int(rng.integers(2**31)))
    k = int(rng.integers(1, lam.cardinality + 1))
    return SetMask.from_elements(g, lam.elements()[rng.permutation(lam.cardinality)[:k]])


def _random_subset(g: GroupSpec, rng, lo: int = 1, hi: int | None = None) -> SetMask:
    hi = g.N - 1 if hi is None else hi
    size = int(rng.integers(lo, hi + 1))
    return SetMask.from_elements(g, rng.choice(g.N, size=size, replace=False))


def _structured_subset(g: GroupSpec, rng) -> SetMask:
    """An interval of codes, or a proper subspace when ``g`` is elementary."""
    p = g.prime_power_base()
    if p is not None and g.rank > 1 and rng.random() < 0.5:
        gens = rng.choice(np.arange(1, g.N), size=int(rng.integers(1, g.rank)), replace=False)
        S = subspace(g, gens)
        if S.cardinality < g.N:
            return S
    length = int(rng.integers(1, g.N))
    start = int(rng.integers(0, g.N - length + 1))
    return SetMask.from_elements(g, range(start, start + length))


def _subset(g, rng, i) -> SetMask:
    return _structured_subset(g, rng) if i % 3 == 0 else _random_subset(g, rng)


# -- per-inequality instance runners ----------------------------------------


def _run_rudin(g, rng, i, seed, budget):
    p = (2, 4, 6, 8)[i % 4]
    L = random_dissociated(g, rng, structured=(i % 5 == 0))
    if i % 2:
        vals = rng.standard_normal(g.N) + 1j * rng.standard_normal(g.N)
    else:
        vals = np.ones(g.N, dtype=np.complex128)
    a = FuncC(g, np.where(L.members, vals, 0))
    return [ineq.rudin_moment(L, a, p, budget=budget, seed=seed)]


def _run_chang(g, rng, i, seed, budget):
    L = random_dissociated(g, rng, structured=(i % 5 == 0))
    S = _subset(g, rng, i)
    f = None
    # a general f is only swept where log(1/delta) >= 1
    if i % 2 and S.density <= 0.5:
        f = FuncC(g, np.where(S.members, rng.standard_normal(g.N) + 1j * rng.standard_normal(g.N), 0))
    return [ineq.chang_bound(L, S, f, budget=budget, seed=seed)]


def _run_top_eigenvalue(g, rng, i, seed, budget):
    L = random_dissociated(g, rng, structured=(i % 5 == 0))
    kind = i % 5
    if kind == 0:
        vals = _subset(g, rng, i).members.astype(float)
    elif kind == 1:
        vals = 0.1 * rng.random(g.N) * (rng.random(g.N) < 0.2)
        vals[0] = 1.0
    elif kind == 2:
        vals = rng.standard_normal(g.N)
    elif kind == 3:
        vals = rng.random(g.N) * (rng.random(g.N) < 0.3)
        vals[int(rng.integers(g.N))] = 1.0
    else:
        S = _random_subset(g, rng)
        vals = np.abs(dft_array(g, S.members.astype(np.complex128))) ** 2
    return ineq.top_eigenvalue_bound(L, FuncC(g, vals), budget=budget, seed=seed)


def _run_higher_moment(g, rng, i, seed, budget):
    l = (2, 3, 4)[i % 3]
    L = random_dissociated(g, rng, structured=(i % 5 == 0))
    S = _subset(g, rng, i // 3)
    return [ineq.higher_moment_chang(L, S, l, budget=budget, seed=seed)]


def _run_dual_convolution(g, rng, i, seed, budget):
    l = 2 + i % 2
    L = random_dissociated(g, rng, structured=(i % 5 == 0))
    # singletons make the pair bound's log factor vanish, so sets have >= 2 elements
    lo = g.N // 2 if i % 4 == 1 else 2
    if i % 2 == 0 or rng.random() < 0.5:
        sets = [_random_subset(g, rng, lo=lo)] * (l - 1)
    else:
        sets = [_random_subset(g, rng, lo=lo) for _ in range(l - 1)]
    last = _subset(g, rng, i)
    sets.append(last if last.cardinality >= 2 else _random_subset(g, rng, lo=2))
    return ineq.dual_convolution_bound(L, sets, budget=budget, seed=seed)


def _run_popular_sums(g, rng, i, seed, budget):
    if i % 4 == 0 and g.prime_power_base() is not None and g.rank > 1:
        S1 = _structured_subset(g, rng)
        if S1.cardinality < 2:
            S1 = _random_subset(g, rng, lo=2)
        S2 = S1
    else:
        S1 = _random_subset(g, rng, lo=2)
        S2 = S1 if i % 2 else _random_subset(g, rng, lo=2)
    top = min(S1.cardinality, S2.cardinality)
    r = int(rng.integers(1, top + 1))
    report, _ = ineq.popular_sums_bound(S1, S2, r, budget=budget, seed=seed)
    return [report]


def _run_bilinear(g, rng, i, seed, budget):
    L = random_dissociated(g, rng, structured=(i % 5 == 0))
    S = _subset(g, rng, i)
    return [ineq.bilinear_bound(L, S, budget=budget, seed=seed)]


INEQUALITIES: dict[str, Callable] = {
    "rudin": _run_rudin,
    "chang": _run_chang,
    "top-eigenvalue": _run_top_eigenvalue,
    "higher-moment": _run_higher_moment,
    "dual-convolution": _run_dual_convolution,
    "popular-sums": _run_popular_sums,
    "bilinear": _run_bilinear,
}


# -- sweeps -----------------------------------------------------------------


def sort_reports(reports: Sequence[InequalityReport]) -> list[InequalityReport]:
    def key(r):
        ratio = -math.inf if r.ratio is None else r.ratio
        return (-ratio, r.name, r.instance, r.variant)

    return sorted(reports, key=key)


def sharpness_sweep(
    name: str,
    count: int,
    *,
    groups: Sequence[str | GroupSpec] | None = None,
    seed: int = 0,
    budget: float = DEFAULT_BUDGET,
) -> list[InequalityReport]:
    """Run ``count`` seeded instances of one inequality, largest ratios first.

    Groups are cycled through ``groups`` (default: the standard list, all of
    order at most 128).  Multi-variant evaluators give one record per
    applicable variant.
    """
    try:
        runner = INEQUALITIES[name]
    except KeyError:
        raise UnknownInequalityError(
            f"unknown inequality {name!r}; choose from {', '.join(INEQUALITIES)}"
        ) from None
    if count < 0:
        raise ValueError("count must be >= 0")
    gs = [parse_group(x) if isinstance(x, str) else x for x in (groups or STANDARD_GROUPS)]
    out = []
    for i in range(count):
        g = gs[i % len(gs)]
        rng = np.random.default_rng([seed, i])
        for r in runner(g, rng, i, seed, budget):
            r.instance = f"{r.instance} #{i}"
            out.append(r)
    return sort_reports(out)


def standard_sweep(
    seed: int = 0,
    budget: float = DEFAULT_BUDGET,
    count: int = STANDARD_COUNT,
    groups: Sequence[str | GroupSpec] | None = None,
) -> list[InequalityReport]:
    """``count`` instances of every inequality (560 by default)."""
    out = []
    for name in INEQUALITIES:
        out.extend(sharpness_sweep(name, count, groups=groups, seed=seed, budget=budget))
    return sort_reports(out)


def empirical_constants(reports: Sequence[InequalityReport]) -> ConstantLedger:
    """Maximum ratio per inequality and variant.

    Rudin records also contribute ``rudin/p=<p>/C``, the constant ``C`` in
    ``(C sqrt p)^p`` forced by the worst instance.
    """
    led = ConstantLedger().update(reports)
    for r in reports:
        if r.name == "rudin" and r.ratio is not None:
            key = f"{r.key}/C"
            led.values[key] = max(led.values.get(key, 0.0), ineq.rudin_constant(r))
    return led
