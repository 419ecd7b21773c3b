"""Subsets of a group and dissociativity.

A finite set is dissociated when no signed combination ``sum eps_i l_i``
with ``eps_i in {-1, 0, 1}``, not all zero, vanishes.  Equivalently all
``2^k`` subset sums are distinct, so a dissociated set in a group of order
``N`` has at most ``log2 N`` elements.

Two independent checkers are provided.  The exhaustive one scans sign
vectors in lexicographic order (digit order ``0, +1, -1``, first element
most significant) and reports the first vanishing combination.  The
meet-in-the-middle one tabulates the signed sums of each half and looks
for a collision, using ``3^ceil(k/2)`` memory.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .fourier import FuncC
from .group import GroupSpec, GroupSpecError

__all__ = [
    "DISSOCIATION_CAP",
    "EXHAUSTIVE_LIMIT",
    "CapExceededError",
    "DissociationWitness",
    "SetMask",
    "greedy_dissociated",
    "interval",
    "is_dissociated",
    "random_set",
    "subspace",
]

EXHAUSTIVE_LIMIT = 18
DISSOCIATION_CAP = 26
# suffix table length used by the chunked exhaustive scan
_SUFFIX = 11


class CapExceededError(ValueError):
    """The set is too large for an exact dissociativity check."""


@dataclass(frozen=True, eq=False)
class SetMask:
    group: GroupSpec
    members: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.members, dtype=bool).reshape(-1)
        if m.shape[0] != self.group.N:
            raise GroupSpecError(f"mask length {m.shape[0]} != N = {self.group.N}")
        m.setflags(write=False)
        object.__setattr__(self, "members", m)

    @classmethod
    def from_elements(cls, g: GroupSpec, elements) -> "SetMask":
        elems = np.asarray(list(elements), dtype=np.int64)
        g.check(elems)
        m = np.zeros(g.N, dtype=bool)
        m[elems] = True
        return cls(g, m)

    @classmethod
    def full(cls, g: GroupSpec) -> "SetMask":
        return cls(g, np.ones(g.N, dtype=bool))

    @classmethod
    def empty(cls, g: GroupSpec) -> "SetMask":
        return cls(g, np.zeros(g.N, dtype=bool))

    @property
    def cardinality(self) -> int:
        return int(self.members.sum())

    def __len__(self):
        return self.cardinality

    def __contains__(self, x) -> bool:
        return bool(self.members[x])

    def __iter__(self):
        return iter(self.elements().tolist())

    def __eq__(self, other):
        if not isinstance(other, SetMask):
            return NotImplemented
        return self.group == other.group and bool(np.array_equal(self.members, other.members))

    def __repr__(self):
        return f"SetMask({self.group}, {self.elements().tolist()})"

    def elements(self) -> np.ndarray:
        """Members in ascending canonical order."""
        return np.flatnonzero(self.members)

    @property
    def density(self) -> float:
        return self.cardinality / self.group.N

    def indicator(self) -> FuncC:
        return FuncC(self.group, self.members.astype(np.complex128))

    def complement(self) -> "SetMask":
        return SetMask(self.group, ~self.members)

    def with_element(self, x: int) -> "SetMask":
        m = self.members.copy()
        m[x] = True
        return SetMask(self.group, m)

    def describe(self) -> str:
        return "{" + ",".join(str(x) for x in self.elements()) + "}"


@dataclass(frozen=True)
class DissociationWitness:
    """Verdict of a dissociativity check.

    ``coefficients`` is ``None`` for a dissociated set; otherwise it holds a
    nonzero sign vector aligned with ``elements`` whose combination vanishes.
    """

    elements: tuple[int, ...]
    coefficients: tuple[int, ...] | None = None

    @property
    def dissociated(self) -> bool:
        return self.coefficients is None

    def __str__(self) -> str:
        if self.coefficients is None:
            return "dissociated"
        return " ".join(f"{c:+d}" if c else "0" for c in self.coefficients)


# -- kernels ----------------------------------------------------------------


def _signed_sums(g: GroupSpec, elems, negate: bool = False) -> np.ndarray:
    """Codes of all ``3^m`` signed sums in lexicographic order, shape ``(3^m,)``."""
    orders = np.asarray(g.orders, dtype=np.int64)
    digits = np.zeros((1, g.rank), dtype=np.int64)
    for e in reversed(list(elems)):
        d = np.asarray(g.decode(int(e)), dtype=np.int64)
        digits = np.concatenate([digits, (digits + d) % orders, (digits - d) % orders])
    if negate:
        digits = (-digits) % orders
    return np.asarray(g.encode(digits), dtype=np.int64).reshape(-1)


def _sign_vector(index: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        index, r = divmod(index, 3)
        out.append((0, 1, -1)[r])
    return out[::-1]


def _exhaustive(g: GroupSpec, elems: list[int]) -> tuple[int, ...] | None:
    k = len(elems)
    m = min(k, _SUFFIX)
    head, tail = elems[: k - m], elems[k - m :]
    tail_codes = _signed_sums(g, tail)
    for h_index, signs in enumerate(itertools.product((0, 1, -1), repeat=len(head))):
        total = np.zeros(g.rank, dtype=np.int64)
        for s, e in zip(signs, head):
            if s:
                total += s * np.asarray(g.decode(e), dtype=np.int64)
        target = g.encode(-total)
        hits = np.flatnonzero(tail_codes == target)
        if h_index == 0:
            hits = hits[hits != 0]
        if hits.size:
            return tuple(signs) + tuple(_sign_vector(int(hits[0]), m))
    return None


def _meet_in_the_middle(g: GroupSpec, elems: list[int]) -> tuple[int, ...] | None:
    k = len(elems)
    h = (k + 1) // 2
    left, right = elems[:h], elems[h:]
    lcodes = _signed_sums(g, left)
    want = _signed_sums(g, right, negate=True)
    order = np.argsort(lcodes, kind="stable")
    sorted_l = lcodes[order]
    lo = np.searchsorted(sorted_l, want, side="left")
    hi = np.searchsorted(sorted_l, want, side="right")
    counts = hi - lo
    # the all-zero pair (0, 0) is the only trivial solution
    counts[0] -= 1
    if not np.any(counts > 0):
        return None
    j = int(np.flatnonzero(counts > 0)[0])
    candidates = order[lo[j] : hi[j]]
    i = int(candidates[candidates != 0][0] if j == 0 else candidates[0])
    return tuple(_sign_vector(i, len(left)) + _sign_vector(j, len(right)))


def is_dissociated(
    L: SetMask, cap: int = DISSOCIATION_CAP, method: str = "auto"
) -> DissociationWitness:
    """Decide whether ``L`` is dissociated, returning a witness if not.

    ``method`` is ``"exhaustive"``, ``"mitm"`` or ``"auto"`` (exhaustive up to
    ``EXHAUSTIVE_LIMIT`` elements).  Raises :class:`CapExceededError` above
    ``cap`` elements.
    """
    elems = [int(x) for x in L.elements()]
    k = len(elems)
    if k > cap:
        raise CapExceededError(f"set of size {k} exceeds the dissociation cap {cap}")
    if method == "auto":
        method = "exhaustive" if k <= EXHAUSTIVE_LIMIT else "mitm"
    if method == "exhaustive":
        coeffs = _exhaustive(L.group, elems)
    elif method == "mitm":
        coeffs = _meet_in_the_middle(L.group, elems) if k else None
    else:
        raise ValueError(f"unknown method {method!r}")
    return DissociationWitness(tuple(elems), coeffs)


def check_witness(g: GroupSpec, w: DissociationWitness) -> bool:
    """True when the witness is a valid nontrivial vanishing combination."""
    if w.coefficients is None:
        return False
    if not any(w.coefficients):
        return False
    total = np.zeros(g.rank, dtype=np.int64)
    for c, e in zip(w.coefficients, w.elements):
        total += c * np.asarray(g.decode(e), dtype=np.int64)
    return g.encode(total) == 0


def greedy_dissociated(L: SetMask, order: str = "ascending", seed: int = 0) -> SetMask:
    """A maximal dissociated subset of ``L`` built by one scan.

    ``order`` is ``"ascending"``, ``"descending"`` or ``"random"`` (shuffled
    with ``seed``).  Every candidate is tested against the current set with
    the same exact kernel.
    """
    elems = L.elements()
    if order == "descending":
        elems = elems[::-1]
    elif order == "random":
        elems = np.random.default_rng(seed).permutation(elems)
    elif order != "ascending":
        raise ValueError(f"unknown scan order {order!r}")
    current = SetMask.empty(L.group)
    for x in elems:
        trial = current.with_element(int(x))
        if is_dissociated(trial).dissociated:
            current = trial
    return current


# -- generators -------------------------------------------------------------


def subspace(g: GroupSpec, generators) -> SetMask:
    """Span of ``generators`` inside ``(Z/pZ)^n``."""
    p = g.prime_power_base()
    if p is None:
        raise GroupSpecError(f"subspaces need a group (Z/pZ)^n with p prime, got {g}")
    gens = [np.asarray(g.decode(int(x)), dtype=np.int64) for x in generators]
    span = {0}
    for v in gens:
        code_v = g.encode(v)
        if code_v in span:
            continue
        new = set()
        for s in span:
            base = np.asarray(g.decode(s), dtype=np.int64)
            for c in range(p):
                new.add(g.encode(base + c * v))
        span = new
    return SetMask.from_elements(g, sorted(span))


def random_set(
    g: GroupSpec, size: int | None = None, density: float | None = None, seed: int = 0
) -> SetMask:
    """Uniform random subset without replacement, reproducible from ``seed``."""
    if (size is None) == (density is None):
        raise ValueError("give exactly one of size or density")
    if size is None:
        size = max(1, int(round(density * g.N)))
    size = int(size)
    if size < 1 or size > g.N:
        raise ValueError(f"size must lie in [1, {g.N}], got {size}")
    rng = np.random.default_rng(seed)
    return SetMask.from_elements(g, rng.choice(g.N, size=size, replace=False))


def interval(g: GroupSpec, a: int, b: int) -> SetMask:
    """Canonical codes ``a, a+1, ..., b`` (inclusive)."""
    if not 0 <= a <= b < g.N:
        raise GroupSpecError(f"interval [{a}, {b}] outside [0, {g.N})")
    return SetMask.from_elements(g, range(a, b + 1))
