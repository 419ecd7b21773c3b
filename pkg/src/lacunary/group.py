"""Finite abelian groups ``Z_{n1} x ... x Z_{nk}``.

Elements are plain integers in ``[0, N)``: the mixed-radix code of the digit
tuple ``(x1, ..., xk)`` with the last factor varying fastest.  The dual group
is identified with the group itself through the same codes, and the pairing
of a character ``xi`` with an element ``x`` is ``e(sum_j xi_j x_j / n_j)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property, reduce

import numpy as np

__all__ = ["GroupSpec", "GroupSpecError", "parse_group"]

_TERM = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+)\s*)?$")


class GroupSpecError(ValueError):
    """Raised for malformed group descriptions or out-of-range elements."""


@dataclass(frozen=True)
class GroupSpec:
    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if not orders:
            raise GroupSpecError("a group needs at least one cyclic factor")
        if any(n < 2 for n in orders):
            raise GroupSpecError(f"cyclic orders must be >= 2, got {orders}")
        object.__setattr__(self, "orders", orders)

    @classmethod
    def cyclic(cls, n: int) -> "GroupSpec":
        return cls((n,))

    @classmethod
    def power(cls, n: int, k: int) -> "GroupSpec":
        return cls((n,) * k)

    @property
    def N(self) -> int:
        return math.prod(self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    def __str__(self) -> str:
        return ",".join(str(n) for n in self.orders)

    @cached_property
    def exponent(self) -> int:
        return reduce(math.lcm, self.orders)

    @cached_property
    def digit_table(self) -> np.ndarray:
        """``(N, k)`` array of digit tuples in canonical order."""
        idx = np.arange(self.N)
        return np.stack(np.unravel_index(idx, self.orders), axis=-1)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self.encode((-self.digit_table) % np.asarray(self.orders))

    def check(self, a) -> np.ndarray:
        a = np.asarray(a)
        if a.size and (np.any(a < 0) or np.any(a >= self.N)):
            raise GroupSpecError(f"element out of range for group of order {self.N}: {a}")
        return a

    def decode(self, a):
        """Digits of one code (tuple) or of an array of codes (``(..., k)`` array)."""
        a = self.check(a)
        digits = np.stack(np.unravel_index(a, self.orders), axis=-1)
        if digits.ndim == 1:
            return tuple(int(d) for d in digits)
        return digits

    def encode(self, digits):
        digits = np.asarray(digits)
        d = np.moveaxis(digits % np.asarray(self.orders), -1, 0)
        code = np.ravel_multi_index(tuple(d), self.orders)
        return int(code) if np.ndim(code) == 0 else code

    @property
    def zero(self) -> int:
        return 0

    def add(self, a, b):
        da = np.asarray(self.decode(a))
        db = np.asarray(self.decode(b))
        return self.encode(da + db)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        a = self.check(a)
        out = self.neg_table[a]
        return int(out) if np.ndim(out) == 0 else out

    def scale(self, m: int, a):
        return self.encode(m * np.asarray(self.decode(a)))

    def phase(self, xi, x):
        """Integer ``m`` with ``xi . x = m / exponent (mod 1)``; broadcasts."""
        dxi = np.asarray(self.decode(xi), dtype=np.int64)
        dx = np.asarray(self.decode(x), dtype=np.int64)
        orders = np.asarray(self.orders, dtype=np.int64)
        weights = self.exponent // orders
        return ((dxi * dx) % orders * weights).sum(axis=-1) % self.exponent

    def pairing(self, xi, x):
        """``e(xi . x)`` where ``e(t) = exp(2 pi i t)``."""
        out = np.exp(2j * np.pi * self.phase(xi, x) / self.exponent)
        return complex(out) if np.ndim(out) == 0 else out

    def phase_matrix(self) -> np.ndarray:
        """``(N, N)`` integer matrix of phases ``xi . x`` scaled by the exponent."""
        d = self.digit_table.astype(np.int64)
        orders = np.asarray(self.orders, dtype=np.int64)
        weights = self.exponent // orders
        out = np.zeros((self.N, self.N), dtype=np.int64)
        for j in range(self.rank):
            out += np.multiply.outer(d[:, j], d[:, j]) % orders[j] * weights[j]
        return out % self.exponent

    def character_matrix(self, sign: int = 1) -> np.ndarray:
        """Dense ``[e(sign * xi . x)]`` with rows indexed by ``xi``."""
        roots = np.exp(sign * 2j * np.pi * np.arange(self.exponent) / self.exponent)
        return roots[self.phase_matrix()]

    def prime_power_base(self) -> int | None:
        """The prime ``p`` when the group is ``(Z/pZ)^n``, otherwise ``None``."""
        p = self.orders[0]
        if any(n != p for n in self.orders) or not _is_prime(p):
            return None
        return p


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def parse_group(text: str) -> GroupSpec:
    """Parse ``"12"``, ``"2,2,3"`` or ``"2^5"`` style descriptions."""
    if not isinstance(text, str) or not text.strip():
        raise GroupSpecError("empty group spec")
    orders: list[int] = []
    for term in text.split(","):
        m = _TERM.match(term)
        if m is None:
            raise GroupSpecError(f"bad group term {term!r} in {text!r}")
        base = int(m.group(1))
        reps = int(m.group(2)) if m.group(2) is not None else 1
        if base < 2 or (m.group(2) is not None and reps < 2):
            raise GroupSpecError(f"group term {term!r} must use integers >= 2")
        orders.extend([base] * reps)
    return GroupSpec(tuple(orders))
