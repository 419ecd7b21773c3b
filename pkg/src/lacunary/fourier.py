"""Fourier analysis on a finite abelian group.

The forward transform is unnormalized,
``f^(xi) = sum_x f(x) e(-xi . x)``, and the inverse carries ``1/N``.
Array kernels (``*_array``) act on the last axis so batches of functions
can be pushed through in one call; :class:`FuncC` is the checked,
group-aware wrapper used by the rest of the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .group import GroupSpec

__all__ = [
    "FuncC",
    "GroupMismatchError",
    "dft",
    "idft",
    "dft_array",
    "idft_array",
    "reflect",
    "reflect_array",
    "pointwise",
    "conjugate",
    "convolve",
    "convolve_array",
    "convolve_direct",
    "convolve_power",
    "inner",
    "norm1",
    "norm2",
    "norm_inf",
    "delta",
    "constant",
    "indicator",
]

METHODS = ("auto", "dense", "walsh", "fft")


class GroupMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FuncC:
    """A complex function on ``group``, stored densely in canonical order.

    ``side`` is bookkeeping only ("time" or "frequency").
    """

    group: GroupSpec
    values: np.ndarray
    side: str = field(default="time")

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128).reshape(-1)
        if v.shape[0] != self.group.N:
            raise GroupMismatchError(
                f"function has {v.shape[0]} values, group {self.group} has {self.group.N}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.group.N

    def __getitem__(self, x):
        return self.values[x]

    def _other(self, other):
        if isinstance(other, FuncC):
            _same_group(self, other)
            return other.values
        return other

    def __add__(self, other):
        return FuncC(self.group, self.values + self._other(other), self.side)

    __radd__ = __add__

    def __sub__(self, other):
        return FuncC(self.group, self.values - self._other(other), self.side)

    def __mul__(self, other):
        return FuncC(self.group, self.values * self._other(other), self.side)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FuncC(self.group, self.values / self._other(other), self.side)

    def __neg__(self):
        return FuncC(self.group, -self.values, self.side)

    def __abs__(self):
        return FuncC(self.group, np.abs(self.values), self.side)

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    def is_real(self, tol: float = 1e-12) -> bool:
        scale = max(1.0, float(np.abs(self.values).max(initial=0.0)))
        return bool(np.abs(self.values.imag).max(initial=0.0) <= tol * scale)

    def support(self, tol: float = 1e-9) -> np.ndarray:
        """Elements where ``|f| > tol * ||f||_inf``."""
        a = np.abs(self.values)
        peak = a.max(initial=0.0)
        if peak == 0.0:
            return np.zeros(0, dtype=np.int64)
        return np.flatnonzero(a > tol * peak)

    def allclose(self, other: "FuncC", rtol: float = 1e-9) -> bool:
        _same_group(self, other)
        return _rel_err(self.values, other.values) <= rtol


def _same_group(*fs: FuncC) -> GroupSpec:
    g = fs[0].group
    for f in fs[1:]:
        if f.group != g:
            raise GroupMismatchError(f"functions live on different groups: {g} vs {f.group}")
    return g


def _rel_err(a, b) -> float:
    scale = max(np.abs(a).max(initial=0.0), np.abs(b).max(initial=0.0), 1e-300)
    return float(np.abs(a - b).max(initial=0.0) / scale)


# -- transform kernels -------------------------------------------------------


@lru_cache(maxsize=32)
def _dense_kernel(g: GroupSpec, sign: int) -> np.ndarray:
    m = g.character_matrix(sign)
    m.setflags(write=False)
    return m


def _pick(g: GroupSpec, method: str) -> str:
    if method not in METHODS:
        raise ValueError(f"unknown transform method {method!r}")
    if method == "auto":
        return "walsh" if all(n == 2 for n in g.orders) else "fft"
    if method == "walsh" and any(n != 2 for n in g.orders):
        raise ValueError(f"Walsh-Hadamard path needs a group (Z/2Z)^n, got {g}")
    return method


def _walsh(x: np.ndarray, k: int) -> np.ndarray:
    # in-order butterflies, one per binary digit
    lead = x.shape[:-1]
    y = np.array(x, dtype=np.complex128, copy=True)
    for j in range(k):
        y = y.reshape(lead + (2**j, 2, 2 ** (k - j - 1)))
        a = y[..., 0, :]
        b = y[..., 1, :]
        y = np.stack((a + b, a - b), axis=-2)
    return y.reshape(lead + (2**k,))


def dft_array(g: GroupSpec, x, method: str = "auto") -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[-1] != g.N:
        raise GroupMismatchError(f"last axis {x.shape[-1]} != N = {g.N}")
    method = _pick(g, method)
    if method == "dense":
        return x @ _dense_kernel(g, -1).T
    if method == "walsh":
        return _walsh(x, g.rank)
    lead = x.shape[:-1]
    axes = tuple(range(-g.rank, 0))
    return np.fft.fftn(x.reshape(lead + g.orders), axes=axes).reshape(lead + (g.N,))


def idft_array(g: GroupSpec, x, method: str = "auto") -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[-1] != g.N:
        raise GroupMismatchError(f"last axis {x.shape[-1]} != N = {g.N}")
    method = _pick(g, method)
    if method == "dense":
        return x @ _dense_kernel(g, 1).T / g.N
    if method == "walsh":
        return _walsh(x, g.rank) / g.N
    lead = x.shape[:-1]
    axes = tuple(range(-g.rank, 0))
    return np.fft.ifftn(x.reshape(lead + g.orders), axes=axes).reshape(lead + (g.N,))


def reflect_array(g: GroupSpec, x) -> np.ndarray:
    return np.asarray(x)[..., g.neg_table]


def convolve_array(g: GroupSpec, x, y) -> np.ndarray:
    return idft_array(g, dft_array(g, x) * dft_array(g, y))


# -- FuncC surface -----------------------------------------------------------


def dft(f: FuncC, method: str = "auto") -> FuncC:
    return FuncC(f.group, dft_array(f.group, f.values, method), "frequency")


def idft(F: FuncC, method: str = "auto") -> FuncC:
    return FuncC(F.group, idft_array(F.group, F.values, method), "time")


def reflect(f: FuncC) -> FuncC:
    """``f^c(x) = f(-x)``."""
    return FuncC(f.group, reflect_array(f.group, f.values), f.side)


def pointwise(rho: FuncC, f: FuncC) -> FuncC:
    _same_group(rho, f)
    return FuncC(f.group, rho.values * f.values, f.side)


def conjugate(f: FuncC) -> FuncC:
    return FuncC(f.group, np.conj(f.values), f.side)


def convolve(f: FuncC, g: FuncC) -> FuncC:
    """``(f * g)(x) = sum_y f(y) g(x - y)``, computed spectrally."""
    grp = _same_group(f, g)
    return FuncC(grp, convolve_array(grp, f.values, g.values), f.side)


def convolve_direct(f: FuncC, g: FuncC) -> FuncC:
    """Double-sum convolution, ``O(N^2)``; kept as an oracle for :func:`convolve`."""
    grp = _same_group(f, g)
    N = grp.N
    xs = np.arange(N)
    out = np.zeros(N, dtype=np.complex128)
    for y in range(N):
        if f.values[y] != 0:
            out += f.values[y] * g.values[grp.sub(xs, y)]
    return FuncC(grp, out, f.side)


def convolve_power(f: FuncC, l: int) -> FuncC:
    """``l`` copies of ``f`` convolved together (``l = 1`` gives ``f``)."""
    if int(l) != l or l < 1:
        raise ValueError(f"convolution power needs l >= 1, got {l}")
    grp = f.group
    return FuncC(grp, idft_array(grp, dft_array(grp, f.values) ** int(l)), f.side)


def inner(f: FuncC, g: FuncC) -> complex:
    """``<f, g> = sum_x f(x) conj(g(x))``."""
    _same_group(f, g)
    return complex(np.vdot(g.values, f.values))


def norm2(f: FuncC) -> float:
    return float(np.linalg.norm(f.values))


def norm1(f: FuncC) -> float:
    return float(np.abs(f.values).sum())


def norm_inf(f: FuncC) -> float:
    return float(np.abs(f.values).max())


def delta(g: GroupSpec, c: int) -> FuncC:
    g.check(c)
    v = np.zeros(g.N, dtype=np.complex128)
    v[c] = 1.0
    return FuncC(g, v)


def constant(g: GroupSpec, value: complex = 1.0) -> FuncC:
    return FuncC(g, np.full(g.N, value, dtype=np.complex128))


def indicator(g: GroupSpec, elements) -> FuncC:
    v = np.zeros(g.N, dtype=np.complex128)
    v[g.check(np.asarray(list(elements), dtype=np.int64))] = 1.0
    return FuncC(g, v)
