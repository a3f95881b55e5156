"""Arithmetic substrate: prime fields, points of F_p^d, the additive
character, and dense complex-valued functions on the grid.

Everything downstream (Fourier transforms, surface measures, energy
counts) is built on the three conventions fixed here:

* field elements are plain ints in [0, p);
* a point of F_p^d is encoded as the little-endian base-p integer
  index = sum(coords[k] * p**k), so index 0 is the origin and the
  first coordinate varies fastest;
* a function on F_p^d is a flat complex128 array of length p^d in
  that index order.  Reshaping with Fortran order gives a d-axis
  grid whose axis k is coordinate k.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import SizeOverflow

# Hard ceiling on the number of points any single enumeration may touch.
POINT_BUDGET = 2**31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    """F_p for an odd prime p, with inverse and square tables precomputed.

    The tables make scalar field ops O(1) and let vectorized code index
    straight into numpy arrays.
    """

    def __init__(self, p: int):
        if not _is_prime(p) or p < 3:
            raise ValueError(f"p must be an odd prime >= 3, got {p}")
        self.p = p
        inv = np.zeros(p, dtype=np.int64)
        for x in range(1, p):
            inv[x] = pow(x, p - 2, p)
        self.inv = inv
        # is_square[x] is True iff x = y^2 for some y (0 included).
        sq = np.zeros(p, dtype=bool)
        for y in range(p):
            sq[(y * y) % p] = True
        self.is_square = sq

    def inverse(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.inv[x])

    def legendre(self, x: int) -> int:
        """Legendre symbol: 0 at 0, +1 on nonzero squares, -1 otherwise."""
        x %= self.p
        if x == 0:
            return 0
        return 1 if self.is_square[x] else -1

    def sqrt(self, x: int) -> int:
        """Some square root of x, or ValueError if x is a non-square."""
        x %= self.p
        for y in range(self.p):
            if (y * y) % self.p == x:
                return y
        raise ValueError(f"{x} is not a square mod {self.p}")

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"


class CharacterTable:
    """The additive character e(k) = exp(2*pi*i*k/p), tabulated once."""

    def __init__(self, p: int):
        self.p = p
        self.values = np.exp(2j * np.pi * np.arange(p) / p)
        # values[0] is exactly 1.0 by construction; keep it that way.
        self.values[0] = 1.0

    def __call__(self, k: int) -> complex:
        return complex(self.values[k % self.p])


@functools.lru_cache(maxsize=None)
def _char_table(p: int) -> CharacterTable:
    return CharacterTable(p)


def char_eval(field: PrimeField, x: int) -> complex:
    """e(x) = exp(2*pi*i*x/p)."""
    return _char_table(field.p)(x)


def char_vector(field: PrimeField) -> np.ndarray:
    """All p character values as an array; char_vector(F)[k] = e(k)."""
    return _char_table(field.p).values


# ---------------------------------------------------------------------------
# points


def encode_point(coords: Sequence[int], p: int) -> int:
    idx = 0
    for k in range(len(coords) - 1, -1, -1):
        idx = idx * p + (coords[k] % p)
    return idx


def decode_point(index: int, p: int, d: int) -> tuple[int, ...]:
    out = []
    for _ in range(d):
        out.append(index % p)
        index //= p
    return tuple(out)


def grid_size(p: int, d: int, budget: int = POINT_BUDGET) -> int:
    """p^d, or SizeOverflow if that exceeds the point budget."""
    n = p**d
    if n > budget:
        raise SizeOverflow(n, budget, what=f"F_{p}^{d}")
    return n


@dataclass(frozen=True)
class FFVector:
    """A point of F_p^d.  Immutable; arithmetic is coordinatewise mod p."""

    coords: tuple[int, ...]
    field: PrimeField

    def __post_init__(self):
        p = self.field.p
        object.__setattr__(self, "coords", tuple(c % p for c in self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def index(self) -> int:
        return encode_point(self.coords, self.field.p)

    def dot(self, other: "FFVector") -> int:
        assert len(other.coords) == len(self.coords)
        return sum(a * b for a, b in zip(self.coords, other.coords)) % self.field.p

    def __add__(self, other: "FFVector") -> "FFVector":
        return FFVector(
            tuple(a + b for a, b in zip(self.coords, other.coords)), self.field
        )

    def __sub__(self, other: "FFVector") -> "FFVector":
        return FFVector(
            tuple(a - b for a, b in zip(self.coords, other.coords)), self.field
        )

    def __neg__(self) -> "FFVector":
        return FFVector(tuple(-a for a in self.coords), self.field)

    def scale(self, c: int) -> "FFVector":
        return FFVector(tuple(c * a for a in self.coords), self.field)


def enumerate_points(field: PrimeField, d: int) -> Iterator[FFVector]:
    """All p^d points in index order.  Raises SizeOverflow past the budget."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    n = grid_size(field.p, d)
    for idx in range(n):
        yield FFVector(decode_point(idx, field.p, d), field)


def coordinate_array(p: int, d: int) -> np.ndarray:
    """(p^d, d) int array; row i is decode_point(i, p, d).

    The workhorse for vectorized surface/energy code: column k is
    coordinate k of every grid point at once.
    """
    n = grid_size(p, d)
    idx = np.arange(n)
    cols = []
    for _ in range(d):
        cols.append(idx % p)
        idx = idx // p
    return np.stack(cols, axis=1)


# ---------------------------------------------------------------------------
# functions on the grid


class FFunction:
    """Dense complex function on F_p^d, stored flat in index order."""

    __slots__ = ("field", "dim", "data")

    def __init__(self, field: PrimeField, dim: int, data: np.ndarray):
        n = grid_size(field.p, dim)
        if data.shape != (n,):
            raise ValueError(f"expected flat array of length {n}, got {data.shape}")
        self.field = field
        self.dim = dim
        self.data = np.asarray(data, dtype=np.complex128)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, field: PrimeField, dim: int) -> "FFunction":
        return cls(field, dim, np.zeros(grid_size(field.p, dim), dtype=np.complex128))

    @classmethod
    def constant(cls, field: PrimeField, dim: int, value: complex) -> "FFunction":
        f = cls.zeros(field, dim)
        f.data[:] = value
        return f

    @classmethod
    def delta(cls, field: PrimeField, dim: int, point: Sequence[int]) -> "FFunction":
        f = cls.zeros(field, dim)
        f.data[encode_point(point, field.p)] = 1.0
        return f

    @classmethod
    def indicator(
        cls, field: PrimeField, dim: int, points: Iterable[Sequence[int]]
    ) -> "FFunction":
        f = cls.zeros(field, dim)
        for pt in points:
            f.data[encode_point(pt, field.p)] = 1.0
        return f

    @classmethod
    def from_grid(cls, field: PrimeField, grid: np.ndarray) -> "FFunction":
        """Inverse of .grid: a (p,)*d array with axis k = coordinate k."""
        d = grid.ndim
        return cls(field, d, np.asarray(grid, dtype=np.complex128).reshape(-1, order="F"))

    @classmethod
    def random(
        cls,
        field: PrimeField,
        dim: int,
        rng: np.random.Generator,
        kind: str = "complex",
        density: float = 0.5,
    ) -> "FFunction":
        """Random test function.  kind 'complex' draws iid standard complex
        gaussians; 'indicator' keeps each point with probability `density`
        (re-drawing once if the result is empty)."""
        n = grid_size(field.p, dim)
        if kind == "complex":
            data = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        elif kind == "indicator":
            data = (rng.random(n) < density).astype(np.complex128)
            if not data.any():
                data[rng.integers(0, n)] = 1.0
        else:
            raise ValueError(f"unknown kind {kind!r}")
        return cls(field, dim, data)

    # -- access ------------------------------------------------------------

    @property
    def grid(self) -> np.ndarray:
        """View as a (p,)*d array; axis k is coordinate k."""
        p = self.field.p
        return self.data.reshape((p,) * self.dim, order="F")

    def __getitem__(self, point) -> complex:
        if isinstance(point, FFVector):
            return complex(self.data[point.index])
        if isinstance(point, (int, np.integer)):
            return complex(self.data[point])
        return complex(self.data[encode_point(point, self.field.p)])

    def __setitem__(self, point, value: complex) -> None:
        if isinstance(point, FFVector):
            self.data[point.index] = value
        elif isinstance(point, (int, np.integer)):
            self.data[point] = value
        else:
            self.data[encode_point(point, self.field.p)] = value

    def support(self) -> list[tuple[int, ...]]:
        p = self.field.p
        return [
            decode_point(int(i), p, self.dim) for i in np.nonzero(self.data)[0]
        ]

    def copy(self) -> "FFunction":
        return FFunction(self.field, self.dim, self.data.copy())

    # -- pointwise algebra ---------------------------------------------------

    def _like(self, data: np.ndarray) -> "FFunction":
        return FFunction(self.field, self.dim, data)

    def __add__(self, other: "FFunction") -> "FFunction":
        return self._like(self.data + other.data)

    def __sub__(self, other: "FFunction") -> "FFunction":
        return self._like(self.data - other.data)

    def __mul__(self, other) -> "FFunction":
        if isinstance(other, FFunction):
            return self._like(self.data * other.data)
        return self._like(self.data * other)

    __rmul__ = __mul__

    def conj(self) -> "FFunction":
        return self._like(np.conj(self.data))

    def abs(self) -> "FFunction":
        return self._like(np.abs(self.data).astype(np.complex128))


def lp_norm(f: FFunction, p_exp: float, measure: str = "counting") -> float:
    """L^p norm of f.

    measure 'counting' sums |f|^p over the grid; 'normalized' divides the
    sum by p^d first.  p_exp = math.inf gives the sup norm either way.
    """
    if measure not in ("counting", "normalized"):
        raise ValueError(f"unknown measure {measure!r}")
    if p_exp < 1:
        raise ValueError("p_exp must be >= 1")
    mags = np.abs(f.data)
    if math.isinf(p_exp):
        return float(mags.max()) if mags.size else 0.0
    total = float(np.sum(mags**p_exp))
    if measure == "normalized":
        total /= f.field.p**f.dim
    return total ** (1.0 / p_exp)


def inner(f: FFunction, g: FFunction, measure: str = "counting") -> complex:
    """<f, g> = sum f * conj(g), optionally with the normalized measure."""
    val = complex(np.vdot(g.data, f.data))  # vdot conjugates its first arg
    if measure == "normalized":
        val /= f.field.p**f.dim
    return val
