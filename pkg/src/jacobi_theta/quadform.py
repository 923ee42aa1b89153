"""Even positive definite quadratic forms, direction sets and the character epsilon.

Conventions: ``Q(x) = x^T A x / 2`` and ``B(x, y) = x^T A y`` for an even
symmetric integer matrix ``A``.  Everything that can be exact (determinants,
levels, Gram matrices) is computed with Python integers and fractions.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    LinearlyDependent,
    NonUnitValue,
    NotPositiveDefinite,
    NotSymmetric,
    OddDiagonal,
    OddRank,
    Undefined,
    ZeroArgument,
)

IntMatrix = tuple[tuple[int, ...], ...]


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise TypeError("boolean is not an integer entry")
    if isinstance(x, numbers.Integral):
        return int(x)
    if isinstance(x, numbers.Real) and float(x).is_integer():
        return int(x)
    raise TypeError(f"expected an integer entry, got {x!r}")


def _int_matrix(rows) -> IntMatrix:
    rows = [list(r) for r in rows]
    if not rows or any(len(r) != len(rows) for r in rows):
        raise DimensionMismatch("matrix must be square and non-empty")
    return tuple(tuple(_as_int(x) for x in r) for r in rows)


def det_bareiss(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    a = [list(map(int, r)) for r in M]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse_exact(M: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(M)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise NotPositiveDefinite("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                factor = a[i][col]
                a[i] = [x - factor * y for x, y in zip(a[i], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def _rank_exact(rows: Sequence[Sequence[int]]) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    rank, ncols = 0, len(a[0]) if a else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(len(a)):
            if i != rank and a[i][col] != 0:
                factor = a[i][col] / a[rank][col]
                a[i] = [x - factor * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def level_of(A: Sequence[Sequence[int]]) -> int:
    """Smallest N > 0 such that N * A^{-1} is integral with even diagonal."""
    inv = inverse_exact(A)
    n = len(A)
    N = 1
    for i in range(n):
        for j in range(n):
            entry = inv[i][j] / 2 if i == j else inv[i][j]
            N = math.lcm(N, entry.denominator)
    return N


@dataclass(frozen=True)
class QuadraticForm:
    """An even integral positive definite form of even rank ``f = 2r``."""

    A: IntMatrix
    f: int
    r: int
    det_A: int
    level_N: int

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.A, dtype=np.int64)

    @property
    def inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        return inverse_exact(self.A)

    def Q(self, x):
        return quad(self, x)

    def B(self, x, y):
        return bilinear(self, x, y)


def validate_form(A) -> QuadraticForm:
    """Check ``A`` and build a :class:`QuadraticForm`.

    Raises NotSymmetric, OddDiagonal, NotPositiveDefinite or OddRank.
    """
    M = _int_matrix(A)
    f = len(M)
    for i in range(f):
        for j in range(i + 1, f):
            if M[i][j] != M[j][i]:
                raise NotSymmetric(f"A[{i}][{j}] = {M[i][j]} but A[{j}][{i}] = {M[j][i]}")
    for i in range(f):
        if M[i][i] % 2:
            raise OddDiagonal(f"diagonal entry A[{i}][{i}] = {M[i][i]} is odd")
    for s in range(1, f + 1):
        minor = det_bareiss([row[:s] for row in M[:s]])
        if minor <= 0:
            raise NotPositiveDefinite(f"leading principal minor of size {s} is {minor}")
    if f % 2:
        raise OddRank(f"rank f = {f} is odd")
    return QuadraticForm(A=M, f=f, r=f // 2, det_A=det_bareiss(M), level_N=level_of(M))


def _is_int_vector(x) -> bool:
    return all(isinstance(t, numbers.Integral) and not isinstance(t, bool) for t in x)


def _check_len(x, n: int, what: str = "vector") -> None:
    if len(x) != n:
        raise DimensionMismatch(f"{what} has length {len(x)}, expected {n}")


def bilinear(form: QuadraticForm, x, y):
    """``B(x, y) = x^T A y``; exact for integer input, complex double otherwise."""
    _check_len(x, form.f)
    _check_len(y, form.f)
    if _is_int_vector(x) and _is_int_vector(y):
        return sum(int(x[i]) * form.A[i][j] * int(y[j]) for i in range(form.f) for j in range(form.f))
    return complex(np.asarray(x, dtype=complex) @ form.matrix @ np.asarray(y, dtype=complex))


def quad(form: QuadraticForm, x):
    """``Q(x) = B(x, x) / 2``; an integer for integer ``x``."""
    b = bilinear(form, x, x)
    if isinstance(b, int):
        return b // 2  # exact: A has even diagonal
    return b / 2


def gram_apply(G, alpha):
    """``alpha^T G alpha`` (no complex conjugation)."""
    G = [list(r) for r in G]
    _check_len(alpha, len(G))
    if _is_int_vector(alpha) and all(_is_int_vector(r) for r in G):
        n = len(G)
        return sum(int(alpha[i]) * int(G[i][j]) * int(alpha[j]) for i in range(n) for j in range(n))
    a = np.asarray(alpha, dtype=complex)
    return complex(a @ np.asarray(G, dtype=complex) @ a)


@dataclass(frozen=True)
class DirectionSet:
    """Linearly independent integer vectors ``h_1..h_n`` and their Gram matrix."""

    h_vectors: IntMatrix
    G: IntMatrix

    @property
    def n(self) -> int:
        return len(self.h_vectors)

    @property
    def H(self) -> np.ndarray:
        return np.array(self.h_vectors, dtype=np.int64)

    @property
    def index_matrix(self) -> np.ndarray:
        """The Jacobi index ``F = G / 2``."""
        return np.array(self.G, dtype=float) / 2


def make_directions(form: QuadraticForm, h_vectors) -> DirectionSet:
    hs = [tuple(_as_int(t) for t in h) for h in h_vectors]
    if not hs:
        raise DimensionMismatch("at least one direction vector is required")
    for h in hs:
        _check_len(h, form.f, "direction vector")
    if _rank_exact(hs) < len(hs):
        raise LinearlyDependent("direction vectors are linearly dependent")
    G = tuple(tuple(bilinear(form, hi, hj) for hj in hs) for hi in hs)
    return DirectionSet(h_vectors=tuple(hs), G=G)


@dataclass(frozen=True)
class SphericalVector:
    """A complex vector ``v`` with cached ``Q(v)`` and pairings ``B(v, h_j)``."""

    v: tuple[complex, ...]
    q_of_v: complex
    pairings: tuple[complex, ...] = field(default=())

    @property
    def array(self) -> np.ndarray:
        return np.array(self.v, dtype=complex)


def make_spherical(form: QuadraticForm, directions: DirectionSet, v) -> SphericalVector:
    _check_len(v, form.f, "spherical vector")
    vv = tuple(complex(t) for t in v)
    pairings = tuple(bilinear(form, vv, h) for h in directions.h_vectors)
    return SphericalVector(v=vv, q_of_v=complex(quad(form, vv)), pairings=tuple(complex(p) for p in pairings))


def _jacobi(a: int, n: int) -> int:
    # n odd positive
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol ``(a | n)`` for arbitrary integers, not both zero."""
    a, n = int(a), int(n)
    if a == 0 and n == 0:
        raise Undefined("Kronecker symbol (0 | 0) is undefined")
    if n == 0:
        return 1 if abs(a) == 1 else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            sign = -sign
    if n == 1:
        return sign
    return sign * _jacobi(a, n)


def epsilon(form: QuadraticForm, d: int) -> int:
    """The character ``eps(d) = ((-1)^r det A | d)``, with ``eps(-d) = (-1)^r eps(d)``."""
    d = int(d)
    if d == 0:
        raise ZeroArgument("epsilon(0) is not defined")
    D = (-1) ** form.r * form.det_A
    value = kronecker(D, abs(d))
    if value == 0:
        raise NonUnitValue(f"({D} | {abs(d)}) = 0: d is not coprime to the discriminant")
    if d < 0:
        value *= (-1) ** form.r
    return value


class Admissibility(NamedTuple):
    isotropic: bool
    orthogonal: bool


def check_admissible(form: QuadraticForm, directions: DirectionSet, v, tol: float = 1e-12) -> Admissibility:
    """Flags for the hypotheses ``Q(v) = 0`` and ``B(v, h_j) = 0`` for all j."""
    vec = v.v if isinstance(v, SphericalVector) else v
    _check_len(vec, form.f, "spherical vector")
    for h in directions.h_vectors:
        _check_len(h, form.f, "direction vector")
    qv = quad(form, tuple(complex(t) for t in vec))
    pairings = [bilinear(form, tuple(complex(t) for t in vec), h) for h in directions.h_vectors]
    return Admissibility(
        isotropic=abs(qv) <= tol,
        orthogonal=max(abs(p) for p in pairings) <= tol,
    )
