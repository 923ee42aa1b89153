"""Complete enumeration of lattice points in ellipsoids ``Q(m) <= R``.

The search is a breadth-first Fincke-Pohst branch and bound on the Cholesky
factor of ``A/2``.  Floating point only decides which candidates to look at;
membership is decided by an exact integer evaluation of ``Q``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational, Real

import numpy as np

from .errors import DimensionMismatch, InadmissibleResidue, RadiusTooLarge
from .quadform import QuadraticForm

DEFAULT_MAX_POINTS = 10**7
GUARD = 1e-9


def _as_fraction(R) -> Fraction:
    if isinstance(R, Fraction):
        return R
    if isinstance(R, Rational):
        return Fraction(R.numerator, R.denominator)
    if isinstance(R, Real):
        return Fraction(float(R))
    raise TypeError(f"radius must be a real number, got {R!r}")


def _quad_rows(A: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Exact ``Q`` for each row of an int64 array (entries are small)."""
    return np.einsum("ij,jk,ik->i", pts, A, pts) // 2


def _candidates(A: np.ndarray, shift: np.ndarray, bound: float, max_points: int) -> np.ndarray:
    """Integer x with ``Q(x + shift) <= bound`` (up to the guard band)."""
    f = A.shape[0]
    U = np.linalg.cholesky(A / 2.0).T  # A/2 = U^T U, U upper triangular
    diag = np.diag(U)
    mu = U / diag[:, None]
    budget = bound * (1 + GUARD) + GUARD

    # columns are filled from the last coordinate down to the first
    cols = np.zeros((1, f), dtype=np.int64)
    rem = np.array([budget])
    for i in range(f - 1, -1, -1):
        y_tail = cols[:, i + 1:] + shift[i + 1:]
        centre = -(y_tail @ mu[i, i + 1:]) - shift[i]
        width = np.sqrt(np.maximum(rem, 0.0)) / diag[i]
        lo = np.ceil(centre - width - GUARD).astype(np.int64)
        hi = np.floor(centre + width + GUARD).astype(np.int64)
        counts = np.maximum(hi - lo + 1, 0)
        total = int(counts.sum())
        if total > 4 * max_points:
            raise RadiusTooLarge(f"more than {4 * max_points} candidates at coordinate {i}")
        parent = np.repeat(np.arange(len(cols)), counts)
        offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        xi = lo[parent] + offsets
        cols = cols[parent]
        cols[:, i] = xi
        resid = xi - centre[parent]
        rem = rem[parent] - (diag[i] * resid) ** 2
    return cols


def _lex_sorted(pts: np.ndarray) -> np.ndarray:
    if len(pts) == 0:
        return pts
    order = np.lexsort(tuple(pts[:, i] for i in range(pts.shape[1] - 1, -1, -1)))
    return pts[order]


def enumerate_raw(A: tuple, R: Fraction, p: tuple, N: int, max_points: int) -> np.ndarray:
    """Uncached core: ``m = p (mod N)`` with ``Q(m) <= R N^2``, unordered and read-only."""
    Am = np.array(A, dtype=np.int64)
    f = Am.shape[0]
    pv = np.array(p, dtype=np.int64)
    bound_int = math.floor(R * N * N)  # Q(m) is an integer
    if bound_int < 0:
        out = np.zeros((0, f), dtype=np.int64)
    else:
        x = _candidates(Am, pv / N, bound_int / (N * N), max_points)
        m = pv + N * x
        # overflow guard for the exact check
        if len(m) and int(np.abs(m).max()) ** 2 * int(np.abs(Am).max()) * f * f >= 2**62:
            raise RadiusTooLarge("coordinates too large for exact 64-bit evaluation")
        keep = _quad_rows(Am, m) <= bound_int
        out = m[keep]
        if len(out) > max_points:
            raise RadiusTooLarge(f"{len(out)} points exceed the cap of {max_points}")
    out.setflags(write=False)
    return out


@lru_cache(maxsize=8)
def _enumerate_cached(A: tuple, R: Fraction, p: tuple, N: int, max_points: int) -> np.ndarray:
    out = _lex_sorted(enumerate_raw(A, R, p, N, max_points))
    out.setflags(write=False)
    return out


def enumerate_points(form: QuadraticForm, R, max_points: int = DEFAULT_MAX_POINTS) -> np.ndarray:
    """All ``m`` in ``Z^f`` with ``Q(m) <= R``, lexicographically sorted.

    Returns a read-only ``(P, f)`` int64 array.  Raises RadiusTooLarge when
    the count exceeds ``max_points``.
    """
    R = _as_fraction(R)
    if R < 0:
        raise ValueError("radius must be nonnegative")
    return _enumerate_cached(form.A, R, (0,) * form.f, 1, int(max_points))


def check_residue(form: QuadraticForm, p, N: int) -> tuple[int, ...]:
    if len(p) != form.f:
        raise DimensionMismatch(f"residue has length {len(p)}, expected {form.f}")
    p = tuple(int(t) for t in p)
    Ap = form.matrix @ np.array(p, dtype=np.int64)
    if np.any(Ap % N):
        raise InadmissibleResidue(f"A p = {Ap.tolist()} is not 0 mod {N}")
    return p


def enumerate_congruence(form: QuadraticForm, p, N: int, R, max_points: int = DEFAULT_MAX_POINTS) -> np.ndarray:
    """All ``m = p (mod N)`` with ``Q(m) / N^2 <= R``, lexicographically sorted.

    Requires ``A p = 0 (mod N)``; otherwise InadmissibleResidue.
    """
    N = int(N)
    if N <= 0:
        raise ValueError("modulus must be positive")
    p = check_residue(form, p, N)
    R = _as_fraction(R)
    if R < 0:
        raise ValueError("radius must be nonnegative")
    p = tuple(t % N for t in p)
    return _enumerate_cached(form.A, R, p, N, int(max_points))
