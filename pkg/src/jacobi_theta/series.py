"""Theta series with spherical weights, E2, Psi combinations and generating polynomials.

The basic object is

    theta_k(tau, z) = sum_m B(v, m)^k q^Q(m) exp(2 pi i sum_j z_j B(m, h_j))

computed either as an exact coefficient map (``theta_coeffs``) or as a
numerically truncated sum (``theta_eval``).
"""

from __future__ import annotations

import math
from collections import OrderedDict
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (
    DimensionMismatch,
    NonconvergentInput,
    OutOfRange,
    RadiusTooLarge,
    SingularGram,
    TruncationFailure,
)
from .expansion import FourierExpansion
from .lattice import (
    DEFAULT_MAX_POINTS,
    check_residue,
    enumerate_congruence,
    enumerate_points,
    enumerate_raw,
)
from .quadform import (
    DirectionSet,
    QuadraticForm,
    SphericalVector,
    bilinear,
    make_directions,
    make_spherical,
    validate_form,
)

DEFAULT_EPS = 1e-10
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ThetaSpec:
    """One series ``theta_h(Q, v, k, tau, z)``."""

    form: QuadraticForm
    directions: DirectionSet
    v: SphericalVector
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("exponent k must be nonnegative")
        if len(self.v.v) != self.form.f or any(len(h) != self.form.f for h in self.directions.h_vectors):
            raise DimensionMismatch("v and h_j must have length f")

    @classmethod
    def build(cls, A, h_vectors, v, k: int) -> ThetaSpec:
        form = A if isinstance(A, QuadraticForm) else validate_form(A)
        directions = h_vectors if isinstance(h_vectors, DirectionSet) else make_directions(form, h_vectors)
        return cls(form, directions, make_spherical(form, directions, v), int(k))

    @property
    def n(self) -> int:
        return self.directions.n

    def with_k(self, k: int) -> ThetaSpec:
        return ThetaSpec(self.form, self.directions, self.v, int(k))

    def with_v(self, v) -> ThetaSpec:
        return ThetaSpec(self.form, self.directions, make_spherical(self.form, self.directions, v), self.k)


@dataclass(frozen=True)
class TruncatedXPolynomial:
    """``sum_{t <= T} coeffs[t] X^t`` with arithmetic truncated at degree ``T``."""

    coeffs: tuple[complex, ...]

    @property
    def T(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, t: int) -> complex:
        return self.coeffs[t] if 0 <= t <= self.T else 0j

    def __mul__(self, other):
        if not isinstance(other, TruncatedXPolynomial):
            return TruncatedXPolynomial(tuple(other * c for c in self.coeffs))
        T = min(self.T, other.T)
        return TruncatedXPolynomial(
            tuple(sum(self.coeffs[i] * other.coeffs[t - i] for i in range(t + 1)) for t in range(T + 1))
        )

    __rmul__ = __mul__

    def __sub__(self, other: TruncatedXPolynomial) -> TruncatedXPolynomial:
        T = min(self.T, other.T)
        return TruncatedXPolynomial(tuple(self.coeffs[t] - other.coeffs[t] for t in range(T + 1)))

    def rescale(self, s: complex) -> TruncatedXPolynomial:
        """Substitute ``X -> s X``."""
        return TruncatedXPolynomial(tuple(c * s**t for t, c in enumerate(self.coeffs)))

    @classmethod
    def exp_x2(cls, a: complex, T: int) -> TruncatedXPolynomial:
        """Truncated ``exp(a X^2)``."""
        coeffs = [0j] * (T + 1)
        for j in range(T // 2 + 1):
            coeffs[2 * j] = a**j / math.factorial(j)
        return cls(tuple(coeffs))


# -- small exact helpers ---------------------------------------------------


def delta_coeff(t: int, k: int) -> int:
    """``k! / (2^t t! (k - 2t)!)``, an integer for ``0 <= t <= k // 2``."""
    if k < 0 or not 0 <= t <= k // 2:
        raise OutOfRange(f"delta({t}, {k}) needs 0 <= t <= floor(k/2)")
    value = Fraction(math.factorial(k), 2**t * math.factorial(t) * math.factorial(k - 2 * t))
    assert value.denominator == 1
    return int(value)


def _ipow(x: np.ndarray, k: int) -> np.ndarray:
    # repeated multiplication keeps (-x)^k == (-1)^k x^k bit for bit
    out = np.ones_like(x)
    for _ in range(k):
        out = out * x
    return out


def _csum(x: np.ndarray) -> complex:
    return complex(math.fsum(x.real), math.fsum(x.imag))


# -- exact coefficients ------------------------------------------------------


def _group_sum(ell: np.ndarray, nu: np.ndarray, w: np.ndarray, lmax: int, den: int, n: int) -> FourierExpansion:
    if len(ell) == 0:
        return FourierExpansion({}, lmax, n, den)
    keys = np.column_stack([ell, nu])
    order = np.lexsort(tuple(keys[:, i] for i in range(keys.shape[1] - 1, -1, -1)))
    keys, w = keys[order], w[order]
    change = np.any(keys[1:] != keys[:-1], axis=1)
    starts = np.concatenate([[0], np.nonzero(change)[0] + 1, [len(keys)]])
    entries = {}
    for a, b in zip(starts[:-1], starts[1:]):
        c = _csum(w[a:b])
        if c != 0:
            entries[(int(keys[a, 0]), tuple(int(t) for t in keys[a, 1:]))] = c
    return FourierExpansion(entries, lmax, n, den)


def theta_coeffs(spec: ThetaSpec, lmax: int) -> FourierExpansion:
    """``c(l, nu) = sum over Q(m) = l, B(m, h_j) = nu_j of B(v, m)^k`` for ``l <= lmax``."""
    if lmax < 0:
        raise ValueError("lmax must be nonnegative")
    pts = enumerate_points(spec.form, int(lmax))
    Am = pts @ spec.form.matrix
    ell = np.einsum("ij,ij->i", Am, pts) // 2
    nu = Am @ spec.directions.H.T
    w = _ipow(Am @ spec.v.array, spec.k)
    return _group_sum(ell, nu, w, int(lmax), 1, spec.n)


def congruence_theta_coeffs(form, p, ell_vec, k, directions, lmax) -> FourierExpansion:
    """Coefficients of the congruence theta; exponents stored as numerators over ``N^2``.

    The key ``(L, nu)`` stands for ``q^(L / N^2) exp(2 pi i z.nu / N)``; the
    ``nu`` stored are the integers ``B(m, h_j)`` so the ``z`` phase is applied
    with ``z / N`` by callers who need it.
    """
    N = form.level_N
    pts = enumerate_congruence(form, p, N, lmax)
    Am = pts @ form.matrix
    ell = np.einsum("ij,ij->i", Am, pts) // 2
    nu = Am @ directions.H.T
    w = _ipow(Am @ np.asarray(ell_vec, dtype=complex) / N, k)
    return _group_sum(ell, nu, w, int(lmax), N * N, directions.n)


# -- truncated evaluation ----------------------------------------------------


@dataclass(frozen=True)
class EvalInfo:
    """Truncation metadata: the accepted radius (in units of the q-exponent),
    number of lattice points summed, and the last doubling increment."""

    radius: int
    points: int
    increment: float


_RECORDER: ContextVar[list | None] = ContextVar("truncation_recorder", default=None)


@contextmanager
def record_truncation():
    """Collect the EvalInfo of every truncated evaluation made inside the block."""
    infos: list[EvalInfo] = []
    token = _RECORDER.set(infos)
    try:
        yield infos
    finally:
        _RECORDER.reset(token)


def _pair_norm(form: QuadraticForm, w: np.ndarray) -> float:
    """Bound ``C`` with ``|B(w, m)| <= C sqrt(2 Q(m))`` for real m (Cauchy-Schwarz)."""
    A = form.matrix.astype(float)
    re, im = w.real, w.imag
    return math.sqrt(max(re @ A @ re, 0.0)) + math.sqrt(max(im @ A @ im, 0.0))


def _seed_radius(form: QuadraticForm, directions: DirectionSet, wnorm: float, k: int, tau: complex, z, eps: float) -> int:
    """Smallest integer radius whose estimated tail is below ``eps / 4``.

    Terms are bounded by ``(C sqrt(2l))^k exp(-2 pi y l + 2 pi beta sqrt(2l))``
    with ``beta = sum_j |Im z_j| sqrt(G_jj)``; shells are counted with the
    covering-radius volume estimate.
    """
    y = tau.imag
    G = np.array(directions.G, dtype=float)
    beta = float(np.sum(np.abs(np.imag(z)) * np.sqrt(np.diag(G))))
    f, r = form.f, form.r
    log_vol = r * math.log(math.pi) - math.lgamma(r + 1) - 0.5 * math.log(form.det_A)
    rho = 0.5 * math.sqrt(sum(form.A[i][i] for i in range(f)))
    log_target = math.log(eps / 4)

    L = 64
    while True:
        j = np.arange(L + 1, dtype=float)
        upper = (np.sqrt(2 * (j + 1)) + rho) ** f
        lower = np.maximum(np.sqrt(2 * j) - rho, 0.0) ** f
        log_count = log_vol + np.log(np.maximum(upper - lower, 1.0))
        log_weight = k * np.log(max(wnorm, 1e-300) * np.sqrt(2 * (j + 1))) if k else 0.0
        log_term = log_count + log_weight - 2 * math.pi * y * j + 2 * math.pi * beta * np.sqrt(2 * (j + 1))
        # the last terms must be negligible and decreasing
        if log_term[-1] < log_target - 30 and log_term[-1] < log_term[-2]:
            break
        L *= 2
        if L > 10**8:
            raise TruncationFailure("tail estimate does not decay")
    tail = np.logaddexp.accumulate(log_term[::-1])[::-1]  # tail[j] = log sum_{i >= j}
    ok = np.nonzero(tail <= log_target)[0]
    return max(int(ok[0]) if len(ok) else L, 1)


def _grid_radius(R: int) -> int:
    """Round up to ``2^j`` or ``3 * 2^(j-2)`` so nearby calls share one enumeration."""
    p = 1 << max(R - 1, 0).bit_length()
    return 3 * p // 4 if 3 * p // 4 >= R else p


@dataclass(frozen=True)
class _Ball:
    """Lattice points of one radius grouped by ``(Q(m), nu(m))``, sorted by ``Q``.

    When the point set is symmetric under ``m -> -m`` only the groups with
    ``nu >= 0`` (lexicographically) are kept; the mirror group has coefficient
    ``(-1)^k`` times theirs.  Summing weights within a group first makes
    coefficients that vanish by symmetry come out as exact zeros.
    """

    radius: int
    Am: np.ndarray  # A m / N per kept point
    starts: np.ndarray  # first point of each group
    g_ell: np.ndarray  # integer numerator of the q-exponent per group
    g_nu: np.ndarray  # B(m, h_j) / N per group
    g_zero: np.ndarray  # nu == 0
    g_count: np.ndarray  # points of the full ball represented by each group
    symmetric: bool

    @property
    def points(self) -> int:
        return int(self.g_count.sum())

    def prefix(self, R: int, N: int) -> _Ball:
        """The sub-ball of radius ``R <= self.radius`` (views, no copy)."""
        gcut = int(np.searchsorted(self.g_ell, R * N * N, side="right"))
        pcut = int(self.starts[gcut]) if gcut < len(self.starts) else len(self.Am)
        return _Ball(
            R, self.Am[:pcut], self.starts[:gcut], self.g_ell[:gcut], self.g_nu[:gcut], self.g_zero[:gcut],
            self.g_count[:gcut], self.symmetric,
        )


def _build_ball(A: tuple, H: tuple, R: int, p: tuple, N: int, max_points: int) -> _Ball:
    pts = enumerate_raw(A, Fraction(R), p, N, max_points)
    Am = pts @ np.array(A, dtype=np.int64)
    ell = np.einsum("ij,ij->i", Am, pts) // 2
    nu = Am @ np.array(H, dtype=np.int64).T
    symmetric = all(2 * t % N == 0 for t in p)
    if symmetric and len(pts):
        lead = nu[np.arange(len(nu)), np.argmax(nu != 0, axis=1)]
        keep = lead >= 0
        Am, ell, nu = Am[keep], ell[keep], nu[keep]
    order = np.lexsort(tuple(nu[:, j] for j in range(nu.shape[1] - 1, -1, -1)) + (ell,))
    Am, ell, nu = Am[order], ell[order], nu[order]
    if len(ell):
        change = (ell[1:] != ell[:-1]) | np.any(nu[1:] != nu[:-1], axis=1)
        starts = np.concatenate([[0], np.nonzero(change)[0] + 1])
    else:
        starts = np.zeros(0, dtype=np.int64)
    g_zero = ~np.any(nu[starts] != 0, axis=1)
    g_count = np.diff(np.append(starts, len(ell)))
    if symmetric:
        g_count = np.where(g_zero, g_count, 2 * g_count)
    ball = _Ball(
        R, Am.astype(float) / N, starts, ell[starts], nu[starts].astype(float) / N, g_zero, g_count, symmetric
    )
    for arr in (ball.Am, ball.starts, ball.g_ell, ball.g_nu, ball.g_zero, ball.g_count):
        arr.setflags(write=False)
    return ball


# one ball per (form, directions, residue); smaller radii are prefixes of it
_BALLS: OrderedDict = OrderedDict()
_BALL_KEYS = 4


def _prepared(A: tuple, H: tuple, R: int, p: tuple, N: int, max_points: int) -> _Ball:
    key = (A, H, p, N, max_points)
    ball = _BALLS.get(key)
    if ball is None or ball.radius < R:
        ball = _build_ball(A, H, R, p, N, max_points)
        _BALLS[key] = ball
    _BALLS.move_to_end(key)
    while len(_BALLS) > _BALL_KEYS:
        _BALLS.popitem(last=False)
    return ball if ball.radius == R else ball.prefix(R, N)


def _truncated_sum(
    form: QuadraticForm,
    directions: DirectionSet,
    w: np.ndarray,
    k: int,
    tau: complex,
    z,
    eps: float,
    p: tuple | None = None,
    max_points: int = DEFAULT_MAX_POINTS,
) -> tuple[complex, EvalInfo]:
    """Adaptive radius doubling.  With ``p`` set, sums over ``m = p (mod N)``
    with exponents ``Q(m)/N^2``, ``B(m, h_j)/N`` and weights ``(B(w, m)/N)^k``.
    """
    tau = complex(tau)
    if not tau.imag > 0:
        raise NonconvergentInput(f"Im(tau) = {tau.imag} must be positive")
    z = np.asarray(z, dtype=complex)
    if z.shape != (directions.n,):
        raise DimensionMismatch(f"z must have length {directions.n}")
    N = 1 if p is None else form.level_N
    p = (0,) * form.f if p is None else tuple(t % N for t in p)
    even = k % 2 == 0
    R = _grid_radius(_seed_radius(form, directions, _pair_norm(form, w), k, tau, z, eps))
    while True:
        try:
            ball = _prepared(form.A, directions.h_vectors, 2 * R, p, N, max_points)
        except RadiusTooLarge as exc:
            raise TruncationFailure(f"point cap reached before tolerance {eps} (radius {2 * R})") from exc
        weights = _ipow(ball.Am @ w, k) if k else np.ones(len(ball.Am), dtype=complex)
        coeffs = np.add.reduceat(weights, ball.starts) if len(ball.starts) else weights[:0]
        base = (2j * np.pi * tau / (N * N)) * ball.g_ell
        phase = 2j * np.pi * (ball.g_nu @ z)
        if ball.symmetric:
            factor = np.exp(base + phase) + (1 if even else -1) * np.exp(base - phase)
            # nu = 0 groups are their own mirror image
            factor[ball.g_zero] = np.exp(base[ball.g_zero]) if even else 0
        else:
            factor = np.exp(base + phase)
        terms = coeffs * factor
        cut = int(np.searchsorted(ball.g_ell, R * N * N, side="right"))
        head = complex(np.sum(terms[:cut]))
        rest = complex(np.sum(terms[cut:]))
        total = head + rest
        if abs(rest) <= 0.5 * eps * max(1.0, abs(total)):
            info = EvalInfo(radius=2 * R, points=ball.points, increment=abs(rest))
            recorder = _RECORDER.get()
            if recorder is not None:
                recorder.append(info)
            return total, info
        R *= 2


def theta_eval_info(spec: ThetaSpec, tau: complex, z, eps: float = DEFAULT_EPS) -> tuple[complex, EvalInfo]:
    return _truncated_sum(spec.form, spec.directions, spec.v.array, spec.k, tau, z, eps)


def theta_eval(spec: ThetaSpec, tau: complex, z, eps: float = DEFAULT_EPS) -> complex:
    """Numerical value of the series at ``(tau, z)``.

    The radius is doubled until the last doubling changes the sum by at most
    ``eps/2 * max(1, |value|)``.  Raises NonconvergentInput for Im(tau) <= 0
    and TruncationFailure when the point cap is reached first.
    """
    return theta_eval_info(spec, tau, z, eps)[0]


def congruence_theta_eval_info(form, p, ell_vec, k, directions, tau, z, eps=DEFAULT_EPS):
    p = check_residue(form, p, form.level_N)
    ell_vec = np.asarray(ell_vec, dtype=complex)
    if ell_vec.shape != (form.f,):
        raise DimensionMismatch(f"ell vector must have length {form.f}")
    return _truncated_sum(form, directions, ell_vec, int(k), tau, z, eps, p=p)


def congruence_theta_eval(form, p, ell_vec, k, directions, tau, z, eps=DEFAULT_EPS) -> complex:
    """``N^-k sum_{m = p (N)} (l^T A m)^k exp(2 pi i (tau Q(m)/N^2 + sum_j z_j B(m, h_j)/N))``.

    ``N`` is the level of the form and ``A p`` must vanish mod ``N``.
    """
    return congruence_theta_eval_info(form, p, ell_vec, k, directions, tau, z, eps)[0]


# -- Eisenstein series -------------------------------------------------------


@lru_cache(maxsize=8)
def _sigma1_table(M: int) -> np.ndarray:
    sigma = np.zeros(M + 1, dtype=np.int64)
    for d in range(1, M + 1):
        sigma[d::d] += d
    sigma.setflags(write=False)
    return sigma


def _e2_terms(y: float, eps: float) -> int:
    x = math.exp(-2 * math.pi * y)
    # sigma_1(m) <= m^2; the tail of 2 m^2 x^m past M is bounded geometrically
    M = max(int(4 / -math.log(x)), 1)
    while True:
        ratio = x * ((M + 2) / (M + 1)) ** 2
        if ratio < 1 and 2 * (M + 1) ** 2 * x ** (M + 1) / (1 - ratio) <= eps / 2:
            return M
        M += max(M // 4, 1)


def eisenstein_e2(tau: complex, eps: float = 1e-14) -> complex:
    """``E2(tau) = -1/12 + 2 sum_{m >= 1} sigma_1(m) q^m``.

    This normalisation satisfies
    ``(c tau + d)^-2 E2(g tau) = E2(tau) - c / (2 pi i (c tau + d))``.
    """
    tau = complex(tau)
    if not tau.imag > 0:
        raise NonconvergentInput(f"Im(tau) = {tau.imag} must be positive")
    M = _e2_terms(tau.imag, eps)
    m = np.arange(1, M + 1)
    terms = _sigma1_table(M)[1:] * np.exp(2j * np.pi * tau * m)
    return -1 / 12 + 2 * _csum(terms)


def e2_qseries(lmax: int) -> list[Fraction]:
    """Exact q-coefficients of E2 up to ``q^lmax``."""
    sigma = _sigma1_table(max(lmax, 1))
    return [Fraction(-1, 12)] + [Fraction(2 * int(sigma[m])) for m in range(1, lmax + 1)]


# -- Psi and generating functions ---------------------------------------------


def psi_eval(spec: ThetaSpec, tau: complex, z, eps: float = DEFAULT_EPS, e2=None) -> complex:
    """``Psi = sum_t delta(t, k) (2 Q(v) E2(tau))^t theta_{k-2t}``.

    ``e2`` overrides the Eisenstein series (used to probe normalisations).
    """
    if spec.v.q_of_v == 0:
        return theta_eval(spec, tau, z, eps)
    e2 = eisenstein_e2 if e2 is None else e2
    base = 2 * spec.v.q_of_v * e2(tau)
    terms = spec.k // 2 + 1
    total = 0j
    for t in range(terms):
        coef = delta_coeff(t, spec.k) * base**t
        share = eps / terms / max(1.0, abs(coef))
        total += coef * theta_eval(spec.with_k(spec.k - 2 * t), tau, z, share)
    return total


def psi_coeffs(spec: ThetaSpec, lmax: int) -> FourierExpansion:
    """Fourier coefficients of Psi, using the exact q-expansion of E2."""
    e2 = [complex(c) for c in e2_qseries(lmax)]
    total = FourierExpansion({}, lmax, spec.n)
    power = [1.0 + 0j] + [0j] * lmax  # E2^t, truncated
    for t in range(spec.k // 2 + 1):
        if t:
            power = [sum(power[i] * e2[j - i] for i in range(j + 1)) for j in range(lmax + 1)]
        coef = delta_coeff(t, spec.k) * (2 * spec.v.q_of_v) ** t
        if t and coef == 0:
            break
        total = total + theta_coeffs(spec.with_k(spec.k - 2 * t), lmax).times_q_series(power).scale(coef)
    return total


def generating_coefficient_factor(t: int) -> complex:
    """``2^(t/2) (2 pi i)^t / t!`` with the positive real square root of 2."""
    return SQRT2**t * (2j * math.pi) ** t / math.factorial(t)


def theta_generating_poly(form, directions, v, tau, z, T: int, eps: float = DEFAULT_EPS) -> TruncatedXPolynomial:
    """Degree-``T`` truncation of ``sum_t 2^(t/2) theta_t (2 pi i X)^t / t!``."""
    if T < 0:
        raise ValueError("T must be nonnegative")
    spec = ThetaSpec(form, directions, _as_spherical(form, directions, v), 0)
    return TruncatedXPolynomial(
        tuple(generating_coefficient_factor(t) * theta_eval(spec.with_k(t), tau, z, eps) for t in range(T + 1))
    )


def e2_hat_poly(form, v, tau, T: int, eps: float = 1e-14, e2=None) -> TruncatedXPolynomial:
    """Truncation of ``exp(2 Q(v) E2(tau) (2 pi i X)^2)``."""
    qv = v.q_of_v if isinstance(v, SphericalVector) else complex(bilinear(form, v, v)) / 2
    e2 = eisenstein_e2 if e2 is None else e2
    if qv == 0:
        return TruncatedXPolynomial((1 + 0j,) + (0j,) * T)
    return TruncatedXPolynomial.exp_x2(2 * qv * e2(tau, eps) * (2j * math.pi) ** 2, T)


def _as_spherical(form, directions, v) -> SphericalVector:
    return v if isinstance(v, SphericalVector) else make_spherical(form, directions, v)


# -- decomposition along the directions -----------------------------------


def spherical_decomposition(form: QuadraticForm, directions: DirectionSet, v) -> tuple[np.ndarray, np.ndarray]:
    """Split ``v = sum_i alpha_i h_i + u`` with ``B(u, h_j) = 0`` for all j."""
    vec = np.asarray(v.v if isinstance(v, SphericalVector) else v, dtype=complex)
    if vec.shape != (form.f,):
        raise DimensionMismatch(f"v must have length {form.f}")
    G = np.array(directions.G, dtype=float)
    if np.linalg.matrix_rank(G) < directions.n:
        raise SingularGram("Gram matrix of the directions is singular")
    H = directions.H.astype(float)
    pairings = H @ form.matrix @ vec
    alpha = np.linalg.solve(G, pairings)
    u = vec - alpha @ H
    return alpha, u


def reconstruct_from_orthogonal(spec: ThetaSpec, lmax: int) -> FourierExpansion:
    """Rebuild ``theta_coeffs(spec)`` from the orthogonal part ``u`` of ``v`` by
    the multinomial expansion of ``B(sum alpha_i h_i + u, m)^k`` with
    ``B(h_i, m)`` realised as z-derivatives."""
    from itertools import product

    from .expansion import z_derivative

    alpha, u = spherical_decomposition(spec.form, spec.directions, spec.v)
    n, k = spec.n, spec.k
    total = FourierExpansion({}, lmax, n)
    base_cache: dict[int, FourierExpansion] = {}
    for ps in product(range(k + 1), repeat=n):
        k1 = k - sum(ps)
        if k1 < 0:
            continue
        if k1 not in base_cache:
            base_cache[k1] = theta_coeffs(spec.with_v(u).with_k(k1), lmax)
        term = base_cache[k1]
        coef = math.factorial(k) / math.factorial(k1)
        for i, p_i in enumerate(ps):
            coef = coef / math.factorial(p_i) * alpha[i] ** p_i
            for _ in range(p_i):
                term = z_derivative(term, i + 1)
        total = total + term.scale(coef)
    return total
